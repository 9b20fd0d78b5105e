#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kakeya_hash/balance/balance.hpp"
#include "kakeya_hash/core/error.hpp"
#include "kakeya_hash/core/rational.hpp"
#include "kakeya_hash/linalg/matrix.hpp"
#include "kakeya_hash/linalg/subspace.hpp"
#include "kakeya_hash/polymethod/hasse.hpp"

namespace kakeya_hash {

/// The n-tuple of linear forms u t1 + v t2 in F_q[t1, t2].
struct LinearFormVector {
  Vec u;
  Vec v;

  /// dim span{u, v} = 2.
  bool full(const FieldPtr& field) const {
    if (u.size() < 2) return false;
    return rank(Matrix::from_rows(field, {u, v})) == 2;
  }

  /// x_i -> u_i t1 + v_i t2, as bivariate polynomials.
  std::vector<MultiPoly> as_polys(const FieldPtr& field) const {
    std::vector<MultiPoly> out;
    for (std::size_t i = 0; i < u.size(); ++i) {
      MultiPoly p(field, 2);
      p.add_term({1, 0}, u[i]);
      p.add_term({0, 1}, v[i]);
      out.push_back(std::move(p));
    }
    return out;
  }

  friend bool operator==(const LinearFormVector&, const LinearFormVector&) = default;
};

/// All (u, v) in F_q^n x F_q^n, u major and v minor in encode() order; with full_only, those with
/// dim span{u, v} = 2.
inline std::vector<LinearFormVector> enumerate_V(const FieldPtr& field, std::size_t n, bool full_only,
                                                 std::uint64_t budget = kDefaultBudget) {
  const std::uint64_t side = checked_pow(field->q(), n);
  if (BigInt(side) * side > budget) {
    throw BudgetExceeded("V has q^(2n) = " + (BigInt(side) * side).str() + " elements, budget is " + std::to_string(budget));
  }
  std::vector<LinearFormVector> out;
  for_each_vector(field->q(), n, [&](const Vec& u) {
    for_each_vector(field->q(), n, [&](const Vec& v) {
      LinearFormVector lf{u, v};
      if (!full_only || lf.full(field)) out.push_back(std::move(lf));
    });
  });
  return out;
}

/// (q^n - 1)(q^n - q): ordered pairs of independent vectors.
inline BigInt v_full_size(std::uint32_t q, std::size_t n) {
  if (n < 2) return 0;
  const BigInt qn = pow_big(BigInt(q), n);
  return (qn - 1) * (qn - q);
}

struct EvalRow {
  std::size_t point = 0;  // index into the point sequence
  Exponents j;            // derivative multi-index, weight below m
};

/// EVAL^m(S, W) with bivariate polynomial entries: entry ((x, j), w) is the j-th Hasse derivative
/// of x^w composed with the linear forms x.
struct EvalMatrix {
  FieldPtr field;
  std::vector<EvalRow> rows;
  std::vector<Exponents> cols;
  std::vector<std::vector<MultiPoly>> entries;  // [row][col]

  std::size_t max_degree() const {
    int d = 0;
    for (const auto& r : entries)
      for (const auto& e : r) d = std::max(d, e.degree());
    return static_cast<std::size_t>(d);
  }
};

/// Derivative multi-indices of weight below m, weight ascending, graded-lex within a weight.
inline std::vector<Exponents> derivative_indices(std::size_t n, std::uint32_t m) {
  if (m == 0) return {};
  return monomials_up_to(n, m - 1);
}

inline EvalMatrix build_eval_matrix(const FieldPtr& field, const std::vector<LinearFormVector>& points,
                                    const std::vector<Exponents>& W, std::uint32_t m) {
  EvalMatrix E{field, {}, W, {}};
  if (points.empty()) return E;
  const std::size_t n = points.front().u.size();
  for (const auto& w : W) detail::require(w.size() == n, "monomial arity does not match the forms");
  const auto js = derivative_indices(n, m);
  std::vector<MultiPoly> monos;
  for (const auto& w : W) monos.push_back(MultiPoly::monomial(field, w));
  for (std::size_t pi = 0; pi < points.size(); ++pi) {
    detail::require(points[pi].u.size() == n && points[pi].v.size() == n, "forms of differing length");
    const auto images = points[pi].as_polys(field);
    for (const auto& j : js) {
      E.rows.push_back({pi, j});
      std::vector<MultiPoly> row;
      for (const auto& f : monos) row.push_back(hasse_derivative(f, j).substitute(images));
      E.entries.push_back(std::move(row));
    }
  }
  return E;
}

/// EVAL^m(S, W) at points of F_q^n: plain field entries, rows (x, j) in the same order.
inline Matrix build_eval_matrix_points(const FieldPtr& field, const std::vector<Vec>& points,
                                       const std::vector<Exponents>& W, std::uint32_t m) {
  const std::size_t n = points.empty() ? (W.empty() ? 0 : W.front().size()) : points.front().size();
  const auto js = derivative_indices(n, m);
  Matrix out(field, points.size() * js.size(), W.size());
  std::vector<MultiPoly> monos;
  for (const auto& w : W) monos.push_back(MultiPoly::monomial(field, w));
  std::size_t r = 0;
  for (const auto& x : points) {
    for (const auto& j : js) {
      for (std::size_t c = 0; c < W.size(); ++c) out(r, c) = hasse_derivative(monos[c], j).eval(x);
      ++r;
    }
  }
  return out;
}

/// Each entry replaced by the column of its coefficients on the bivariate monomials of degree at
/// most d (graded-lex: 1, t1, t2, t1^2, t1 t2, t2^2, ...); row (i, k) is E-row i, monomial k.
inline Matrix coeff_matrix(const EvalMatrix& E, std::size_t d) {
  const auto basis = monomials_up_to(2, static_cast<std::uint32_t>(d));
  Matrix out(E.field, E.rows.size() * basis.size(), E.cols.size());
  for (std::size_t i = 0; i < E.entries.size(); ++i) {
    for (std::size_t c = 0; c < E.cols.size(); ++c) {
      const MultiPoly& e = E.entries[i][c];
      if (e.degree() > static_cast<int>(d)) {
        throw std::invalid_argument("entry of degree " + std::to_string(e.degree()) + " exceeds the bound " +
                                    std::to_string(d));
      }
      for (std::size_t k = 0; k < basis.size(); ++k) out(i * basis.size() + k, c) = e.coeff(basis[k]);
    }
  }
  return out;
}

/// Largest number of F_q-independent columns, computed as the rank of the coefficient matrix.
inline std::size_t fq_rank(const EvalMatrix& E) {
  if (E.cols.empty() || E.rows.empty()) return 0;
  return rank(coeff_matrix(E, E.max_degree()));
}

enum class VSubset { all, full, explicit_set };

struct RankAudit {
  std::size_t rank = 0;
  std::size_t target = 0;
  bool exact_target = false;  // equality expected rather than a lower bound
  std::size_t rows = 0;
  std::size_t cols = 0;
  bool pass = false;
};

namespace detail {

inline void check_rank_hypothesis(std::uint32_t q, std::uint32_t m, std::uint32_t d) {
  if (BigInt(d) >= BigInt(m) * q * q) {
    throw std::invalid_argument("rank lemmas need d < m q^2 (d = " + std::to_string(d) + ", m q^2 = " +
                                std::to_string(static_cast<std::uint64_t>(m) * q * q) + ")");
  }
}

inline std::size_t binom_size(std::size_t n, std::size_t k) {
  BigInt num = 1;
  BigInt den = 1;
  for (std::size_t i = 0; i < k; ++i) {
    num *= n - i;
    den *= i + 1;
  }
  return static_cast<std::size_t>(num / den);
}

/// ceil(|S| / |V_full| * C(d+n, n)).
inline std::size_t fraction_target(std::size_t s_size, std::uint32_t q, std::size_t n, std::uint32_t d) {
  const BigInt vf = v_full_size(q, n);
  require(vf > 0, "V_full is empty for n < 2");
  const Rational delta = make_rational(BigInt(s_size), vf);
  return static_cast<std::size_t>(ceil(delta * binom_size(d + n, n)));
}

}  // namespace detail

/// F_q-rank of EVAL^m(S, W_{d,n}) for S = V, V_full, or an explicit subset of V_full. The target is
/// C(d+n, n) with equality for V and V_full, and ceil(delta C(d+n, n)) as a lower bound for a
/// subset with delta = |S| / |V_full|.
inline RankAudit rank_lemma_audit(const FieldPtr& field, std::size_t n, std::uint32_t m, std::uint32_t d, VSubset which,
                                  const std::vector<LinearFormVector>& subset = {},
                                  std::uint64_t budget = kDefaultBudget) {
  detail::check_rank_hypothesis(field->q(), m, d);
  std::vector<LinearFormVector> pts;
  if (which == VSubset::explicit_set) {
    for (const auto& lf : subset) {
      detail::require(lf.u.size() == n && lf.v.size() == n, "form vector has wrong length");
      detail::require(lf.full(field), "explicit subset must lie in V_full");
    }
    pts = subset;
  } else {
    pts = enumerate_V(field, n, which == VSubset::full, budget);
  }
  const auto W = monomials_up_to(n, d);
  const auto E = build_eval_matrix(field, pts, W, m);
  RankAudit out;
  out.rank = fq_rank(E);
  out.rows = E.rows.size();
  out.cols = W.size();
  if (which == VSubset::explicit_set) {
    out.target = detail::fraction_target(pts.size(), field->q(), n, d);
    out.pass = out.rank >= out.target;
  } else {
    out.target = W.size();
    out.exact_target = true;
    out.pass = out.rank == out.target;
  }
  return out;
}

struct GoodMonomials {
  std::vector<Exponents> P;
  std::size_t target = 0;  // ceil(delta C(d+n, n))
  std::size_t rank = 0;    // rank of the whole EVAL^r(S, W_{d,n}); equals |P|
  bool certificate = false;  // coefficient columns of P have full column rank
  bool pass = false;         // certificate and |P| >= target
};

/// A maximal F_q-independent set of columns of EVAL^r(S, W_{d,n}), chosen greedily left to right in
/// graded-lex monomial order: no nonzero combination of P vanishes to order r on all of S.
inline GoodMonomials select_good_monomials(const FieldPtr& field, std::size_t n, const std::vector<LinearFormVector>& S,
                                           std::uint32_t d, std::uint32_t r) {
  detail::check_rank_hypothesis(field->q(), r, d);
  for (const auto& lf : S) {
    detail::require(lf.u.size() == n && lf.v.size() == n, "form vector has wrong length");
    detail::require(lf.full(field), "S must lie in V_full");
  }
  GoodMonomials out;
  out.target = detail::fraction_target(S.size(), field->q(), n, d);
  const auto W = monomials_up_to(n, d);
  if (S.empty()) {
    out.certificate = true;
    out.pass = out.target == 0;
    return out;
  }
  const auto E = build_eval_matrix(field, S, W, r);
  const Matrix C = coeff_matrix(E, d);
  const Field& f = *field;

  // Incremental column echelon: reduced copies of accepted columns, each with a pivot row.
  std::vector<Vec> basis;
  std::vector<std::size_t> pivot_rows;
  std::vector<std::size_t> chosen;
  for (std::size_t c = 0; c < C.cols(); ++c) {
    Vec col = C.column(c);
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const Elem coef = col[pivot_rows[b]];
      if (coef == 0) continue;
      const Elem nc = f.neg(coef);
      for (std::size_t i = 0; i < col.size(); ++i)
        if (basis[b][i] != 0) col[i] = f.add(col[i], f.mul(nc, basis[b][i]));
    }
    std::size_t piv = 0;
    while (piv < col.size() && col[piv] == 0) ++piv;
    if (piv == col.size()) continue;
    const Elem inv = f.inv(col[piv]);
    for (auto& x : col) x = f.mul(x, inv);
    basis.push_back(std::move(col));
    pivot_rows.push_back(piv);
    chosen.push_back(c);
    out.P.push_back(W[c]);
  }
  out.rank = rank(C);
  out.certificate = rank(C.select_columns(chosen)) == chosen.size() && chosen.size() == out.rank;
  out.pass = out.certificate && out.P.size() >= out.target;
  return out;
}

}  // namespace kakeya_hash

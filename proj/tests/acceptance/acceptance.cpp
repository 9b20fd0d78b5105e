// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include "kakeya_hash/harness/output.hpp"

using namespace kakeya_hash;
namespace hn = kakeya_hash::harness;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(const std::string& name, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream line;
  line << (out.pass ? "PASS " : "FAIL ") << name << " (" << std::fixed;
  line.precision(1);
  line << secs << " s): " << out.detail;
  std::cout << line.str() << std::endl;
  failures += out.pass ? 0 : 1;
}

unsigned jobs() { return std::max(1U, std::thread::hardware_concurrency()); }

std::string jsonl(const hn::RunResult& r) {
  std::ostringstream os;
  hn::write_jsonl(os, r);
  return os.str();
}

Outcome kernel_equivalence() {
  auto f2 = Field::make(2);
  const std::vector<Rational> taus = {0, Rational(1, 2), 1, 2};
  std::vector<LinearMap> maps;
  for (std::size_t t = 1; t <= 3; ++t) {
    for_each_vector(2, 3 * t, [&](const Vec& digits) {
      LinearMap L(Matrix(f2, t, 3, digits));
      if (L.surjective()) maps.push_back(std::move(L));
    });
  }
  std::uint64_t checks = 0;
  std::uint64_t mismatches = 0;
  // the empty set has no distribution to compare, so the sweep starts at mask 1
  for (std::uint64_t mask = 1; mask < 256; ++mask) {
    std::vector<std::uint64_t> codes;
    for (std::uint64_t i = 0; i < 8; ++i)
      if (mask >> i & 1U) codes.push_back(i);
    const PointSet S = PointSet::from_codes(f2, 3, codes);
    for (const auto& L : maps) {
      const Subspace A = kernel(L.matrix());
      for (const auto& tau : taus) {
        ++checks;
        mismatches += linf_pass(L, S, tau) == is_shift_balanced(A, S, tau).balanced ? 0 : 1;
      }
    }
  }
  return {mismatches == 0, std::to_string(maps.size()) + " surjective maps x 255 nonempty sets x 4 tau = " +
                               std::to_string(checks) + " checks, " + std::to_string(mismatches) + " mismatches"};
}

Outcome furstenberg_lower_bound() {
  const std::vector<Rational> grid = {Rational(1, 4), Rational(1, 2), Rational(3, 4), 1};
  struct Space {
    std::size_t n;
    std::uint32_t q;
  };
  std::uint64_t subsets = 0;
  std::uint64_t instances = 0;
  std::uint64_t violations = 0;
  for (const Space s : {Space{2, 2}, Space{3, 2}, Space{2, 3}}) {
    const auto rep = audit_lower_bound_exhaustive(s.n, s.q, 2, grid, grid);
    if (!rep.exhaustive) return {false, "audit fell back to sampling"};
    subsets += rep.subsets_checked;
    instances += rep.furstenberg_instances;
    violations += rep.violations.size();
  }
  return {violations == 0, std::to_string(subsets) + " subsets of F_2^2, F_2^3, F_3^2 (k = 2), " +
                               std::to_string(instances) + " Furstenberg instances, " + std::to_string(violations) +
                               " violations"};
}

Outcome coefficient_example() {
  auto f5 = Field::make(5);
  auto t1 = MultiPoly::variable(f5, 2, 0);
  auto t2 = MultiPoly::variable(f5, 2, 1);
  auto c = [&](Elem v) { return MultiPoly::constant(f5, 2, v); };
  const EvalMatrix E{f5, {{0, {}}, {1, {}}}, {{0}, {1}}, {{t1, t2 + c(1)}, {c(2) + t1.scaled(4), t1 + t2.scaled(3)}}};
  const Matrix C = coeff_matrix(E, 1);
  const Matrix expected = Matrix::from_rows(f5, {{0, 1}, {1, 0}, {0, 1}, {2, 0}, {4, 1}, {0, 3}});
  const std::size_t r = fq_rank(E);
  return {C == expected && r == 2, std::string("6x2 coefficient matrix ") + (C == expected ? "matches" : "differs") +
                                       ", F_q-rank " + std::to_string(r)};
}

Outcome rank_lemmas() {
  auto f2 = Field::make(2);
  std::size_t audits = 0;
  std::size_t bad = 0;
  for (std::uint32_t m : {1U, 2U}) {
    for (std::uint32_t d = 0; d < m * 4; ++d) {
      for (VSubset which : {VSubset::all, VSubset::full}) {
        const auto a = rank_lemma_audit(f2, 2, m, d, which);
        ++audits;
        bad += a.pass && a.rank == (d + 2) * (d + 1) / 2 ? 0 : 1;
      }
    }
  }
  const auto vfull = enumerate_V(f2, 2, true);
  std::size_t subsets = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << vfull.size()); ++mask) {
    std::vector<LinearFormVector> S;
    for (std::size_t i = 0; i < vfull.size(); ++i)
      if (mask >> i & 1U) S.push_back(vfull[i]);
    ++subsets;
    bad += rank_lemma_audit(f2, 2, 1, 1, VSubset::explicit_set, S).pass ? 0 : 1;
  }
  return {bad == 0, std::to_string(audits) + " V/V_full rank audits (m in {1,2}, all d < 4m) and " +
                        std::to_string(subsets) + " subsets of V_full, " + std::to_string(bad) + " failures"};
}

Outcome schwartz_zippel() {
  const std::uint32_t qs[] = {2, 3, 5};
  std::uint64_t violations = 0;
  std::uint64_t equalities = 0;
  std::uint64_t cases = 0;
  CounterRng rng(0x5eed);
  while (cases < 10000) {
    auto f = Field::make(qs[rng.below(3)]);
    const std::size_t n = 1 + rng.below(2);
    const auto d = static_cast<std::uint32_t>(rng.below(7));
    MultiPoly poly = MultiPoly::random(rng, f, n, d);
    // sparse products of linear factors reach the boundary far more often than dense polynomials
    if (rng.below(2) == 0) {
      poly = MultiPoly::constant(f, n, 1 + static_cast<Elem>(rng.below(f->q() - 1)));
      const std::size_t factors = rng.below(7);
      for (std::size_t i = 0; i < factors; ++i)
        poly = poly * (MultiPoly::variable(f, n, rng.below(n)) - MultiPoly::constant(f, n, static_cast<Elem>(rng.below(f->q()))));
    }
    if (poly.is_zero()) continue;
    std::vector<Elem> U;
    for (Elem e = 0; e < f->q(); ++e) U.push_back(e);
    const auto a = sz_audit(poly, U);
    violations += a.pass ? 0 : 1;
    equalities += a.bound > 0 && a.total_mult == a.bound ? 1 : 0;
    ++cases;
  }
  auto f3 = Field::make(3);
  const MultiPoly sq = (MultiPoly::variable(f3, 1, 0) - MultiPoly::constant(f3, 1, 1)).pow(2);
  const auto boundary = sz_audit(sq, {0, 1, 2});
  const bool boundary_ok = boundary.total_mult == 2 && boundary.bound == 2;
  return {violations == 0 && equalities > 0 && boundary_ok,
          std::to_string(cases) + " seeded polynomials, " + std::to_string(violations) + " violations, " +
              std::to_string(equalities) + " nontrivial boundary equalities; (x-1)^2 over F_3 gives " +
              std::to_string(boundary.total_mult) + " = " + std::to_string(boundary.bound)};
}

Outcome claim_concentration() {
  // At (q, n, k) = (2, 4, 3) and (3, 4, 3) the hypothesis E_1 >= q forces S = F_q^4, so those
  // instances are run as stated and two configurations where the hypothesis is not degenerate are
  // added: (2, 5, 4) needs |S| >= 16 of 32 and (3, 4, 4) needs |S| >= 27 of 81.
  struct Config {
    std::uint32_t q;
    std::size_t n, k;
  };
  std::uint64_t instances = 0;
  std::uint64_t hypothesis = 0;
  std::uint64_t violations = 0;
  for (const Config c : {Config{2, 4, 3}, Config{3, 4, 3}, Config{2, 5, 4}, Config{3, 4, 4}}) {
    auto f = Field::make(c.q);
    const std::uint64_t space = checked_pow(c.q, c.n);
    const std::uint64_t min_size = c.q * checked_pow(c.q, c.n - (c.k - 2));
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      CounterRng rng(seed);
      const PointSet S = PointSet::random(rng, f, c.n, min_size + rng.below(space - min_size + 1));
      for (const Rational sigma : {Rational(1, 2), Rational(1)}) {
        const auto a = audit_claim_concentration(S, c.k, sigma);
        ++instances;
        hypothesis += a.hypothesis_holds ? 1 : 0;
        const bool within = a.hypothesis_holds && a.fraction <= Rational(1) / (sigma * sigma * c.q);
        violations += within ? 0 : 1;
      }
    }
  }
  return {violations == 0 && hypothesis == instances,
          std::to_string(instances) + " audits (100 seeded S x sigma in {1/2, 1} x 4 configurations), " +
              std::to_string(violations) + " above 1/(sigma^2 q)"};
}

Outcome parameter_formulas() {
  std::uint64_t bad = 0;
  // t = r - 3 against the bracket found by repeated multiplication
  for (std::uint32_t q : {2U, 3U, 7U, 16U, 256U}) {
    for (std::uint64_t r = 4; r <= 9; ++r) {
      for (const BigInt size : {pow_big(q, r) + 1, pow_big(q, r + 1)}) {
        const auto p = choose_t_large_field(q, size, r + 3);
        bad += p.r == static_cast<std::int64_t>(r) && p.t == static_cast<std::int64_t>(r) - 3 ? 0 : 1;
      }
    }
  }
  bad += injective_t(1024, Rational(1, 2)) == 20 ? 0 : 1;
  bad += injective_t(4, Rational(1, 2)) == 4 ? 0 : 1;
  bad += injective_t(2, 1) == 0 ? 0 : 1;

  CounterRng rng(2718);
  std::uint64_t valid = 0;
  std::uint64_t below = 0;
  std::uint64_t fallbacks = 0;
  while (valid < 1000) {
    const bool improved = rng.below(2) == 1;
    const Variant v = improved ? Variant::binary_improved : Variant::binary;
    const std::uint64_t n = 40 + rng.below(2000);
    const BigInt size = pow_big(2, 1 + rng.below(n)) - rng.below(3);
    const Rational tau = improved ? Rational(101 + static_cast<std::int64_t>(rng.below(5000)), 100)
                                  : Rational(1 + static_cast<std::int64_t>(rng.below(2000)), 100);
    const Rational delta = improved ? Rational(1 + static_cast<std::int64_t>(rng.below(10)), 100)
                                    : Rational(1 + static_cast<std::int64_t>(rng.below(99)), 100);
    if (size < 2 || !check_binary_hypotheses(n, size, tau, delta, v).ok()) continue;
    ++valid;
    const HashParams p = choose_t_binary(n, size, tau, delta, v);
    fallbacks += p.per_block_fallback ? 1 : 0;
    // independent re-check of t >= log2|S| - 4 log2 X - c as 2^(t+c) X^4 >= |S|
    const std::int64_t c = improved ? 0 : 20;
    QuadSurd x = QuadSurd::rational(Rational(n) * (1 + tau) / (tau * tau * delta * delta), tau);
    if (improved) {
      const QuadSurd gap = QuadSurd::rational(tau, tau) - QuadSurd::root(tau);
      x = QuadSurd::rational(Rational(n) * (1 + tau) / (delta * delta), tau) / (gap * gap);
    }
    if (x < QuadSurd::rational(Rational(n), tau)) x = QuadSurd::rational(Rational(n), tau);
    const QuadSurd lhs = QuadSurd::rational(pow_rat(2, p.t + c), tau) * x.pow(4);
    below += lhs >= QuadSurd::rational(Rational(size), tau) ? 0 : 1;
  }
  return {bad == 0 && below == 0, "large-field and injective examples " + std::string(bad == 0 ? "exact" : "wrong") +
                                      "; " + std::to_string(valid) + " valid binary tuples, " + std::to_string(below) +
                                      " below the stated bound (" + std::to_string(fallbacks) + " used the per-block recipe)"};
}

hn::ExperimentConfig trend_config(std::size_t t) {
  hn::ExperimentConfig cfg;
  cfg.kind = hn::Kind::hash_balance;
  cfg.n = 16;
  cfg.t = t;
  cfg.tau = 1;
  cfg.set = hn::SetSpec{hn::SetSpec::Type::random, {}, 4096, {}};
  cfg.trials = 2000;
  cfg.seed = 20240601;
  cfg.jobs = jobs();
  return cfg;
}

std::vector<std::string> trend_outputs;

Outcome statistical_trend() {
  std::vector<double> frac;
  std::ostringstream detail;
  for (std::size_t t = 10; t >= 4; --t) {
    const auto res = hn::run_hash_balance(trend_config(t));
    trend_outputs.push_back(jsonl(res));
    const double f = res.summary["pass_count"].get<double>() / 2000.0;
    frac.push_back(f);
    detail << "t=" << t << ":" << res.summary["pass_count"].get<std::uint64_t>() << (t > 4 ? " " : "");
  }
  bool monotone = true;
  for (std::size_t i = 1; i < frac.size(); ++i) {
    const double se = std::sqrt((frac[i] * (1 - frac[i]) + frac[i - 1] * (1 - frac[i - 1])) / 2000.0);
    if (frac[i] < frac[i - 1] - 3 * se) monotone = false;
  }
  const bool last = frac.back() >= 0.99;
  return {monotone && last, "passes of 2000: " + detail.str() + (monotone ? "; monotone" : "; NOT monotone") +
                                (last ? "" : "; below 0.99 at t=4")};
}

Outcome determinism() {
  std::size_t compared = 0;
  bool same = true;
  // rerun the trend experiment serially
  std::size_t idx = 0;
  for (std::size_t t = 10; t >= 4; --t, ++idx) {
    auto cfg = trend_config(t);
    cfg.jobs = 1;
    const std::string again = jsonl(hn::run_hash_balance(cfg));
    if (idx < trend_outputs.size()) {
      same = same && again == trend_outputs[idx];
      ++compared;
    }
  }
  auto base = hn::parse_config(R"({"n": 16, "t": 8, "set": {"type": "random", "size": 4096}, "trials": 500, "seed": 9})",
                               hn::Kind::baseline_compare);
  base.jobs = jobs();
  const std::string b1 = jsonl(hn::run_baseline_compare(base));
  base.jobs = 1;
  same = same && b1 == jsonl(hn::run_baseline_compare(base));
  ++compared;
  auto poly = hn::parse_config(R"({"trials": 500, "seed": 3})", hn::Kind::polymethod_selfcheck);
  same = same && jsonl(hn::run_polymethod_selfcheck(poly)) == jsonl(hn::run_polymethod_selfcheck(poly));
  ++compared;
  return {same && compared == 9, std::to_string(compared) + " randomized runs re-executed, output " +
                                     (same ? "byte-identical" : "DIFFERS")};
}

}  // namespace

int main() {
  criterion("kernel-equivalence oracle", kernel_equivalence);
  criterion("Furstenberg lower bound audit", furstenberg_lower_bound);
  criterion("worked coefficient-matrix example", coefficient_example);
  criterion("rank lemmas", rank_lemmas);
  criterion("multiplicity Schwartz-Zippel", schwartz_zippel);
  criterion("concentration claim audit", claim_concentration);
  criterion("parameter formulas", parameter_formulas);
  criterion("statistical trend", statistical_trend);
  criterion("determinism", determinism);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}

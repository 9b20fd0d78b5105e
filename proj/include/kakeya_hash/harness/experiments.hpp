#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "kakeya_hash/balance/balance.hpp"
#include "kakeya_hash/furstenberg/furstenberg.hpp"
#include "kakeya_hash/harness/config.hpp"
#include "kakeya_hash/hashcore/histogram.hpp"
#include "kakeya_hash/hashcore/params.hpp"
#include "kakeya_hash/linalg/sampling.hpp"
#include "kakeya_hash/polymethod/eval_matrix.hpp"

namespace kakeya_hash::harness {

enum ExitCode : int { kPass = 0, kViolation = 1, kUsage = 2, kBudget = 3 };

struct RunResult {
  std::vector<json> records;
  json summary;
  int exit_code = kPass;
  /// hash_balance only: (trial_index, bucket, count) rows for CSV export.
  std::vector<std::array<std::uint64_t, 3>> histogram_rows;
};

inline std::string rat(const Rational& r) { return kakeya_hash::to_string(r); }

/// Runs fn(i) for i in [0, count) on up to `jobs` threads; results are stored by index, so the
/// output does not depend on scheduling.
template <class T, class F>
std::vector<T> run_indexed(std::uint64_t count, unsigned jobs, F&& fn) {
  std::vector<std::optional<T>> slots(count);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::uint64_t i = next++; i < count; i = next++) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  const unsigned threads = static_cast<unsigned>(std::min<std::uint64_t>(std::max(1U, jobs), std::max<std::uint64_t>(count, 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  std::vector<T> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

/// Two-sided 95% Clopper-Pearson interval for `hits` successes in `n` trials. Advisory only.
inline std::pair<double, double> clopper_pearson(std::uint64_t hits, std::uint64_t n) {
  if (n == 0) return {0.0, 1.0};
  const double a = 0.05;
  const double h = static_cast<double>(hits);
  const double nn = static_cast<double>(n);
  const double lo = hits == 0 ? 0.0 : boost::math::ibeta_inv(h, nn - h + 1, a / 2);
  const double hi = hits == n ? 1.0 : boost::math::ibeta_inv(h + 1, nn - h, 1 - a / 2);
  return {lo, hi};
}

inline json map_digits(const LinearMap& L) {
  json arr = json::array();
  for (Elem e : L.matrix().data()) arr.push_back(e);
  return arr;
}

inline FieldPtr field_of(const ExperimentConfig& cfg) {
  try {
    return Field::make(cfg.p, cfg.ell);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("field: ") + e.what());
  }
}

/// Every surjective t x n map, in increasing order of the row-major digit string.
inline std::vector<LinearMap> all_surjective_maps(const FieldPtr& field, std::size_t n, std::size_t t,
                                                  std::uint64_t budget) {
  const BigInt count = pow_big(BigInt(field->q()), n * t);
  if (count > budget) throw BudgetExceeded("enumerating " + count.str() + " matrices exceeds the budget");
  std::vector<LinearMap> out;
  Vec digits(n * t, 0);
  do {
    LinearMap L(Matrix(field, t, n, digits));
    if (L.surjective()) out.push_back(std::move(L));
  } while (kakeya_hash::detail::odometer_next(digits, field->q()));
  return out;
}

struct HashTrial {
  json record;
  bool pass = false;
  BucketHistogram hist;
};

inline HashTrial hash_trial(std::uint64_t index, const LinearMap& L, const PointSet& S, const Rational& tau) {
  HashTrial out;
  out.hist = histogram(L, S);
  out.pass = linf_pass(out.hist, tau);
  out.record = {{"trial_index", index},        {"map", map_digits(L)}, {"linf", rat(linf_distance(out.hist))},
                {"l1", rat(l1_distance(out.hist))}, {"max_bucket", out.hist.max_load()}, {"pass", out.pass}};
  return out;
}

/// Samples surjective maps (or, with `exhaustive`, takes every one once) and records whether each
/// hashes S tau/q^t-close to uniform in the l-infinity norm.
inline RunResult run_hash_balance(const ExperimentConfig& cfg) {
  validate(cfg);
  const FieldPtr field = field_of(cfg);
  const PointSet S = build_set(cfg, field);
  if (S.empty()) throw ConfigError("set: S is empty");
  std::vector<HashTrial> trials;
  if (cfg.exhaustive) {
    const auto maps = all_surjective_maps(field, cfg.n, cfg.t, cfg.budget);
    trials = run_indexed<HashTrial>(maps.size(), cfg.jobs, [&](std::uint64_t i) { return hash_trial(i, maps[i], S, cfg.tau); });
  } else {
    const BigInt work = BigInt(cfg.trials) * S.size();
    if (work > cfg.budget) throw BudgetExceeded("trials * |S| = " + work.str() + " exceeds the budget");
    trials = run_indexed<HashTrial>(cfg.trials, cfg.jobs, [&](std::uint64_t i) {
      CounterRng rng = CounterRng::for_trial(*cfg.seed, i);
      return hash_trial(i, sample_surjective_map(rng, field, cfg.n, cfg.t), S, cfg.tau);
    });
  }
  RunResult res;
  std::uint64_t passes = 0;
  for (std::uint64_t i = 0; i < trials.size(); ++i) {
    passes += trials[i].pass ? 1 : 0;
    res.records.push_back(std::move(trials[i].record));
    for (const auto& [bucket, count] : trials[i].hist.counts) res.histogram_rows.push_back({i, bucket, count});
  }
  const auto [lo, hi] = clopper_pearson(passes, trials.size());
  res.summary = {{"kind", "hash_balance"},
                 {"q", field->q()},
                 {"n", cfg.n},
                 {"t", cfg.t},
                 {"set_size", S.size()},
                 {"tau", rat(cfg.tau)},
                 {"exhaustive", cfg.exhaustive},
                 {"trials", trials.size()},
                 {"pass_count", passes},
                 {"pass_fraction", rat(make_rational(passes, std::max<std::uint64_t>(trials.size(), 1)))},
                 {"clopper_pearson_95_advisory", {lo, hi}}};
  return res;
}

namespace detail {

/// Nearest-rank quantile of sorted values.
inline std::uint64_t quantile(const std::vector<std::uint64_t>& sorted, std::uint64_t num, std::uint64_t den) {
  if (sorted.empty()) return 0;
  std::uint64_t rank = (num * sorted.size() + den - 1) / den;
  rank = std::clamp<std::uint64_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

inline json load_stats(std::vector<std::uint64_t> loads) {
  std::sort(loads.begin(), loads.end());
  BigInt sum = 0;
  for (auto l : loads) sum += l;
  return {{"mean", rat(make_rational(sum, std::max<std::size_t>(loads.size(), 1)))},
          {"min", loads.empty() ? 0 : loads.front()},
          {"median", quantile(loads, 1, 2)},
          {"p90", quantile(loads, 9, 10)},
          {"p99", quantile(loads, 99, 100)},
          {"max", loads.empty() ? 0 : loads.back()}};
}

}  // namespace detail

/// Maximum bucket load under uniformly random surjective linear maps against a truly random
/// function from S to the q^t buckets, trial by trial.
inline RunResult run_baseline_compare(const ExperimentConfig& cfg) {
  validate(cfg);
  const FieldPtr field = field_of(cfg);
  const PointSet S = build_set(cfg, field);
  if (S.empty()) throw ConfigError("set: S is empty");
  const std::uint64_t buckets = checked_pow(field->q(), cfg.t);
  const BigInt work = BigInt(cfg.trials) * S.size() * 2;
  if (work > cfg.budget) throw BudgetExceeded("baseline work " + work.str() + " exceeds the budget");
  struct Pair {
    std::uint64_t linear, random;
  };
  const auto pairs = run_indexed<Pair>(cfg.trials, cfg.jobs, [&](std::uint64_t i) {
    CounterRng rng = CounterRng::for_trial(*cfg.seed, i);
    const LinearMap L = sample_surjective_map(rng, field, cfg.n, cfg.t);
    const std::uint64_t lin = histogram(L, S).max_load();
    std::map<std::uint64_t, std::uint64_t> counts;
    std::uint64_t rnd = 0;
    for (std::size_t j = 0; j < S.size(); ++j) rnd = std::max(rnd, ++counts[rng.below(buckets)]);
    return Pair{lin, rnd};
  });
  RunResult res;
  std::vector<std::uint64_t> lin;
  std::vector<std::uint64_t> rnd;
  for (std::uint64_t i = 0; i < pairs.size(); ++i) {
    res.records.push_back({{"trial_index", i}, {"linear_max_bucket", pairs[i].linear}, {"random_max_bucket", pairs[i].random}});
    lin.push_back(pairs[i].linear);
    rnd.push_back(pairs[i].random);
  }
  res.summary = {{"kind", "baseline_compare"},
                 {"q", field->q()},
                 {"n", cfg.n},
                 {"t", cfg.t},
                 {"set_size", S.size()},
                 {"trials", cfg.trials},
                 {"mean_load", rat(make_rational(BigInt(S.size()), BigInt(buckets)))},
                 {"linear", detail::load_stats(lin)},
                 {"random_function", detail::load_stats(rnd)}};
  return res;
}

/// A map whose kernel is A: its rows span the vectors orthogonal to every basis row of A.
inline LinearMap map_with_kernel(const Subspace& A) {
  const Subspace perp = A.dim() == 0 ? Subspace::whole(A.field(), A.ambient_dim()) : kernel(A.basis());
  return LinearMap(perp.basis());
}

/// Exhaustive shift-balance census of S, cross-checked subspace by subspace against the bucket
/// view of a map with that kernel; with sigma and k >= 3 also audits the concentration bound.
inline RunResult run_balance_audit(const ExperimentConfig& cfg) {
  validate(cfg);
  const FieldPtr field = field_of(cfg);
  const PointSet S = build_set(cfg, field);
  RunResult res;
  const BalanceReport rep = shift_balanced_fraction(S, cfg.k, cfg.tau, cfg.budget);
  std::uint64_t mismatches = 0;
  const bool cross_check = !S.empty() && cfg.k < cfg.n;
  if (cross_check) {
    for_each_subspace(field, cfg.n, cfg.k, [&](const Subspace& A) {
      const bool via_map = linf_pass(map_with_kernel(A), S, cfg.tau);
      const bool via_shifts = is_shift_balanced(A, S, cfg.tau).balanced;
      if (via_map != via_shifts) {
        ++mismatches;
        json basis = json::array();
        for (std::size_t r = 0; r < A.dim(); ++r) basis.push_back(Vec(A.basis().row(r).begin(), A.basis().row(r).end()));
        res.records.push_back({{"violation", "kernel_equivalence"}, {"basis", basis}, {"linf_pass", via_map},
                               {"shift_balanced", via_shifts}});
      }
    });
  }
  for (const auto& w : rep.witnesses) {
    json basis = json::array();
    for (std::size_t r = 0; r < w.subspace.dim(); ++r)
      basis.push_back(Vec(w.subspace.basis().row(r).begin(), w.subspace.basis().row(r).end()));
    res.records.push_back({{"unbalanced_direction", basis}, {"first_violating_shift", w.shift}});
  }
  res.summary = {{"kind", "balance_audit"},
                 {"q", field->q()},
                 {"n", cfg.n},
                 {"k", cfg.k},
                 {"set_size", S.size()},
                 {"tau", rat(cfg.tau)},
                 {"total_subspaces", rep.total_subspaces.str()},
                 {"shift_balanced_count", rep.shift_balanced_count.str()},
                 {"fraction", rat(rep.fraction)},
                 {"kernel_cross_check", cross_check},
                 {"kernel_mismatches", mismatches}};
  std::uint64_t violations = mismatches;
  if (cfg.sigma && cfg.k >= 3) {
    const ClaimAudit c = audit_claim_concentration(S, cfg.k, *cfg.sigma, cfg.budget);
    res.summary["concentration"] = {{"sigma", rat(*cfg.sigma)},
                                    {"fraction_unbalanced", rat(c.fraction)},
                                    {"expected", rat(c.expected)},
                                    {"hypothesis_holds", c.hypothesis_holds},
                                    {"bound", c.bound ? json(rat(*c.bound)) : json("inf")},
                                    {"general_bound", c.general_bound ? json(rat(*c.general_bound)) : json("inf")},
                                    {"pass", c.pass}};
    violations += c.pass ? 0 : 1;
  }
  res.summary["violations"] = violations;
  res.exit_code = violations == 0 ? kPass : kViolation;
  return res;
}

inline std::vector<Rational> default_grid() { return {Rational(1, 4), Rational(1, 2), Rational(3, 4), Rational(1)}; }

/// Furstenberg lower-bound audit over every subset of F_q^n (sampled when q^n is 13..16).
inline RunResult run_furstenberg_audit(const ExperimentConfig& cfg) {
  validate(cfg);
  if (cfg.ell != 1) throw ConfigError("furstenberg audit takes a prime field (ell = 1)");
  if (!Field::is_prime(cfg.p)) throw ConfigError("'p' must be prime");
  const auto gammas = cfg.gamma_grid.empty() ? default_grid() : cfg.gamma_grid;
  const auto betas = cfg.beta_grid.empty() ? default_grid() : cfg.beta_grid;
  LowerBoundAudit rep;
  try {
    rep = audit_lower_bound_exhaustive(cfg.n, cfg.p, cfg.k, gammas, betas, cfg.seed.value_or(0), 4096, cfg.budget);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  RunResult res;
  auto field = Field::make(cfg.p);
  for (const auto& v : rep.violations) {
    json pts = json::array();
    for (const auto& x : mask_to_set(field, cfg.n, v.subset_mask)) pts.push_back(x);
    res.records.push_back({{"violation", "lower_bound"}, {"K", pts}, {"gamma", rat(v.gamma)}, {"beta", rat(v.beta)},
                           {"bound", rat(v.bound)}});
  }
  res.summary = {{"kind", "furstenberg_audit"},
                 {"q", cfg.p},
                 {"n", cfg.n},
                 {"k", cfg.k},
                 {"exhaustive", rep.exhaustive},
                 {"subsets_checked", rep.subsets_checked},
                 {"furstenberg_instances", rep.furstenberg_instances},
                 {"violations", rep.violations.size()}};
  res.exit_code = rep.pass() ? kPass : kViolation;
  return res;
}

/// The polynomial-method self-check: the worked coefficient matrix, both rank lemmas and the
/// subset-rank bound on q = 2, n = 2, good-monomial selection, the chain rule, and seeded
/// multiplicity-bound audits (`trials` of them, default 1000).
inline RunResult run_polymethod_selfcheck(const ExperimentConfig& cfg) {
  validate(cfg);
  RunResult res;
  std::uint64_t failures = 0;
  auto record = [&](json r, bool pass) {
    r["pass"] = pass;
    failures += pass ? 0 : 1;
    res.records.push_back(std::move(r));
  };

  {
    auto f5 = Field::make(5);
    auto poly = [&](std::initializer_list<std::pair<Exponents, Elem>> terms) {
      MultiPoly p(f5, 2);
      for (const auto& [e, c] : terms) p.add_term(e, c);
      return p;
    };
    EvalMatrix E{f5, {{0, {0}}, {1, {0}}}, {{0}, {1}}, {}};
    E.entries = {{poly({{{1, 0}, 1}}), poly({{{0, 1}, 1}, {{0, 0}, 1}})},
                 {poly({{{0, 0}, 2}, {{1, 0}, 4}}), poly({{{1, 0}, 1}, {{0, 1}, 3}})}};
    const Matrix C = coeff_matrix(E, 1);
    const Matrix expected = Matrix::from_rows(f5, {{0, 1}, {1, 0}, {0, 1}, {2, 0}, {4, 1}, {0, 3}});
    record({{"check", "coefficient_matrix_example"}, {"fq_rank", fq_rank(E)}}, C == expected && fq_rank(E) == 2);
  }

  auto f2 = Field::make(2);
  for (std::uint32_t m : {1U, 2U}) {
    for (std::uint32_t d = 0; d < m * 4; ++d) {
      for (auto which : {VSubset::all, VSubset::full}) {
        const RankAudit a = rank_lemma_audit(f2, 2, m, d, which, {}, cfg.budget);
        record({{"check", which == VSubset::all ? "rank_lemma_V" : "rank_lemma_V_full"}, {"m", m}, {"d", d},
                {"rank", a.rank}, {"target", a.target}},
               a.pass);
      }
    }
  }
  {
    const auto vfull = enumerate_V(f2, 2, true, cfg.budget);
    std::uint64_t subsets = 0;
    bool all = true;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << vfull.size()); ++mask) {
      std::vector<LinearFormVector> sub;
      for (std::size_t i = 0; i < vfull.size(); ++i)
        if (mask >> i & 1U) sub.push_back(vfull[i]);
      const RankAudit a = rank_lemma_audit(f2, 2, 1, 1, VSubset::explicit_set, sub, cfg.budget);
      ++subsets;
      all = all && a.pass;
    }
    record({{"check", "subset_rank_lemma"}, {"m", 1}, {"d", 1}, {"subsets", subsets}}, all);
    const GoodMonomials g = select_good_monomials(f2, 2, vfull, 1, 1);
    record({{"check", "good_monomials_V_full"}, {"selected", g.P.size()}, {"target", g.target}}, g.pass);
  }

  const std::uint64_t seed = cfg.seed.value_or(0);
  const std::uint64_t cases = cfg.trials == 0 ? 1000 : cfg.trials;
  std::uint64_t sz_fail = 0;
  std::uint64_t sz_equal = 0;
  std::uint64_t chain_fail = 0;
  const std::uint32_t qs[] = {2, 3, 5};
  for (std::uint64_t i = 0; i < cases; ++i) {
    CounterRng rng = CounterRng::for_trial(seed, i);
    auto fld = Field::make(qs[rng.below(3)]);
    const std::size_t n = 1 + rng.below(2);
    const auto d = static_cast<std::uint32_t>(rng.below(7));
    MultiPoly f = MultiPoly::random(rng, fld, n, d);
    if (f.is_zero()) f = MultiPoly::constant(fld, n, 1);
    std::vector<Elem> U;
    for (Elem e = 0; e < fld->q(); ++e) U.push_back(e);
    const SzAudit a = sz_audit(f, U);
    sz_fail += a.pass ? 0 : 1;
    sz_equal += a.total_mult == a.bound ? 1 : 0;
    Exponents ii(n), jj(n);
    for (std::size_t v = 0; v < n; ++v) {
      ii[v] = static_cast<std::uint32_t>(rng.below(4));
      jj[v] = static_cast<std::uint32_t>(rng.below(4));
    }
    const auto [lhs, rhs] = chain_rule_pair(f, ii, jj);
    chain_fail += lhs == rhs ? 0 : 1;
  }
  record({{"check", "multiplicity_bound"}, {"cases", cases}, {"failures", sz_fail}, {"boundary_equalities", sz_equal}},
         sz_fail == 0);
  record({{"check", "chain_rule"}, {"cases", cases}, {"failures", chain_fail}}, chain_fail == 0);

  res.summary = {{"kind", "polymethod_selfcheck"}, {"checks", res.records.size()}, {"violations", failures}};
  res.exit_code = failures == 0 ? kPass : kViolation;
  return res;
}

inline json params_json(const HashParams& p) {
  json out = {{"variant", to_string(p.variant)}, {"t", p.t}, {"entropy_loss", rat(p.entropy_loss)}};
  if (p.tau) out["tau"] = rat(*p.tau);
  if (p.delta) out["delta"] = rat(*p.delta);
  out["q"] = p.q.str();
  out["ell"] = p.ell;
  out["n_blocks"] = p.n_blocks;
  out["r"] = p.r;
  if (p.m) out["m"] = p.m;
  out["meets_stated_bound"] = p.meets_stated_bound;
  out["stated_bound_approx"] = p.stated_bound_approx;
  if (p.per_block_fallback) out["per_block_fallback"] = p.fallback_reason;
  return out;
}

/// Parameter choices for one set size: every binary rule (or the one named by `variant`), the
/// large-field rules when `q` is given, and the injective pre-hash length.
inline RunResult run_params(const ExperimentConfig& cfg) {
  if (!cfg.set_size) throw ConfigError("params needs 'set_size'");
  if (cfg.n == 0) throw ConfigError("params needs 'n' >= 1");
  const BigInt& size = *cfg.set_size;
  RunResult res;
  std::vector<Variant> variants;
  if (cfg.variant) {
    try {
      variants.push_back(parse_variant(*cfg.variant));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  } else {
    variants = {Variant::binary, Variant::binary_two_stage, Variant::binary_improved, Variant::binary_improved_two_stage};
    if (cfg.q_override) variants.insert(variants.begin(), {Variant::large_field, Variant::large_field_improved});
  }
  for (Variant v : variants) {
    json rec = {{"variant", to_string(v)}};
    try {
      if (v == Variant::large_field || v == Variant::large_field_improved) {
        if (!cfg.q_override) throw ConfigError("large-field variants need 'q'");
        HashParams p = choose_t_large_field(*cfg.q_override, size, cfg.n);
        p.variant = v;
        p.tau = cfg.tau;
        p.delta = cfg.delta;
        rec = params_json(p);
        const HypothesisReport h = hypothesis_check_large_field(*cfg.q_override, cfg.n, cfg.tau, cfg.delta, v);
        rec["hypotheses_hold"] = h.ok();
        rec["failed_clauses"] = h.failed;
      } else {
        rec = params_json(choose_t_binary(cfg.n, size, cfg.tau, cfg.delta, v));
      }
    } catch (const SideConditionError& e) {
      rec["error"] = e.what();
      if (v != Variant::large_field && v != Variant::large_field_improved) {
        rec["failed_clauses"] = check_binary_hypotheses(cfg.n, size, cfg.tau, cfg.delta, v).failed;
      }
    } catch (const std::invalid_argument& e) {
      rec["error"] = e.what();
    }
    res.records.push_back(std::move(rec));
  }
  json inj = {{"variant", "injective_prehash"}};
  try {
    inj["t"] = injective_t(size, cfg.delta);
  } catch (const std::invalid_argument& e) {
    inj["error"] = e.what();
  }
  res.records.push_back(std::move(inj));
  res.summary = {{"kind", "params"}, {"n", cfg.n}, {"set_size", size.str()}, {"tau", rat(cfg.tau)}, {"delta", rat(cfg.delta)}};
  return res;
}

}  // namespace kakeya_hash::harness

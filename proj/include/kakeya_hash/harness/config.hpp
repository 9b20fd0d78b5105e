#pragma once

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "kakeya_hash/balance/balance.hpp"
#include "kakeya_hash/core/rational.hpp"
#include "kakeya_hash/core/rng.hpp"
#include "kakeya_hash/hashcore/params.hpp"
#include "kakeya_hash/hashcore/point_set.hpp"
#include "kakeya_hash/linalg/subspace.hpp"

namespace kakeya_hash::harness {

using json = nlohmann::ordered_json;

/// Malformed or inconsistent configuration (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Kind { hash_balance, balance_audit, furstenberg_audit, polymethod_selfcheck, baseline_compare, params };

inline std::string to_string(Kind k) {
  switch (k) {
    case Kind::hash_balance: return "hash_balance";
    case Kind::balance_audit: return "balance_audit";
    case Kind::furstenberg_audit: return "furstenberg_audit";
    case Kind::polymethod_selfcheck: return "polymethod_selfcheck";
    case Kind::baseline_compare: return "baseline_compare";
    case Kind::params: return "params";
  }
  return "?";
}

struct FlatSpec {
  std::vector<Vec> basis;
  Vec shift;
};

/// How S is produced: listed points, `size` seeded random points, all of F_q^n, or a union of flats.
struct SetSpec {
  enum class Type { explicit_points, random, full, flats } type = Type::random;
  std::vector<Vec> points;
  std::uint64_t size = 0;
  std::vector<FlatSpec> flats;
};

struct ExperimentConfig {
  Kind kind = Kind::hash_balance;
  std::uint32_t p = 2;
  std::uint32_t ell = 1;
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t t = 0;
  std::optional<SetSpec> set;
  Rational tau = 1;
  Rational delta = Rational(1, 2);
  std::optional<Rational> sigma;
  std::uint64_t trials = 0;
  std::optional<std::uint64_t> seed;
  std::uint64_t budget = kDefaultBudget;
  unsigned jobs = 1;
  bool exhaustive = false;  // hash_balance: run every surjective map once instead of sampling
  std::vector<Rational> gamma_grid;
  std::vector<Rational> beta_grid;
  std::optional<std::string> variant;  // params
  std::optional<BigInt> set_size;      // params
  std::optional<BigInt> q_override;    // params: field size for the large-field rules
};

namespace detail {

/// 1-based line of the first occurrence of "key" in the raw text, for error messages.
inline std::size_t line_of(const std::string& text, const std::string& key) {
  const auto pos = text.find("\"" + key + "\"");
  if (pos == std::string::npos) return 0;
  std::size_t line = 1;
  for (std::size_t i = 0; i < pos; ++i)
    if (text[i] == '\n') ++line;
  return line;
}

inline std::string where(const std::string& text, const std::string& key) {
  const auto line = line_of(text, key);
  return line ? "line " + std::to_string(line) + ": " : "";
}

inline Rational rational_from(const json& v, const std::string& key, const std::string& text) {
  try {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
  } catch (const std::exception& e) {
    throw ConfigError(where(text, key) + "'" + key + "': " + e.what());
  }
  throw ConfigError(where(text, key) + "'" + key + "' must be a \"num/den\" string or an integer");
}

inline std::uint64_t uint_from(const json& v, const std::string& key, const std::string& text) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  throw ConfigError(where(text, key) + "'" + key + "' must be a nonnegative integer");
}

inline Vec vec_from(const json& v, const std::string& key, const std::string& text) {
  if (!v.is_array()) throw ConfigError(where(text, key) + "'" + key + "' must be an array of field elements");
  Vec out;
  for (const auto& e : v) out.push_back(static_cast<Elem>(uint_from(e, key, text)));
  return out;
}

inline std::vector<Vec> vecs_from(const json& v, const std::string& key, const std::string& text) {
  if (!v.is_array()) throw ConfigError(where(text, key) + "'" + key + "' must be an array of vectors");
  std::vector<Vec> out;
  for (const auto& e : v) out.push_back(vec_from(e, key, text));
  return out;
}

inline void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& text,
                           const std::string& context) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) throw ConfigError(where(text, key) + "unknown key '" + key + "' in " + context);
  }
}

inline SetSpec set_from(const json& v, const std::string& text) {
  if (!v.is_object()) throw ConfigError(where(text, "set") + "'set' must be an object");
  reject_unknown(v, {"type", "points", "size", "flats"}, text, "set");
  if (!v.contains("type") || !v["type"].is_string()) throw ConfigError(where(text, "set") + "'set' needs a string 'type'");
  const auto type = v["type"].get<std::string>();
  SetSpec s;
  if (type == "explicit") {
    s.type = SetSpec::Type::explicit_points;
    if (!v.contains("points")) throw ConfigError(where(text, "type") + "explicit set needs 'points'");
    s.points = vecs_from(v["points"], "points", text);
  } else if (type == "random") {
    s.type = SetSpec::Type::random;
    if (!v.contains("size")) throw ConfigError(where(text, "type") + "random set needs 'size'");
    s.size = uint_from(v["size"], "size", text);
  } else if (type == "full") {
    s.type = SetSpec::Type::full;
  } else if (type == "flats") {
    s.type = SetSpec::Type::flats;
    if (!v.contains("flats") || !v["flats"].is_array()) throw ConfigError(where(text, "type") + "flats set needs 'flats'");
    for (const auto& f : v["flats"]) {
      if (!f.is_object()) throw ConfigError(where(text, "flats") + "each flat must be an object");
      reject_unknown(f, {"basis", "shift"}, text, "flat");
      FlatSpec fs;
      if (f.contains("basis")) fs.basis = vecs_from(f["basis"], "basis", text);
      if (f.contains("shift")) fs.shift = vec_from(f["shift"], "shift", text);
      s.flats.push_back(std::move(fs));
    }
  } else {
    throw ConfigError(where(text, "type") + "unknown set type '" + type + "' (explicit, random, full, flats)");
  }
  return s;
}

inline std::vector<Rational> grid_from(const json& v, const std::string& key, const std::string& text) {
  if (!v.is_array()) throw ConfigError(where(text, key) + "'" + key + "' must be an array");
  std::vector<Rational> out;
  for (const auto& e : v) out.push_back(rational_from(e, key, text));
  return out;
}

}  // namespace detail

/// Default budget: KAKEYA_HASH_BUDGET when set to a positive integer, else 10^8.
inline std::uint64_t env_budget() {
  const char* env = std::getenv("KAKEYA_HASH_BUDGET");
  if (env == nullptr || *env == '\0') return kDefaultBudget;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0' || v == 0) throw ConfigError("KAKEYA_HASH_BUDGET must be a positive integer");
  return v;
}

/// Parses a JSON config for the given kind. Unknown keys and malformed values raise ConfigError.
inline ExperimentConfig parse_config(const std::string& text, Kind kind) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  detail::reject_unknown(doc,
                         {"kind", "p", "ell", "n", "k", "t", "set", "tau", "delta", "sigma", "trials", "seed", "budget",
                          "jobs", "exhaustive", "gamma_grid", "beta_grid", "variant", "set_size", "q"},
                         text, "config");
  ExperimentConfig cfg;
  cfg.kind = kind;
  cfg.budget = env_budget();
  const std::string& T = text;
  if (doc.contains("kind")) {
    if (!doc["kind"].is_string() || doc["kind"].get<std::string>() != to_string(kind)) {
      throw ConfigError(detail::where(T, "kind") + "config kind does not match the subcommand (expected '" +
                        to_string(kind) + "')");
    }
  }
  if (doc.contains("p")) cfg.p = static_cast<std::uint32_t>(detail::uint_from(doc["p"], "p", T));
  if (doc.contains("ell")) cfg.ell = static_cast<std::uint32_t>(detail::uint_from(doc["ell"], "ell", T));
  if (doc.contains("n")) cfg.n = detail::uint_from(doc["n"], "n", T);
  if (doc.contains("k")) cfg.k = detail::uint_from(doc["k"], "k", T);
  if (doc.contains("t")) cfg.t = detail::uint_from(doc["t"], "t", T);
  if (doc.contains("set")) cfg.set = detail::set_from(doc["set"], T);
  if (doc.contains("tau")) cfg.tau = detail::rational_from(doc["tau"], "tau", T);
  if (doc.contains("delta")) cfg.delta = detail::rational_from(doc["delta"], "delta", T);
  if (doc.contains("sigma")) cfg.sigma = detail::rational_from(doc["sigma"], "sigma", T);
  if (doc.contains("trials")) cfg.trials = detail::uint_from(doc["trials"], "trials", T);
  if (doc.contains("seed")) cfg.seed = detail::uint_from(doc["seed"], "seed", T);
  if (doc.contains("budget")) cfg.budget = detail::uint_from(doc["budget"], "budget", T);
  if (doc.contains("jobs")) cfg.jobs = static_cast<unsigned>(detail::uint_from(doc["jobs"], "jobs", T));
  if (doc.contains("exhaustive")) {
    if (!doc["exhaustive"].is_boolean()) throw ConfigError(detail::where(T, "exhaustive") + "'exhaustive' must be a boolean");
    cfg.exhaustive = doc["exhaustive"].get<bool>();
  }
  if (doc.contains("gamma_grid")) cfg.gamma_grid = detail::grid_from(doc["gamma_grid"], "gamma_grid", T);
  if (doc.contains("beta_grid")) cfg.beta_grid = detail::grid_from(doc["beta_grid"], "beta_grid", T);
  if (doc.contains("variant")) {
    if (!doc["variant"].is_string()) throw ConfigError(detail::where(T, "variant") + "'variant' must be a string");
    cfg.variant = doc["variant"].get<std::string>();
  }
  auto big_from = [&](const char* key) -> BigInt {
    const auto& v = doc[key];
    try {
      if (v.is_string()) return BigInt(v.get<std::string>());
      return BigInt(detail::uint_from(v, key, T));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError(detail::where(T, key) + "'" + key + "' must be an integer or a decimal string");
    }
  };
  if (doc.contains("set_size")) cfg.set_size = big_from("set_size");
  if (doc.contains("q")) cfg.q_override = big_from("q");
  return cfg;
}

/// Checks that the fields a kind relies on are present and sensible.
inline void validate(const ExperimentConfig& cfg) {
  const bool randomized = cfg.kind == Kind::hash_balance || cfg.kind == Kind::baseline_compare ||
                          (cfg.set && cfg.set->type == SetSpec::Type::random);
  if (randomized && !cfg.seed && !(cfg.kind == Kind::hash_balance && cfg.exhaustive && cfg.set &&
                                   cfg.set->type != SetSpec::Type::random)) {
    throw ConfigError("'seed' is required for randomized experiments");
  }
  if (cfg.jobs == 0) throw ConfigError("'jobs' must be at least 1");
  if (cfg.budget == 0) throw ConfigError("'budget' must be positive");
  switch (cfg.kind) {
    case Kind::hash_balance:
    case Kind::baseline_compare:
      if (!cfg.exhaustive && cfg.trials == 0) throw ConfigError("'trials' must be at least 1");
      if (cfg.n == 0) throw ConfigError("'n' must be at least 1");
      if (cfg.t == 0 || cfg.t > cfg.n) throw ConfigError("'t' must lie in [1, n]");
      if (!cfg.set) throw ConfigError("'set' is required");
      if (cfg.tau < 0) throw ConfigError("'tau' must be nonnegative");
      break;
    case Kind::balance_audit:
      if (cfg.n == 0) throw ConfigError("'n' must be at least 1");
      if (cfg.k > cfg.n) throw ConfigError("'k' must not exceed 'n'");
      if (!cfg.set) throw ConfigError("'set' is required");
      if (cfg.tau < 0) throw ConfigError("'tau' must be nonnegative");
      break;
    case Kind::furstenberg_audit:
      if (cfg.n == 0 || cfg.k == 0 || cfg.k > cfg.n) throw ConfigError("need 1 <= k <= n");
      break;
    case Kind::polymethod_selfcheck:
    case Kind::params:
      break;
  }
}

/// Materializes S. Random sets draw from a stream separate from every trial stream.
inline PointSet build_set(const ExperimentConfig& cfg, const FieldPtr& field) {
  const SetSpec& s = *cfg.set;
  try {
    switch (s.type) {
      case SetSpec::Type::explicit_points:
        return PointSet(field, cfg.n, s.points);
      case SetSpec::Type::random: {
        CounterRng rng(~*cfg.seed);
        return PointSet::random(rng, field, cfg.n, s.size);
      }
      case SetSpec::Type::full:
        return PointSet::full(field, cfg.n);
      case SetSpec::Type::flats: {
        std::vector<Vec> pts;
        for (const auto& fs : s.flats) {
          const Subspace sub =
              fs.basis.empty() ? Subspace::zero(field, cfg.n) : Subspace::span(Matrix::from_rows(field, fs.basis));
          if (sub.ambient_dim() != cfg.n) throw ConfigError("flat basis vectors must have length n");
          const Vec shift = fs.shift.empty() ? Vec(cfg.n, 0) : fs.shift;
          for (auto& pnt : Flat(sub, shift).points()) pts.push_back(std::move(pnt));
        }
        return PointSet(field, cfg.n, std::move(pts));
      }
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("set: ") + e.what());
  }
  throw ConfigError("unreachable set type");
}

}  // namespace kakeya_hash::harness

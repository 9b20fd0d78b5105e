// kakeya-hash: run hashing experiments, audits and parameter calculations from JSON configs.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "kakeya_hash/harness/output.hpp"

namespace kh = kakeya_hash;
namespace hn = kakeya_hash::harness;

namespace {

struct Flags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<unsigned> jobs;
  std::optional<std::uint64_t> budget;
  std::string out_path;
  std::string format = "jsonl";
  // params shortcuts
  std::optional<std::size_t> n;
  std::optional<std::string> set_size;
  std::optional<std::string> tau;
  std::optional<std::string> delta;
  std::optional<std::string> q;
  std::optional<std::string> variant;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw hn::ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

hn::ExperimentConfig load(const Flags& f, hn::Kind kind) {
  const std::string text = f.config_path.empty() ? "{}" : read_file(f.config_path);
  hn::ExperimentConfig cfg = hn::parse_config(text, kind);
  if (f.seed) cfg.seed = *f.seed;
  if (f.trials) cfg.trials = *f.trials;
  if (f.jobs) cfg.jobs = *f.jobs;
  if (f.budget) cfg.budget = *f.budget;
  try {
    if (f.n) cfg.n = *f.n;
    if (f.set_size) cfg.set_size = kh::BigInt(*f.set_size);
    if (f.q) cfg.q_override = kh::BigInt(*f.q);
    if (f.tau) cfg.tau = kh::parse_rational(*f.tau);
    if (f.delta) cfg.delta = kh::parse_rational(*f.delta);
  } catch (const std::exception& e) {
    throw hn::ConfigError(std::string("flag value: ") + e.what());
  }
  if (f.variant) cfg.variant = *f.variant;
  return cfg;
}

int emit(const Flags& f, const hn::RunResult& res) {
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!f.out_path.empty()) {
    file.open(f.out_path, std::ios::binary);
    if (!file) {
      std::cerr << "error: cannot write '" << f.out_path << "'\n";
      return hn::kUsage;
    }
    os = &file;
  }
  if (f.format == "csv") {
    hn::write_csv(*os, res);
  } else {
    hn::write_jsonl(*os, res);
  }
  return res.exit_code;
}

template <class Run>
int guarded(const Flags& f, hn::Kind kind, Run&& run) {
  try {
    return emit(f, run(load(f, kind)));
  } catch (const hn::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return hn::kUsage;
  } catch (const kh::BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return hn::kBudget;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return hn::kUsage;
  }
}

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config_path, "JSON experiment config");
  cmd->add_option("--seed", f.seed, "64-bit seed");
  cmd->add_option("--trials", f.trials, "number of trials");
  cmd->add_option("--jobs", f.jobs, "worker threads");
  cmd->add_option("--budget", f.budget, "enumeration budget (default $KAKEYA_HASH_BUDGET or 1e8)");
  cmd->add_option("--out", f.out_path, "output file (default stdout)");
  cmd->add_option("--format", f.format, "jsonl or csv")->check(CLI::IsMember({"jsonl", "csv"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear-hash balance experiments and finite-field Kakeya audits"};
  app.require_subcommand(1);
  Flags f;

  auto* hash = app.add_subcommand("hash-balance", "sample surjective maps and test l-infinity balance on S");
  add_common(hash, f);
  auto* base = app.add_subcommand("baseline", "max bucket load: linear maps vs a truly random function");
  add_common(base, f);
  auto* audit = app.add_subcommand("audit", "exhaustive audits");
  std::string family;
  audit->add_option("family", family, "balance, furstenberg or polymethod")
      ->required()
      ->check(CLI::IsMember({"balance", "furstenberg", "polymethod"}));
  add_common(audit, f);
  auto* params = app.add_subcommand("params", "output lengths from the parameter rules");
  add_common(params, f);
  params->add_option("--n", f.n, "ambient dimension");
  params->add_option("--set-size", f.set_size, "|S| (decimal)");
  params->add_option("--tau", f.tau, "tau as num/den");
  params->add_option("--delta", f.delta, "delta as num/den");
  params->add_option("--q", f.q, "field size for the large-field rules");
  params->add_option("--variant", f.variant, "restrict to one rule");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : hn::kUsage;
  }

  try {
    if (hash->parsed()) return guarded(f, hn::Kind::hash_balance, hn::run_hash_balance);
    if (base->parsed()) return guarded(f, hn::Kind::baseline_compare, hn::run_baseline_compare);
    if (params->parsed()) return guarded(f, hn::Kind::params, hn::run_params);
    if (family == "balance") return guarded(f, hn::Kind::balance_audit, hn::run_balance_audit);
    if (family == "furstenberg") return guarded(f, hn::Kind::furstenberg_audit, hn::run_furstenberg_audit);
    return guarded(f, hn::Kind::polymethod_selfcheck, hn::run_polymethod_selfcheck);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return hn::kUsage;
  }
}

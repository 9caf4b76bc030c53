// Command-line driver: verify suites, estimate constants, replay and
// generate instances.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "jbtriple/harness.hpp"

namespace {

constexpr int kExitConfig = 2;

void print_summary(const std::vector<jbt::VerificationReport>& reports) {
  for (const auto& r : reports) {
    std::printf("%-4s %-10s %-28s %-36s max=%.3e tol=%.1e n=%d %.0fms\n", r.pass ? "PASS" : "FAIL", r.suite.c_str(),
                r.check.c_str(), r.space.c_str(), r.max_residual, r.tolerance, r.samples, r.millis);
  }
}

jbt::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw jbt::ConfigError("cannot read " + path);
  try {
    return jbt::json::parse(in);
  } catch (const jbt::json::exception& e) {
    throw jbt::ConfigError(path + " is not valid JSON: " + e.what());
  }
}

void write_json(const jbt::json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw jbt::ConfigError("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification harness for JB*-triple seminorm inequalities"};
  app.require_subcommand(1);

  std::string suite, config_path, out_dir;
  std::uint64_t seed = 0;
  std::vector<std::string> dims;
  int samples = 0;
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite, "suite name")->required()->check(CLI::IsMember(jbt::suite_names()));
  verify->add_option("--config", config_path, "JSON config mirroring RunConfig");
  auto* seed_opt = verify->add_option("--seed", seed, "base seed");
  verify->add_option("--dims", dims, "space specs, e.g. rect(2,3) sym(4)");
  auto* samples_opt = verify->add_option("--samples", samples, "samples per check");
  verify->add_option("--out", out_dir, "directory for report.json and report.csv");

  std::string mode = "little";
  int budget = 2000;
  std::string est_out;
  std::uint64_t est_seed = 7;
  std::vector<std::string> est_dims;
  auto* estimate = app.add_subcommand("estimate-constants", "search for instances with large witness ratios");
  estimate->add_option("--mode", mode, "little or big")->check(CLI::IsMember({"little", "big"}));
  estimate->add_option("--budget", budget, "total local-search iterations")->required();
  estimate->add_option("--seed", est_seed, "base seed");
  estimate->add_option("--dims", est_dims, "space specs");
  estimate->add_option("--out", est_out, "instances JSON path (stdout if omitted)");

  std::string instance_path;
  auto* replay = app.add_subcommand("replay", "rerun stored instances and compare their bounds");
  replay->add_option("--instance", instance_path, "instance JSON (object or array)")->required();

  std::string spec;
  std::uint64_t gen_seed = 0;
  auto* generate = app.add_subcommand("generate", "print a random element of a space");
  generate->add_option("--spec", spec, "space spec")->required();
  generate->add_option("--seed", gen_seed, "seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*verify) {
      jbt::RunConfig config = config_path.empty() ? jbt::RunConfig{} : jbt::load_config(config_path);
      if (*seed_opt) config.seed = seed;
      if (!dims.empty()) config.dims = dims;
      if (*samples_opt) config.samples = samples;
      if (!out_dir.empty()) config.out_dir = out_dir;
      const auto reports = jbt::run_suite(config, suite);
      print_summary(reports);
      if (!config.out_dir.empty()) jbt::write_reports(reports, config.out_dir, "report");
      return jbt::exit_status(reports);
    }
    if (*estimate) {
      std::vector<jbt::TripleSpace> spaces;
      for (const auto& d : est_dims) spaces.push_back(jbt::TripleSpace::parse(d));
      if (spaces.empty()) {
        for (int n = 1; n <= 4; ++n) spaces.push_back(jbt::TripleSpace::rect(1, n));
      }
      if (budget < 1) throw jbt::ConfigError("budget must be positive");
      const auto m = mode == "big" ? jbt::GiMode::kBig : jbt::GiMode::kLittle;
      const auto est = jbt::constant_estimate(m, spaces, budget, est_seed);
      jbt::json inst = jbt::json::array();
      for (const auto& i : est.instances) inst.push_back(jbt::to_json(i));
      std::fprintf(stderr, "lower bound %.12g over %zu instances\n", est.lower_bound, est.instances.size());
      write_json(jbt::json{{"mode", mode}, {"lower_bound", est.lower_bound}, {"instances", inst}}, est_out);
      return 0;
    }
    if (*replay) {
      jbt::json j = read_json(instance_path);
      if (j.is_object() && j.contains("instances")) j = j["instances"];
      if (!j.is_array()) j = jbt::json::array({j});
      int failures = 0;
      for (const auto& item : j) {
        const auto inst = jbt::constant_instance_from_json(item);
        const double got = jbt::replay_instance(inst);
        const bool ok = std::abs(got - inst.bound) <= 1e-9;
        failures += ok ? 0 : 1;
        std::printf("%s %s stored=%.17g replayed=%.17g\n", ok ? "OK  " : "DIFF", inst.space.describe().c_str(),
                    inst.bound, got);
      }
      return failures == 0 ? 0 : 1;
    }
    if (*generate) {
      std::cout << jbt::generate_instance(spec, gen_seed).dump() << "\n";
      return 0;
    }
  } catch (const jbt::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
  return 0;
}

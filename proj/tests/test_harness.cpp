#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "jbtriple/harness.hpp"

using namespace jbt;

namespace {

RunConfig small(std::vector<std::string> dims, int samples = 10) {
  RunConfig c;
  c.dims = std::move(dims);
  c.samples = samples;
  return c;
}

}  // namespace

TEST(Config, Validation) {
  RunConfig c;
  c.samples = 0;
  EXPECT_THROW(run_suite(c, "all"), ConfigError);
  c.samples = 1;
  c.tol_algebraic = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c.tol_algebraic = 1e-10;
  c.dims = {"rect(2,"};
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_THROW(run_suite(RunConfig{}, "nope"), ConfigError);
}

TEST(Config, JsonRoundTrip) {
  RunConfig c;
  c.seed = 0xFFFFFFFFFFFFFFFFULL;
  c.dims = {"rect(2,3)", "sym(2)"};
  c.samples = 12;
  const RunConfig back = config_from_json(to_json(c));
  EXPECT_EQ(back.seed, c.seed);
  EXPECT_EQ(back.dims, c.dims);
  EXPECT_EQ(back.samples, 12);
  EXPECT_THROW(config_from_json(json{{"sedd", 1}}), ConfigError);
  EXPECT_THROW(config_from_json(json{{"samples", "many"}}), ConfigError);
  EXPECT_THROW(config_from_json(json::array()), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(Suites, AxiomsExample) {
  const auto reports = run_suite(small({"rect(2,2)"}, 100), "axioms");
  ASSERT_FALSE(reports.empty());
  for (const auto& r : reports) {
    EXPECT_TRUE(r.pass) << r.check;
    EXPECT_EQ(r.samples, 100);
    EXPECT_LT(r.max_residual, 1e-9) << r.check;
    EXPECT_FALSE(r.anchor.empty());
  }
  EXPECT_EQ(exit_status(reports), 0);
}

TEST(Suites, MergeWorkedExample) {
  const auto reports = run_suite(small({"rect(2,2)"}, 5), "merge");
  bool seen = false;
  for (const auto& r : reports) {
    if (r.check == "merge_equality" && r.space == "rect(2,2) worked example") {
      seen = true;
      EXPECT_LT(r.max_residual, 1e-12);
    }
  }
  EXPECT_TRUE(seen);
}

TEST(Suites, Deterministic) {
  for (const char* suite : {"peirce", "seminorm", "glue"}) {
    RunConfig c;
    c.samples = 5;
    const auto a = run_suite(c, suite);
    const auto b = run_suite(c, suite);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(std::bit_cast<std::uint64_t>(a[i].max_residual), std::bit_cast<std::uint64_t>(b[i].max_residual));
      EXPECT_EQ(std::bit_cast<std::uint64_t>(a[i].mean_residual), std::bit_cast<std::uint64_t>(b[i].mean_residual));
    }
  }
}

TEST(Suites, SeedChangesSamples) {
  RunConfig c = small({"rect(3,3)"}, 5);
  const auto a = run_suite(c, "axioms");
  c.seed = 8;
  const auto b = run_suite(c, "axioms");
  EXPECT_NE(a[0].max_residual, b[0].max_residual);
}

TEST(Suites, ShapeErrors) {
  EXPECT_THROW(run_suite(small({"rect(2,3)"}), "shift"), ConfigError);
  EXPECT_THROW(run_suite(small({"antisym(3)"}), "little-gi"), ConfigError);
}

TEST(Reports, ExitStatus) {
  VerificationReport ok, bad, exploratory;
  ok.pass = true;
  ok.suite = "axioms";
  bad.suite = "peirce";
  exploratory.suite = "constants";
  EXPECT_EQ(exit_status({ok}), 0);
  EXPECT_EQ(exit_status({ok, bad}), 1);
  EXPECT_EQ(exit_status({ok, exploratory}), 0);
}

TEST(Reports, CsvColumns) {
  EXPECT_EQ(csv_header(), "suite,check,space,samples,max_residual,tolerance,pass,seed,millis");
  VerificationReport r;
  r.suite = "axioms";
  r.check = "jordan_identity";
  r.space = "sum(rect(1,1),sym(2))";
  r.samples = 3;
  r.pass = true;
  const std::string row = to_csv_row(r);
  EXPECT_NE(row.find("\"sum(rect(1,1),sym(2))\""), std::string::npos);
  EXPECT_NE(row.find("axioms,jordan_identity"), std::string::npos);
}

TEST(Reports, WriteAndFailOnBadDir) {
  const auto dir = std::filesystem::temp_directory_path() / "jbtriple_report_test";
  std::filesystem::remove_all(dir);
  const auto reports = run_suite(small({"rect(2,2)"}, 2), "axioms");
  write_reports(reports, dir.string(), "report");
  std::ifstream in(dir / "report.json");
  const json j = json::parse(in);
  ASSERT_TRUE(j.is_array());
  EXPECT_EQ(j.size(), reports.size());
  EXPECT_EQ(j[0]["suite"], "axioms");
  EXPECT_TRUE(j[0].contains("anchor"));
  EXPECT_TRUE(std::filesystem::exists(dir / "report.csv"));
  EXPECT_THROW(write_reports(reports, "/proc/nonexistent/dir", "report"), ConfigError);
}

TEST(Instances, GenerateIsDeterministic) {
  EXPECT_EQ(generate_instance("rect(2,3)", 5).dump(), generate_instance("rect(2,3)", 5).dump());
  EXPECT_NE(generate_instance("rect(2,3)", 5).dump(), generate_instance("rect(2,3)", 6).dump());
  const Elementd x = element_from_json(generate_instance("rect(2,3)", 5));
  EXPECT_EQ(x.block(0).rows(), 2);
  EXPECT_EQ(x.block(0).cols(), 3);
  EXPECT_EQ(element_from_json(generate_instance("sum(rect(1,1),sym(2),antisym(3))", 1)).num_blocks(), 3);
  EXPECT_THROW(generate_instance("bogus", 1), ConfigError);
}

TEST(Instances, BitExactRoundTrip) {
  const json j = generate_instance("sum(rect(2,2),antisym(3))", 99);
  const Elementd x = element_from_json(j);
  const Elementd y = element_from_json(json::parse(to_json(x).dump()));
  for (int b = 0; b < x.num_blocks(); ++b) {
    for (Eigen::Index k = 0; k < x.block(b).size(); ++k) {
      EXPECT_EQ(std::bit_cast<std::uint64_t>(x.block(b)(k).real()), std::bit_cast<std::uint64_t>(y.block(b)(k).real()));
      EXPECT_EQ(std::bit_cast<std::uint64_t>(x.block(b)(k).imag()), std::bit_cast<std::uint64_t>(y.block(b)(k).imag()));
    }
  }
  const NormalFunctionald phi(x);
  EXPECT_EQ(functional_from_json(to_json(phi)).rep().block(0), phi.rep().block(0));
  EXPECT_EQ(space_from_json(to_json(x.space())).describe(), x.space().describe());
  EXPECT_EQ(from_hex(to_hex(0.1)), 0.1);
}

TEST(Instances, ConstantInstanceRoundTrip) {
  const auto est = constant_estimate(GiMode::kLittle, {TripleSpace::rect(1, 2)}, 30, 4);
  ASSERT_FALSE(est.instances.empty());
  for (const auto& inst : est.instances) {
    const auto back = constant_instance_from_json(json::parse(to_json(inst).dump()));
    EXPECT_EQ(back.bound, inst.bound);
    EXPECT_EQ(back.operator_, inst.operator_);
    EXPECT_EQ(replay_instance(back), inst.bound);
  }
  json bad = to_json(est.instances.front());
  bad["mode"] = "medium";
  EXPECT_THROW(constant_instance_from_json(bad), ConfigError);
}

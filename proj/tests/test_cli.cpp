#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "json.hpp"
#include "zw/cli.hpp"
#include "zw/io.hpp"
#include "zw/semantics.hpp"

using namespace zw;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct CliRun {
  int code;
  std::string out, err;
};

CliRun zw_run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string corpus(const std::string& name) { return std::string(ZW_CORPUS_DIR) + "/" + name; }

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "zw_cli_test";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Cli, EqSpiderFusionPair) {
  const CliRun r = zw_run({"eq", corpus("qudit3_s_lhs.zw"), corpus("qudit3_s_rhs.zw"), "--tol", "1e-9"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_TRUE(j["equal"].get<bool>());
  EXPECT_TRUE(j["witness"].is_null());
}

TEST(Cli, EqDifferentDiagramsGiveWitness) {
  const fs::path dir = scratch();
  const Flavor f = Flavor::qudit(3);
  save(z_spider(f, 2.0, 0, 2), (dir / "a.zw").string());
  save(z_spider(f, 3.0, 0, 2), (dir / "b.zw").string());
  const CliRun r = zw_run({"eq", (dir / "a.zw").string(), (dir / "b.zw").string()});
  EXPECT_EQ(r.code, kExitNegative);
  const json j = json::parse(r.out);
  EXPECT_FALSE(j["equal"].get<bool>());
  EXPECT_TRUE(j["witness"].is_array());
}

TEST(Cli, DefaultToleranceFromEnvironment) {
  const CliRun a = zw_run({"eq", corpus("qudit3_s_lhs.zw"), corpus("qudit3_s_rhs.zw")});
  EXPECT_DOUBLE_EQ(json::parse(a.out)["tolerance"].get<double>(), 1e-9);
  ::setenv("ZW_DEFAULT_TOL", "1e-6", 1);
  const CliRun b = zw_run({"eq", corpus("qudit3_s_lhs.zw"), corpus("qudit3_s_rhs.zw")});
  ::unsetenv("ZW_DEFAULT_TOL");
  EXPECT_DOUBLE_EQ(json::parse(b.out)["tolerance"].get<double>(), 1e-6);
}

TEST(Cli, InterpretMatchesLibraryBitForBit) {
  const fs::path out = scratch() / "t.zwt";
  const std::string src = corpus("qudit3_b1_lhs.zw");
  const CliRun r = zw_run({"interpret", src, "--output", out.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Tensor reloaded = tensor_from_json(read_text(out.string()));
  const Tensor direct = interpret(load(src));
  EXPECT_EQ(reloaded.shape, direct.shape);
  EXPECT_EQ(reloaded.data, direct.data);
  const CliRun asym = zw_run({"interpret", src, "--semantics", "asymmetric"});
  EXPECT_EQ(asym.code, kExitOk);
  EXPECT_EQ(zw_run({"interpret", src, "--semantics", "other"}).code, kExitError);
}

TEST(Cli, NormalizeProducesReloadableTable) {
  const std::string src = corpus("qudit2_plus_lhs.zw");
  const CliRun r = zw_run({"normalize", src});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  Flavor f;
  const CoefficientTable t = table_from_json(r.out, &f);
  EXPECT_EQ(f, Flavor::qudit(2));
  EXPECT_LE(rel_deviation(t.to_tensor(), interpret(load(src))), 1e-10);
  EXPECT_EQ(table_to_json(t, f), r.out);
}

TEST(Cli, CheckAxiomsQuditAllPass) {
  const CliRun r = zw_run({"check-axioms", "--flavor", "qudit", "--d", "2..5", "--samples", "50", "--seed", "7"});
  EXPECT_EQ(r.code, kExitOk) << r.out;
  EXPECT_NE(r.out.find("all PASS"), std::string::npos);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST(Cli, CheckAxiomsMixedJson) {
  const CliRun r = zw_run({"check-axioms", "--flavor", "mixed", "--caps", "1..4", "--samples", "50",
                        "--seed", "3", "--json"});
  EXPECT_EQ(r.code, kExitOk);
  const json j = json::parse(r.out);
  EXPECT_TRUE(j["all_pass"].get<bool>());
  EXPECT_GE(j["results"].size(), 40u);
}

TEST(Cli, CommandsAreDeterministicUnderSeed) {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"check-axioms", "--flavor", "mixed", "--caps", "2", "--samples", "20",
                                 "--seed", "11", "--json"},
        std::vector<std::string>{"minimality", "--rule", "b1", "--samples", "20", "--seed", "5", "--json"}}) {
    const CliRun a = zw_run(args), b = zw_run(args);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.code, b.code);
  }
}

TEST(Cli, MinimalityPlusReportsCounterexample) {
  const CliRun r = zw_run({"minimality", "--rule", "plus"});
  EXPECT_EQ(r.code, kExitOk) << r.out;
  EXPECT_NE(r.out.find("r=1 s=-1"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("PASS"), std::string::npos);
}

TEST(Cli, MinimalityEffectiveZPathIsMarkedProbeRelative) {
  const CliRun r = zw_run({"minimality", "--rule", "b1", "--json"});
  const json j = json::parse(r.out);
  EXPECT_TRUE(j["results"][0]["probe_relative"].get<bool>());
}

TEST(Cli, BridgeBothFlavors) {
  const CliRun q = zw_run({"bridge", corpus("qudit3_b2_lhs.zw")});
  EXPECT_EQ(q.code, kExitOk) << q.err;
  EXPECT_EQ(json::parse(q.out)["mode"], "commuting-square");
  const CliRun m = zw_run({"bridge", corpus("mixed_b2_lhs.zw")});
  EXPECT_EQ(m.code, kExitOk) << m.err;
  EXPECT_EQ(json::parse(m.out)["mode"], "to-uniform");
}

TEST(Cli, RenderToFile) {
  const fs::path out = scratch() / "g.dot";
  ASSERT_EQ(zw_run({"render", corpus("qudit3_cp_lhs.zw"), "-o", out.string()}).code, kExitOk);
  EXPECT_EQ(read_text(out.string()), render_dot(load(corpus("qudit3_cp_lhs.zw"))));
}

TEST(Cli, ErrorsAreMachineReadable) {
  const CliRun missing = zw_run({"interpret", "/nonexistent/x.zw"});
  EXPECT_EQ(missing.code, kExitError);
  EXPECT_EQ(json::parse(missing.err)["error"]["kind"], "ParseError");
  const CliRun usage = zw_run({"frobnicate"});
  EXPECT_EQ(usage.code, kExitError);
  EXPECT_EQ(json::parse(usage.err)["error"]["kind"], "UsageError");
  const CliRun rule = zw_run({"minimality", "--rule", "zz"});
  EXPECT_EQ(rule.code, kExitError);
  EXPECT_EQ(json::parse(rule.err)["error"]["kind"], "UnknownRule");
  const CliRun range = zw_run({"check-axioms", "--d", "5..2"});
  EXPECT_EQ(json::parse(range.err)["error"]["kind"], "RangeViolation");
}

TEST(Cli, HelpExitsCleanly) {
  const CliRun r = zw_run({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("check-axioms"), std::string::npos);
}

TEST(Cli, IntRanges) {
  EXPECT_EQ(parse_int_range("3"), (std::pair{3, 3}));
  EXPECT_EQ(parse_int_range("2..5"), (std::pair{2, 5}));
  EXPECT_THROW(parse_int_range("2..x"), ZwError);
  EXPECT_THROW(parse_int_range(""), ZwError);
}

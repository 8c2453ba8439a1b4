#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"

using specgap::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

double tsv_value(const std::string& tsv, const std::string& section, const std::string& name) {
  std::istringstream in(tsv);
  std::string line;
  const std::string prefix = section + "\t" + name + "\t";
  while (std::getline(in, line)) {
    if (line.rfind(prefix, 0) == 0) {
      const auto rest = line.substr(prefix.size());
      return std::stod(rest.substr(0, rest.find('\t')));
    }
  }
  FAIL("row " << section << "/" << name << " missing");
  return NAN;
}

const std::string kTwoState = R"({"Q":[[-1,1],[2,-2]]})";

}  // namespace

TEST_CASE("geom table on the round sphere") {
  const auto r = call({"geom", "--d", "3", "--D", "3.141592653589793", "--K", "2"});
  REQUIRE(r.code == 0);
  CHECK(tsv_value(r.out, "bound", "B1") == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(tsv_value(r.out, "reference", "lambda1") == doctest::Approx(3.0));
  CHECK(r.out.find("dominance\t") != std::string::npos);
}

TEST_CASE("geom general and family ops") {
  const auto g = call({"geom", "--d", "2", "--D", "2", "--K", "0", "--op", "general", "--f-family",
                       "sine_beta"});
  REQUIRE(g.code == 0);
  CHECK(tsv_value(g.out, "general", "value") > 0.0);
  const auto f = call({"geom", "--d", "2", "--D", "2", "--K", "0", "--op", "family"});
  REQUIRE(f.code == 0);
  CHECK(tsv_value(f.out, "family", "bound") >= tsv_value(g.out, "general", "value") * (1 - 1e-9));
  CHECK(call({"geom", "--d", "2", "--D", "2", "--K", "0", "--op", "nope"}).code == 2);
}

TEST_CASE("chain verb") {
  const auto r = call({"chain", "--inline", kTwoState});
  REQUIRE(r.code == 0);
  CHECK(tsv_value(r.out, "chain", "gap") == doctest::Approx(3.0));
  CHECK(tsv_value(r.out, "stationary", "pi0000") == doctest::Approx(2.0 / 3.0));
  CHECK(tsv_value(r.out, "chain", "sigma") <= 3.0 + 1e-9);

  const auto d = call({"chain", "--inline", kTwoState, "--op", "dirichlet", "--f", "1,0"});
  REQUIRE(d.code == 0);
  // 1/2 sum pi_i q_ij (f_j - f_i)^2 = pi_0 q_01 = 2/3
  CHECK(tsv_value(d.out, "chain", "dirichlet") == doctest::Approx(2.0 / 3.0));
  CHECK(tsv_value(d.out, "chain", "variance") == doctest::Approx(2.0 / 9.0));

  const auto bd = call({"chain", "--inline", R"({"birth":[1],"death":[2]})", "--op", "gap"});
  CHECK(tsv_value(bd.out, "chain", "gap") == doctest::Approx(3.0));

  CHECK(call({"chain", "--inline", kTwoState, "--f", "1,2,3", "--op", "dirichlet"}).code == 2);
  CHECK(call({"chain"}).code == 2);
}

TEST_CASE("cheeger verb") {
  const std::string sym = R"({"Q":[[-1,1],[1,-1]]})";
  const auto c = call({"cheeger", "--inline", sym, "--variant", "all", "--format", "json"});
  REQUIRE(c.code == 0);
  const auto j = nlohmann::json::parse(c.out);
  REQUIRE(j.size() == 4);
  CHECK(j[0]["variant"] == "poincare");
  CHECK(j[0]["value"].get<double>() == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-11));

  const auto ls = call({"cheeger", "--inline", sym, "--op", "lawler_sokal"});
  REQUIRE(ls.code == 0);
  CHECK(tsv_value(ls.out, "lawler_sokal", "k") == doctest::Approx(1.0));
  CHECK(tsv_value(ls.out, "lawler_sokal", "bound") == doctest::Approx(0.5));

  const auto dsc = call({"cheeger", "--inline", R"({"Q":[[-0.5,0.5],[0.5,-0.5]]})", "--op", "dsc"});
  REQUIRE(dsc.code == 0);
  CHECK(tsv_value(dsc.out, "dsc", "bound") == doctest::Approx(1.0));
  CHECK(call({"cheeger", "--inline", sym, "--op", "dsc"}).code == 2);

  const auto th = call({"cheeger", "--inline", sym, "--op", "theorem"});
  REQUIRE(th.code == 0);
  CHECK(th.out.find("theorem\tall_hold\t\t\t\t\t\ttrue") != std::string::npos);
  CHECK(call({"cheeger", "--inline", sym, "--variant", "nash", "--nu", "1"}).code == 2);
}

TEST_CASE("ergodic verb") {
  const auto r = call({"ergodic", "--inline", kTwoState});
  REQUIRE(r.code == 0);
  CHECK(tsv_value(r.out, "tv", "fitted_rate") == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(r.out.find("variance\tpoincare_decay\t\ttrue") != std::string::npos);

  const auto v = call({"ergodic", "--inline", kTwoState, "--op", "variance", "--times", "0,1,2"});
  REQUIRE(v.code == 0);
  CHECK(v.out.rfind("quantity\tstate\ttime\tvalue\tbound\n", 0) == 0);

  const std::string sym = R"({"Q":[[-1,1],[1,-1]]})";
  std::string times;
  for (int k = 0; k <= 2000; ++k) times += (k ? "," : "") + std::to_string(k * 1e-3);
  const auto a = call({"ergodic", "--inline", sym, "--op", "algebraic", "--f", "1,-1", "--q", "2",
                       "--times", times});
  REQUIRE(a.code == 0);
  CHECK(tsv_value(a.out, "algebraic", "constant") ==
        doctest::Approx(1 / (4 * std::exp(1.0))).epsilon(1e-6));
  CHECK(call({"ergodic", "--inline", sym, "--times", "1,0"}).code == 2);
}

TEST_CASE("probe verb") {
  const auto r = call({"probe", "--inline", R"({"b":"1","a":"1","sizes":[4,8,16]})"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("trend\tspectral_gap\t\t\t\t\t\tdecaying-to-zero") != std::string::npos);
  CHECK(r.out.find("meta\tpoincare_exponential_consistent\t\t\t\t\t\ttrue") != std::string::npos);
  CHECK(call({"probe", "--inline", R"({"b":"1","a":"1","sizes":[4]})", "--sizes", "1.5"}).code == 2);
}

TEST_CASE("exit codes and usage") {
  const auto none = call({});
  CHECK(none.code == 64);
  CHECK(none.err.find("usage: specgap") != std::string::npos);
  CHECK(call({"frobnicate"}).code == 64);
  CHECK(call({"--help"}).code == 0);
  CHECK(call({"geom", "--help"}).code == 0);
  CHECK(call({"geom", "--d", "2", "--bogus"}).code == 64);
  CHECK(call({"geom", "--d", "x", "--D", "1", "--K", "0"}).code == 64);
  const auto bad = call({"geom", "--d", "0", "--D", "1", "--K", "0"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("dimension must be ≥ 1") != std::string::npos);
  CHECK(call({"geom", "--d", "2.5", "--D", "1", "--K", "0"}).code == 2);
  CHECK(call({"chain", "--inline", "{\"Q\": [[-1,"}).code == 2);
  CHECK(call({"chain", "--inline", kTwoState, "--format", "xml"}).code == 2);
}

TEST_CASE("output is byte-identical across runs and can go to a file") {
  const std::vector<std::string> args{"chain", "--inline", R"({"Q":[[-2,1,1],[1,-1,0],[2,0,-2]]})",
                                      "--format", "json"};
  const auto a = call(args);
  const auto b = call(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);

  const auto path = std::filesystem::temp_directory_path() / "specgap_cli_test.tsv";
  std::filesystem::remove(path);
  auto with_out = args;
  with_out.push_back("--out");
  with_out.push_back(path.string());
  const auto c = call(with_out);
  REQUIRE(c.code == 0);
  CHECK(c.out.empty());
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == a.out);
  std::filesystem::remove(path);
}

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "csw/algebra/io.hpp"
#include "csw/cli/cli.hpp"
#include "csw/evaluator/evaluate.hpp"
#include "csw/formula/corpus.hpp"

using namespace csw;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run csw_run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("csw_cli_test_" + name);
  std::ofstream(path) << content;
  return path.string();
}

int count_lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("eval examples") {
  const auto r = csw_run({"eval", "--name", "phi_c", "-a", "M2", "--exact", "--json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["value"] == 2.0);
  CHECK(j["exact"] == true);
  CHECK(j["algebra"] == "M2");

  const auto bad = csw_run({"eval", "-a", "M0"});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("block size must be ≥ 1") != std::string::npos);
  CHECK(count_lines(bad.err) == 1);
  CHECK(bad.out.empty());
}

TEST_CASE("decompose example") {
  const auto r = csw_run({"decompose", "-a", "M7", "-d", "3", "--json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  REQUIRE(j["parts"].size() == 3);
  for (const auto& p : j["parts"]) CHECK(p["ranks"] == nlohmann::json::array({2}));
  REQUIRE(j["remainder_abelians"].size() == 1);
  CHECK(j["remainder_abelians"][0]["ranks"] == nlohmann::json::array({1}));
  const Element part = element_from_json(j["parts"][1]);
  CHECK(part.shape() == BlockShape({7}));
  const auto table = csw_run({"decompose", "-a", "M7", "-d", "3"});
  CHECK(table.code == 0);
  CHECK(table.out.find("abelian") != std::string::npos);
}

TEST_CASE("validation errors exit 1 with one line") {
  const std::vector<std::vector<std::string>> cases{
      {"eval", "--name", "phi_c", "-a", "M2", "--exact", "--numeric"},
      {"eval", "--name", "phi_c", "-f", "x.txt", "-a", "M2"},
      {"eval", "--name", "no_such_sentence", "-a", "M2"},
      {"eval", "-a", "M2"},
      {"eval", "--name", "phi_c", "-a", "M2", "--restarts", "0"},
      {"eval", "--name", "phi_c", "-a", "M2", "--frobnicate"},
      {"eval", "-f", "/nonexistent/formula.txt", "-a", "M2"},
      {"eval", "--name", "highly_irreducible", "-a", "M2", "--exact"},
      {"decompose", "-a", "M7", "-d", "1"},
      {"decompose", "-a", "M7"},
      {"dixmier", "-a", "M2", "--mode", "fast"},
      {"trace-est", "-a", "M2+M3", "--rank-tuple", "1", "--depth", "2"},
      {"trace-est", "-a", "M2", "--rank-tuple", "3", "--depth", "2"},
      {"limit", "--name", "phi_c"},
      {"limit", "--name", "phi_c", "--sequence", "n=i*i"},
      {"limit", "--k0-demo", "--s", "2"},
      {"search", "--name", "phi_c", "--eps", "0", "--max-dim", "2"},
      {"k0", "-a", "M2+"},
      {"bogus"},
      {},
  };
  for (const auto& args : cases) {
    const auto r = csw_run(args);
    std::string joined;
    for (const auto& a : args) joined += a + " ";
    CHECK_MESSAGE(r.code == 1, joined);
    CHECK_MESSAGE(count_lines(r.err) == 1, joined, r.err);
  }
}

TEST_CASE("formula files") {
  const auto good = temp_file("good.txt", "sup x:ball . sup y:ball . norm(x*y - y*x)\n");
  const auto r = csw_run({"eval", "-f", good, "-a", "C^2", "--json"});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["value"] == 0.0);
  const auto bad = temp_file("bad.txt", "sup x:ball . norm(x*");
  const auto b = csw_run({"eval", "-f", bad, "-a", "M2"});
  CHECK(b.code == 1);
  CHECK(b.err.find("at byte") != std::string::npos);
  const auto open = temp_file("open.txt", "norm(x)");
  CHECK(csw_run({"eval", "-f", open, "-a", "M2"}).code == 1);
}

TEST_CASE("help exits 0") {
  const auto r = csw_run({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("trace-est") != std::string::npos);
  const auto e = csw_run({"eval", "--help"});
  CHECK(e.code == 0);
  CHECK(e.out.find("--restarts") != std::string::npos);
}

TEST_CASE("JSON output round-trips bit-exactly") {
  EvalConfig cfg;
  cfg.seed = 5;
  cfg.restarts = 4;
  cfg.local_steps = 30;
  const auto direct = evaluate_numeric(*formula::corpus_formula("phi_c"), BlockShape({2}), cfg);
  const auto r = csw_run({"eval", "--name", "phi_c", "-a", "M2", "--numeric", "--seed", "5", "--restarts", "4",
                          "--steps", "30", "--json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["value"].get<double>() == direct.value);
  CHECK(j["bound"] == "lower");
  CHECK(j["seed"] == 5);
  // Re-serializing the parsed document reproduces the printed text.
  CHECK(j.dump(2) + "\n" == r.out);

  const auto a = csw_run({"archbold", "-a", "M2+M3", "--seed", "3", "--json"});
  REQUIRE(a.code == 0);
  const auto ja = nlohmann::json::parse(a.out);
  CHECK(nlohmann::json::parse(ja.dump())["derivation_norm"].get<double>() == ja["derivation_norm"].get<double>());
  CHECK(ja.dump(2) + "\n" == a.out);
  const Element input = element_from_json(ja["input"]);
  CHECK(element_to_json(input) == ja["input"]);
}

TEST_CASE("CSL_SEED is the default seed") {
  ::setenv("CSL_SEED", "77", 1);
  const auto r = csw_run({"eval", "--name", "phi_c", "-a", "M2", "--numeric", "--restarts", "2", "--steps", "5",
                          "--json"});
  ::setenv("CSL_SEED", "not-a-number", 1);
  const auto bad = csw_run({"eval", "--name", "phi_c", "-a", "M2", "--numeric", "--restarts", "2", "--steps", "5"});
  ::unsetenv("CSL_SEED");
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["seed"] == 77);
  CHECK(bad.code == 1);
  const auto d = csw_run({"eval", "--name", "phi_c", "-a", "M2", "--numeric", "--restarts", "2", "--steps", "5",
                          "--json"});
  CHECK(nlohmann::json::parse(d.out)["seed"] == 1);
}

TEST_CASE("structure and limits commands") {
  const auto d = csw_run({"dixmier", "-a", "M2+M3", "--mode", "exact", "--json"});
  REQUIRE(d.code == 0);
  const auto jd = nlohmann::json::parse(d.out);
  CHECK(jd["replay_residual"].get<double>() <= 1e-10);
  CHECK(jd["transcript"].size() <= 5);

  const auto in = temp_file("x.json", R"({"shape":[2],"blocks":[[[1,0],[0,0],[0,0],[0,0]]]})");
  const auto d2 = csw_run({"dixmier", "-a", "M2", "--mode", "exact", "--input", in, "--json"});
  REQUIRE(d2.code == 0);
  const Element z = element_from_json(nlohmann::json::parse(d2.out)["center"]);
  CHECK(std::abs(z.block(0)(0, 0) - Complex(0.5)) < 1e-15);
  CHECK(csw_run({"dixmier", "-a", "M3", "--mode", "exact", "--input", in}).code == 1);
  const auto it = csw_run({"dixmier", "-a", "M3", "--mode", "iter", "--seed", "4", "--json"});
  REQUIRE(it.code == 0);
  const auto errors = nlohmann::json::parse(it.out)["errors"];
  for (std::size_t k = 0; k + 1 < errors.size(); ++k) CHECK(errors[k + 1].get<double>() <= 0.75 * errors[k].get<double>() + 1e-13);

  const auto k = csw_run({"k0", "-a", "M2+M3", "--json"});
  REQUIRE(k.code == 0);
  CHECK(nlohmann::json::parse(k.out)["order_unit"] == nlohmann::json::array({2, 3}));

  const auto t = csw_run({"trace-est", "-a", "M5", "--rank-tuple", "2", "--depth", "10", "--json"});
  REQUIRE(t.code == 0);
  CHECK(nlohmann::json::parse(t.out)["error"].get<double>() <= 0.1);

  const auto l = csw_run({"limit", "--name", "phi_c", "--sequence", "n=1..20", "--json"});
  REQUIRE(l.code == 0);
  const auto jl = nlohmann::json::parse(l.out);
  CHECK(jl["limsup"] == 2.0);
  CHECK(jl["values"][0]["value"] == 0.0);

  const auto m = csw_run({"limit", "--mod-d", "3", "--sequence", "n=i", "--subsequence", "3,1", "--json"});
  REQUIRE(m.code == 0);
  CHECK(nlohmann::json::parse(m.out)["value"] == 1);

  const auto kd = csw_run({"limit", "--k0-demo", "--s", "0.5", "--lambda", "0.5", "--n", "100", "--json"});
  REQUIRE(kd.code == 0);
  CHECK(nlohmann::json::parse(kd.out)["rows"][0]["trace_s"] == 0.1);

  const auto s = csw_run({"search", "--name", "phi_c", "--eps", "0.1", "--max-dim", "3", "--json"});
  REQUIRE(s.code == 0);
  CHECK(nlohmann::json::parse(s.out)["algebra"] == "M1");

  const auto a = csw_run({"archbold", "-a", "M2", "--input", in, "--json"});
  REQUIRE(a.code == 0);
  CHECK(nlohmann::json::parse(a.out)["dist_to_center"].get<double>() == doctest::Approx(0.5));

  const auto list = csw_run({"corpus", "list"});
  CHECK(list.code == 0);
  CHECK(list.out.find("comparability") != std::string::npos);
}

TEST_CASE("corpus run reports registry values") {
  for (const char* shape : {"C^1", "C^2", "C^3", "M2", "M3", "M2+M3"}) {
    const auto r = csw_run({"corpus", "run", "-a", shape, "--skip-numeric", "--json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    const BlockShape s = BlockShape::parse(shape);
    for (const auto& e : j["entries"]) {
      const auto exact = evaluate_exact(*formula::corpus_formula(e["name"]), s);
      CHECK(e["exact"].is_null() == !exact.has_value());
      if (exact) CHECK(e["exact"].get<double>() == exact->value);
    }
  }
  // Numeric columns on a commutative shape with a light budget.
  const auto r = csw_run({"corpus", "run", "-a", "C^2", "--restarts", "8", "--inner-restarts", "4", "--steps", "20",
                          "--json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  for (const auto& e : j["entries"]) {
    if (e["name"] == "phi_c" || e["name"] == "phi_u" || e["name"] == "central_proj_exists") CHECK(e["status"] == "pass");
  }
}

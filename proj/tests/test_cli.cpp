#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli/commands.hpp"
#include "surfhol/serialize.hpp"

using surfhol::Json;
using surfhol::cli::main_entry;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = main_entry(args, out, err);
  return {code, out.str(), err.str()};
}

std::string scenario(const std::string& name) { return std::string(SURFHOL_SCENARIO_DIR) + "/" + name; }

std::string write_temp(const std::string& name, const std::string& text) {
  const auto p = std::filesystem::temp_directory_path() / ("surfhol_cli_" + name);
  std::ofstream(p) << text;
  return p.string();
}

Json json_run(std::vector<std::string> args) {
  args.push_back("--json");
  args.push_back("-");
  const Run r = run(args);
  REQUIRE(r.code <= 1);
  return Json::parse(r.out);
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("reports are deterministic") {
    const std::vector<std::string> args = {"compose", "--config", scenario("compose.yaml"), "--samples", "50"};
    const Run a = run({args[0], args[1], args[2], args[3], args[4], "--json", "-"});
    const Run b = run({args[0], args[1], args[2], args[3], args[4], "--json", "-"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    const Json j = Json::parse(a.out);
    CHECK(j["subcommand"] == "compose");
    CHECK(j["pass"] == true);
    CHECK(j["seed"] == 5);
    CHECK_FALSE(j["conventions"].empty());
    for (const auto& c : j["conventions"]) CHECK_FALSE(c["text"].get<std::string>().empty());
  }

  TEST_CASE("usage and config errors exit with 2") {
    CHECK(run({"axioms", "--config", "/nonexistent/file.yaml"}).code == 2);
    CHECK(run({"sideways", "--config", scenario("axioms.yaml")}).code == 2);
    CHECK(run({"axioms"}).code == 2);
    CHECK(run({"axioms", "--config", write_temp("bad.yaml", "run: [1, 2\n")}).code == 2);
    CHECK(run({"axioms", "--config", scenario("axioms.yaml"), "--csv", "/tmp/x.csv"}).code == 2);
    CHECK(run({"compose", "--config", scenario("compose.yaml"), "--convention", "upside-down"}).code == 2);

    const std::string bad_expr = write_temp("bad_expr.yaml",
                                            "instance: conjugation-so3\ndim: 2\n"
                                            "forms:\n  A:\n    components: [[\"x1 +* x2\", \"0\", \"0\"], [\"0\", \"0\", \"0\"]]\n"
                                            "paths:\n  gamma:\n    expr: [\"t\", \"0\"]\n");
    const Run r = run({"transport", "--config", bad_expr});
    CHECK(r.code == 2);
    CHECK(r.err.find("offset 4") != std::string::npos);
  }

  TEST_CASE("the literal face convention fails closure with a witness") {
    const Run r = run({"compose", "--config", scenario("compose.yaml"), "--convention", "paper-literal", "--samples",
                       "50", "--json", "-"});
    CHECK(r.code == 1);
    const Json j = Json::parse(r.out);
    CHECK(j["pass"] == false);
    CHECK(j["details"].contains("conjugation-so3.vertical_closure_counterexample"));
    CHECK(j["metrics"]["abelian-circle.vertical_closure"].get<double>() <= 1e-10);
  }

  TEST_CASE("nogo for both schemes") {
    const Json crossed = json_run({"nogo", "--config", scenario("nogo_crossed.yaml"), "--samples", "100"});
    CHECK(crossed["pass"] == true);
    const Json single = json_run({"nogo", "--config", scenario("nogo_single.yaml"), "--samples", "100"});
    CHECK(single["pass"] == true);
    CHECK(single["details"]["scheme"] == "single-group");
    CHECK_FALSE(single["details"]["counterexample"].is_null());
    CHECK(single["metrics"]["single_group.max_residual"].get<double>() >= 0.1);
  }

  TEST_CASE("YAML and JSON configs with the same content share a digest") {
    const std::string yaml = write_temp("same.yaml", "run:\n  seed: 11\n  samples: 20\n  label: \"10\"\n");
    const std::string json = write_temp("same.json", R"({"run": {"samples": 20, "seed": 11, "label": "10"}})");
    const Json a = json_run({"axioms", "--config", yaml});
    const Json b = json_run({"axioms", "--config", json});
    CHECK(a["config_digest"] == b["config_digest"]);
    CHECK(a == b);

    // flags override the config and change the digest
    const Json c = json_run({"axioms", "--config", yaml, "--seed", "12"});
    CHECK(c["seed"] == 12);
    CHECK(c["config_digest"] != a["config_digest"]);
  }

  TEST_CASE("convergence writes a CSV table") {
    const std::string csv = (std::filesystem::temp_directory_path() / "surfhol_cli_table.csv").string();
    const Run r = run({"convergence", "--config", scenario("convergence_curvature.yaml"), "--csv", csv});
    CHECK(r.code == 0);
    std::ifstream in(csv);
    std::string header, first, second;
    std::getline(in, header);
    std::getline(in, first);
    std::getline(in, second);
    CHECK(header == "resolution,residual,order_estimate");
    CHECK(first.back() == ',');  // no order estimate for the coarsest row
    CHECK(std::count(second.begin(), second.end(), ',') == 2);
    CHECK(second.back() != ',');
  }

  TEST_CASE("the human summary names the outcome") {
    const Run r = run({"axioms", "--config", scenario("axioms.yaml"), "--samples", "10"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("axioms: PASS", 0) == 0);
  }
}

#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "support.hpp"
#include "surfhol/errors.hpp"
#include "surfhol/serialize.hpp"

using namespace surfhol;

namespace {

std::string write_temp(const std::string& name, const std::string& text) {
  const auto p = std::filesystem::temp_directory_path() / ("surfhol_test_" + name);
  std::ofstream(p) << text;
  return p.string();
}

}  // namespace

TEST_SUITE("serialize") {
  TEST_CASE("plaquettes round-trip through JSON") {
    for (const auto& name : builtin_instance_names()) {
      std::mt19937_64 rng(21);
      const Plaquette p = random_flat_plaquette(builtin_instance(name), rng);
      const Json j = plaquette_to_json(p);
      CHECK(j["instance"] == name);
      const Plaquette back = plaquette_from_json(Json::parse(j.dump()));
      CHECK(plaquette_distance(back, p) == 0.0);
      CHECK(back.module().name == name);
    }
  }

  TEST_CASE("grids round-trip through JSON") {
    const PlaquetteGrid g = random_flat_grid(builtin_instance("conjugation-so3"), 2, 3, 4);
    const PlaquetteGrid back = grid_from_json(Json::parse(grid_to_json(g).dump()));
    CHECK(back.rows() == 2);
    CHECK(back.cols() == 3);
    for (std::size_t k = 0; k < 6; ++k) CHECK(plaquette_distance(back.cells()[k], g.cells()[k]) == 0.0);
    CHECK_THROWS_AS(grid_from_json(Json{{"rows", 2}, {"cols", "3"}, {"cells", Json::array()}}), UsageError);
  }

  TEST_CASE("matrix formats") {
    const GroupElement z(GroupTag::circle(), Matrix::Constant(1, 1, testing::phase(0.5)));
    const Json j = group_to_json(z);
    CHECK(j.size() == 1);
    CHECK(j[0][0].size() == 2);
    CHECK(j[0][0][0].get<double>() == std::cos(0.5));
    CHECK(j[0][0][1].get<double>() == std::sin(0.5));
    CHECK(distance(group_from_json(Json::parse("[[1]]"), GroupTag::circle()), GroupElement::identity(GroupTag::circle())) == 0.0);

    const Json column = Json::parse("[[1.5], [-2], [0]]");
    const GroupElement v = group_from_json(column, GroupTag::translation(3));
    CHECK(v.matrix()(1, 0).real() == -2.0);
    CHECK(group_to_json(v) == column);
  }

  TEST_CASE("bad matrices are usage errors") {
    const GroupTag so3 = GroupTag::rotation();
    CHECK_THROWS_AS(group_from_json(Json::parse("[[1,0],[0,1]]"), so3), UsageError);
    CHECK_THROWS_AS(group_from_json(Json::parse("[[1,0,0],[0,1,0],[0,0]]"), so3), UsageError);
    CHECK_THROWS_AS(group_from_json(Json::parse("[[2,0,0],[0,1,0],[0,0,1]]"), so3), UsageError);
    CHECK_THROWS_AS(group_from_json(Json::parse("[[1,0,0],[0,1,0],[0,0,\"x\"]]"), so3), UsageError);
    CHECK_THROWS_AS(group_from_json(Json::parse("[[[0.6, 0.6]]]"), GroupTag::circle()), UsageError);
    CHECK_THROWS_AS(group_from_json(Json::parse("[[\"1\"]]"), GroupTag::circle()), UsageError);
    CHECK_THROWS_AS(plaquette_from_json(Json{{"a", 1}}), UsageError);
    CHECK_THROWS_AS(plaquette_from_json(Json{{"instance", "nope"}}), UsageError);
  }

  TEST_CASE("CSV samples") {
    const std::string ok = write_temp("ok.csv", "# t, x\n0, 1.5\n\n 0.5 , -2e-1\r\n1,3\n");
    const auto rows = read_csv_rows(ok);
    REQUIRE(rows.size() == 3);
    CHECK(rows[1](0) == 0.5);
    CHECK(rows[1](1) == -0.2);
    CHECK(rows[2](1) == 3.0);

    CHECK_THROWS_AS(read_csv_rows(write_temp("ragged.csv", "1,2\n3\n")), UsageError);
    CHECK_THROWS_AS(read_csv_rows(write_temp("text.csv", "1,abc\n")), UsageError);
    CHECK_THROWS_AS(read_csv_rows(write_temp("empty.csv", "# nothing\n")), UsageError);
    CHECK_THROWS_AS(read_csv_rows("/nonexistent/path.csv"), UsageError);
    try {
      read_csv_rows(write_temp("line.csv", "1,2\n\n3,x\n"));
    } catch (const UsageError& e) {
      CHECK(std::string(e.what()).find(":3:") != std::string::npos);
    }
  }
}

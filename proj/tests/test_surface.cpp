#include <doctest.h>

#include "support.hpp"
#include "surfhol/errors.hpp"
#include "surfhol/surface.hpp"

using namespace surfhol;

TEST_SUITE("surface") {
  TEST_CASE("a 1x1 grid folds to its cell") {
    const auto cm = builtin_instance("conjugation-so3");
    const PlaquetteGrid g = random_flat_grid(cm, 1, 1, 3);
    CHECK(plaquette_distance(grid_compose(g, FoldOrder::rows_first), g.cell(0, 0)) == 0.0);
    CHECK(plaquette_distance(grid_compose(g, FoldOrder::cols_first), g.cell(0, 0)) == 0.0);
  }

  TEST_CASE("random grids are flat, composable and deterministic") {
    const auto cm = builtin_instance("conjugation-so3");
    const PlaquetteGrid g = random_flat_grid(cm, 3, 4, 99);
    CHECK(g.cells().size() == 12);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 4; ++j) {
        CHECK(g.cell(i, j).flatness_residual() <= 1e-12);
        if (j + 1 < 4) CHECK(distance(g.cell(i, j).b(), g.cell(i, j + 1).d()) == 0.0);
        if (i + 1 < 3) CHECK(distance(g.cell(i, j).c(), g.cell(i + 1, j).a()) == 0.0);
      }
    }
    const PlaquetteGrid again = random_flat_grid(cm, 3, 4, 99);
    for (std::size_t k = 0; k < 12; ++k) CHECK(plaquette_distance(g.cells()[k], again.cells()[k]) == 0.0);
    CHECK_THROWS_AS(random_flat_grid(cm, 0, 2, 1), UsageError);
  }

  TEST_CASE("fold order does not matter for crossed modules") {
    for (const auto& name : builtin_instance_names()) {
      const auto cm = builtin_instance(name);
      double worst = 0.0;
      for (std::uint64_t s = 0; s < 1000; ++s) {
        const int rows = 1 + static_cast<int>(s % 4), cols = 1 + static_cast<int>((s / 4) % 4);
        const PlaquetteGrid g = random_flat_grid(cm, rows, cols, s);
        const double d = plaquette_distance(grid_compose(g, FoldOrder::rows_first), grid_compose(g, FoldOrder::cols_first));
        CHECK(d <= grid_tolerance(rows, cols));
        worst = std::max(worst, d);
      }
      CHECK_MESSAGE(worst <= 1e-10, name);
    }
  }

  TEST_CASE("abelian grid: face label is the product of all faces") {
    const auto cm = builtin_instance("abelian-circle");
    const PlaquetteGrid g = random_flat_grid(cm, 3, 5, 7);
    GroupElement product = cm->h_identity();
    for (const auto& p : g.cells()) product = product * p.h();
    CHECK(distance(grid_compose(g, FoldOrder::rows_first).h(), product) < 1e-13);
  }

  TEST_CASE("identity grid composes to an identity plaquette") {
    const auto cm = builtin_instance("conjugation-so3");
    std::vector<Plaquette> cells(6, videntity(cm, cm->g_identity()));
    const PlaquetteGrid g(2, 3, cells);
    const Plaquette total = grid_compose(g, FoldOrder::cols_first);
    CHECK(plaquette_distance(total, videntity(cm, cm->g_identity())) == 0.0);
  }

  TEST_CASE("large composites stay flat") {
    for (const auto& name : builtin_instance_names()) {
      const auto cm = builtin_instance(name);
      const PlaquetteGrid g = random_flat_grid(cm, 8, 8, 5);
      CHECK(grid_compose(g, FoldOrder::rows_first).flatness_residual() <= 1e-9);
      CHECK(grid_compose(g, FoldOrder::cols_first).flatness_residual() <= 1e-9);
    }
  }

  TEST_CASE("tolerance grows with the cell count and is capped") {
    CHECK(grid_tolerance(1, 1) == doctest::Approx(1e-11));
    CHECK(grid_tolerance(4, 4) == doctest::Approx(1.6e-10));
    CHECK(grid_tolerance(100, 100) == 1e-8);
  }

  TEST_CASE("non-composable grids name the offending cells") {
    const auto cm = builtin_instance("conjugation-so3");
    std::mt19937_64 rng(1);
    std::vector<Plaquette> cells;
    for (int k = 0; k < 4; ++k) cells.push_back(random_flat_plaquette(cm, rng));
    try {
      PlaquetteGrid g(2, 2, cells);
      FAIL("expected a composability error");
    } catch (const ComposabilityError& e) {
      CHECK(std::string(e.what()).find("(0,0)") != std::string::npos);
    }
    CHECK_THROWS_AS(PlaquetteGrid(2, 2, {cells[0]}), UsageError);
  }
}

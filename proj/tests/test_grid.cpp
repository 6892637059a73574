#include <doctest.h>

#include <set>

#include "occamix/grid.hpp"
#include "occamix/reference.hpp"
#include "test_helpers.hpp"

using namespace occamix;

TEST_CASE("grid_from_rows builds and validates") {
  const Grid g = grid_from_rows({{0}});
  CHECK(g.rows() == 1);
  CHECK(g.cols() == 1);
  CHECK(g.at(0, 0) == 0);

  CHECK_THROWS_AS(grid_from_rows({{1, 2}, {3, 10}}), Error);
  try {
    grid_from_rows({{1, 2}, {3, 10}});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ValueOutOfRange);
  }
  try {
    grid_from_rows({{1, 2}, {3}});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RaggedRows);
  }
  try {
    grid_from_rows({});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyInput);
  }
  std::vector<std::vector<int>> huge(31, std::vector<int>(31, 0));
  try {
    grid_from_rows(huge);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionTooLarge);
  }
}

TEST_CASE("cell_accuracy counts per policy") {
  Grid a(5, 5), b(5, 5);
  CHECK(cell_accuracy(a, b, AccuracyPolicy::AllCells) == 1.0);

  b.set(2, 2, 4);
  CHECK(cell_accuracy(a, b, AccuracyPolicy::AllCells) ==
        doctest::Approx(24.0 / 25.0));

  // Truth has 4 nonzero cells at (0,0),(1,1),(2,2),(3,3); prediction hits
  // three of them and background everywhere else.
  Grid truth(5, 5), pred(5, 5);
  truth.set(0, 0, 1);
  truth.set(1, 1, 2);
  truth.set(2, 2, 3);
  truth.set(3, 3, 4);
  pred.set(0, 0, 1);
  pred.set(1, 1, 2);
  pred.set(2, 2, 3);
  CHECK(cell_accuracy(pred, truth, AccuracyPolicy::NonBackgroundOnly) ==
        doctest::Approx(0.75));

  Grid small(4, 5);
  CHECK_THROWS_AS(cell_accuracy(small, truth, AccuracyPolicy::AllCells),
                  Error);

  // No nonzero truth cells: degenerate 1.0 plus a warning.
  std::vector<std::string> warnings;
  Grid empty_truth(3, 3), anything(3, 3);
  anything.set(0, 0, 5);
  CHECK(cell_accuracy(anything, empty_truth,
                      AccuracyPolicy::NonBackgroundOnly, &warnings) == 1.0);
  CHECK(warnings.size() == 1);
}

TEST_CASE("cell_accuracy properties") {
  std::mt19937 rng(11);
  for (int iter = 0; iter < 100; ++iter) {
    const Grid g = testutil::random_grid(rng, 1 + iter % 6, 1 + (iter / 2) % 6);
    CHECK(cell_accuracy(g, g, AccuracyPolicy::AllCells) == 1.0);
    CHECK(cell_accuracy(g, g, AccuracyPolicy::NonBackgroundOnly) == 1.0);
    const Grid h = testutil::random_grid(rng, g.rows(), g.cols());
    CHECK(cell_accuracy(g, h, AccuracyPolicy::AllCells) ==
          cell_accuracy(h, g, AccuracyPolicy::AllCells));
  }
}

TEST_CASE("aggregate_accuracy pools counts") {
  CHECK(aggregate_accuracy({{25, 25}}) == 1.0);
  CHECK(aggregate_accuracy({{20, 25}, {25, 25}}) == doctest::Approx(0.90));
  CHECK(aggregate_accuracy({{0, 25}, {25, 25}}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(aggregate_accuracy({}), Error);

  // Pooled accuracy weights examples by cell count; the diagnostic mean of
  // per-example accuracies does not.
  CHECK(aggregate_accuracy({{5, 10}, {90, 90}}) == doctest::Approx(0.95));
  CHECK(mean_of_means_accuracy({{5, 10}, {90, 90}}) == doctest::Approx(0.75));
  CHECK_THROWS_AS(mean_of_means_accuracy({}), Error);
}

TEST_CASE("extract_objects basic shapes") {
  Grid empty(5, 5);
  CHECK(extract_objects(empty, Connectivity::Four).empty());

  Grid corners(5, 5);
  corners.set(0, 0, 2);
  corners.set(4, 4, 2);
  CHECK(extract_objects(corners, Connectivity::Four).size() == 2);

  Grid diagonal(5, 5);
  diagonal.set(1, 1, 3);
  diagonal.set(2, 2, 3);
  CHECK(extract_objects(diagonal, Connectivity::Four).size() == 2);
  CHECK(extract_objects(diagonal, Connectivity::Eight).size() == 1);

  const auto regions = extract_objects(corners, Connectivity::Four);
  CHECK(regions[0].bounding_box == BoundingBox{0, 0, 0, 0});
  CHECK(regions[1].bounding_box == BoundingBox{4, 4, 4, 4});
}

TEST_CASE("extract_objects matches brute-force flood fill") {
  std::mt19937 rng(23);
  for (int iter = 0; iter < 200; ++iter) {
    const int rows = 1 + iter % 6, cols = 1 + (iter * 7) % 6;
    const Grid g = testutil::random_grid(rng, rows, cols, 0.55);
    for (const Connectivity conn : {Connectivity::Four, Connectivity::Eight}) {
      const auto regions = extract_objects(g, conn);
      const auto expected = reference::flood_fill_objects(g, conn);

      std::set<std::set<std::pair<int, int>>> got, want;
      size_t covered = 0;
      for (const auto& r : regions) {
        got.insert(std::set<std::pair<int, int>>(r.cells.begin(),
                                                 r.cells.end()));
        covered += r.cells.size();
        for (auto [rr, cc] : r.cells) CHECK(g.at(rr, cc) == r.color);
      }
      for (const auto& cells : expected) want.insert(cells);
      CHECK(got == want);

      size_t nonzero = 0;
      for (const CellValue v : g.cells()) nonzero += v != 0;
      CHECK(covered == nonzero);
    }
  }
}

TEST_CASE("extract_objects order is deterministic") {
  std::mt19937 rng(5);
  for (int iter = 0; iter < 50; ++iter) {
    const Grid g = testutil::random_grid(rng, 6, 6, 0.5);
    const auto regions = extract_objects(g, Connectivity::Four);
    for (size_t i = 1; i < regions.size(); ++i) {
      const auto& a = regions[i - 1].bounding_box;
      const auto& b = regions[i].bounding_box;
      CHECK((a.min_row < b.min_row ||
             (a.min_row == b.min_row && a.min_col <= b.min_col)));
    }
  }
}

TEST_CASE("serialize_objects format") {
  Grid empty(3, 3);
  CHECK(serialize_objects(empty) == "grid 3x3\nobjects: 0\n");

  Grid single(5, 5);
  single.set(0, 0, 2);
  CHECK(serialize_objects(single) ==
        "grid 5x5\nobjects: 1\nobject 1: color=2 cells=1 bbox=(0,0,0,0)\n");

  Grid stacked(5, 5);
  stacked.set(0, 2, 3);
  stacked.set(3, 2, 7);
  const std::string text = serialize_objects(stacked);
  CHECK(text.find("object 1 above object 2") != std::string::npos);
}

TEST_CASE("serialize_objects is pure") {
  std::mt19937 rng(31);
  for (int iter = 0; iter < 50; ++iter) {
    const Grid g = testutil::random_grid(rng, 5, 5, 0.5);
    CHECK(serialize_objects(g) == serialize_objects(g));
    const Grid copy = g;
    CHECK(serialize_objects(copy) == serialize_objects(g));
  }
}

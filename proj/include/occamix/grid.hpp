#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "occamix/error.hpp"

namespace occamix {

using CellValue = std::uint8_t;

constexpr int kNumColors = 10;   // cell values 0..9, 0 = background
constexpr int kMaxGridDim = 30;  // full ARC bound; Mini-ARC uses 5x5

// Dense row-major grid of color cells. Immutable in spirit: operations
// build new grids rather than mutating shared ones.
class Grid {
public:
  Grid() = default;
  Grid(int rows, int cols);  // zero-filled, dims validated

  static Grid from_rows(const std::vector<std::vector<int>>& rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int cell_count() const { return rows_ * cols_; }

  bool in_bounds(int r, int c) const {
    return r >= 0 && r < rows_ && c >= 0 && c < cols_;
  }

  CellValue at(int r, int c) const { return cells_[r * cols_ + c]; }
  void set(int r, int c, CellValue v) { cells_[r * cols_ + c] = v; }

  const std::vector<CellValue>& cells() const { return cells_; }

  friend bool operator==(const Grid&, const Grid&) = default;

private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<CellValue> cells_;
};

// Builds a validated grid; errors: RaggedRows, ValueOutOfRange,
// DimensionTooLarge, EmptyInput.
Grid grid_from_rows(const std::vector<std::vector<int>>& rows);

struct GridPair {
  Grid input;
  Grid output;
  friend bool operator==(const GridPair&, const GridPair&) = default;
};

enum class AccuracyPolicy { AllCells, NonBackgroundOnly };
enum class Connectivity { Four, Eight };

const char* accuracy_policy_name(AccuracyPolicy policy);
const char* connectivity_name(Connectivity conn);

struct MatchCounts {
  long long matches = 0;
  long long total = 0;
};

// Cell agreement between two same-size grids. Under NonBackgroundOnly the
// denominator counts cells where truth != 0.
MatchCounts match_counts(const Grid& predicted, const Grid& truth,
                         AccuracyPolicy policy);

// matches/total per the policy; a zero denominator is degenerate and yields
// 1.0 (a warning is appended when a sink is given).
double cell_accuracy(const Grid& predicted, const Grid& truth,
                     AccuracyPolicy policy,
                     std::vector<std::string>* warnings = nullptr);

// Pooled (micro) accuracy: sum(matches)/sum(totals), not mean of means.
double aggregate_accuracy(const std::vector<MatchCounts>& per_example,
                          std::vector<std::string>* warnings = nullptr);

// Mean of per-example accuracies; diagnostic only, never used in scoring.
double mean_of_means_accuracy(const std::vector<MatchCounts>& per_example);

struct BoundingBox {
  int min_row = 0;
  int min_col = 0;
  int max_row = 0;
  int max_col = 0;
  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

// One same-color connected component of nonzero cells.
struct ObjectRegion {
  CellValue color = 0;
  std::vector<std::pair<int, int>> cells;  // sorted (row, col)
  BoundingBox bounding_box;
};

// Partition of all nonzero cells into maximal same-color components,
// ordered by (min_row, min_col) of the bounding box.
std::vector<ObjectRegion> extract_objects(const Grid& grid, Connectivity conn);

// Deterministic structured-text listing of objects, attributes and pairwise
// bounding-box relations. Identical grids serialize to identical bytes.
std::string serialize_objects(const Grid& grid,
                              Connectivity conn = Connectivity::Four);

}  // namespace occamix

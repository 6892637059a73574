#include "occamix/grid.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>

namespace occamix {

Grid::Grid(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 1 || cols < 1)
    throw Error(ErrorCode::EmptyInput, "grid dimensions must be positive");
  if (rows > kMaxGridDim || cols > kMaxGridDim)
    throw Error(ErrorCode::DimensionTooLarge,
                "grid exceeds " + std::to_string(kMaxGridDim) + "x" +
                    std::to_string(kMaxGridDim));
  cells_.assign(static_cast<size_t>(rows) * cols, 0);
}

Grid Grid::from_rows(const std::vector<std::vector<int>>& rows) {
  if (rows.empty() || rows.front().empty())
    throw Error(ErrorCode::EmptyInput, "grid rows are empty");
  const size_t cols = rows.front().size();
  for (const auto& row : rows)
    if (row.size() != cols)
      throw Error(ErrorCode::RaggedRows, "rows have differing lengths");
  Grid g(static_cast<int>(rows.size()), static_cast<int>(cols));
  for (size_t r = 0; r < rows.size(); ++r) {
    for (size_t c = 0; c < cols; ++c) {
      const int v = rows[r][c];
      if (v < 0 || v >= kNumColors)
        throw Error(ErrorCode::ValueOutOfRange,
                    "cell value " + std::to_string(v) + " outside [0,9]");
      g.set(static_cast<int>(r), static_cast<int>(c),
            static_cast<CellValue>(v));
    }
  }
  return g;
}

Grid grid_from_rows(const std::vector<std::vector<int>>& rows) {
  return Grid::from_rows(rows);
}

const char* accuracy_policy_name(AccuracyPolicy policy) {
  return policy == AccuracyPolicy::AllCells ? "all" : "nonbg";
}

const char* connectivity_name(Connectivity conn) {
  return conn == Connectivity::Four ? "4" : "8";
}

MatchCounts match_counts(const Grid& predicted, const Grid& truth,
                         AccuracyPolicy policy) {
  if (predicted.rows() != truth.rows() || predicted.cols() != truth.cols())
    throw Error(ErrorCode::DimensionMismatch,
                "predicted and truth grids differ in shape");
  MatchCounts counts;
  for (int r = 0; r < truth.rows(); ++r) {
    for (int c = 0; c < truth.cols(); ++c) {
      if (policy == AccuracyPolicy::NonBackgroundOnly && truth.at(r, c) == 0)
        continue;
      ++counts.total;
      if (predicted.at(r, c) == truth.at(r, c)) ++counts.matches;
    }
  }
  return counts;
}

double cell_accuracy(const Grid& predicted, const Grid& truth,
                     AccuracyPolicy policy,
                     std::vector<std::string>* warnings) {
  const MatchCounts counts = match_counts(predicted, truth, policy);
  if (counts.total == 0) {
    if (warnings)
      warnings->push_back(
          "degenerate accuracy: truth has no non-background cells; "
          "returning 1.0");
    return 1.0;
  }
  return static_cast<double>(counts.matches) /
         static_cast<double>(counts.total);
}

double aggregate_accuracy(const std::vector<MatchCounts>& per_example,
                          std::vector<std::string>* warnings) {
  if (per_example.empty())
    throw Error(ErrorCode::EmptyInput, "aggregate_accuracy: no examples");
  long long matches = 0, total = 0;
  for (const auto& mc : per_example) {
    matches += mc.matches;
    total += mc.total;
  }
  if (total == 0) {
    if (warnings)
      warnings->push_back(
          "degenerate accuracy: zero pooled denominator; returning 1.0");
    return 1.0;
  }
  return static_cast<double>(matches) / static_cast<double>(total);
}

double mean_of_means_accuracy(const std::vector<MatchCounts>& per_example) {
  if (per_example.empty())
    throw Error(ErrorCode::EmptyInput, "mean_of_means_accuracy: no examples");
  double sum = 0.0;
  for (const auto& mc : per_example)
    sum += mc.total == 0 ? 1.0
                         : static_cast<double>(mc.matches) /
                               static_cast<double>(mc.total);
  return sum / static_cast<double>(per_example.size());
}

std::vector<ObjectRegion> extract_objects(const Grid& grid,
                                          Connectivity conn) {
  const int R = grid.rows(), C = grid.cols();
  static constexpr int kOffsets8[8][2] = {{-1, 0}, {1, 0},  {0, -1}, {0, 1},
                                          {-1, -1}, {-1, 1}, {1, -1}, {1, 1}};
  const int num_offsets = conn == Connectivity::Four ? 4 : 8;

  std::vector<char> seen(static_cast<size_t>(R) * C, 0);
  std::vector<ObjectRegion> regions;
  for (int r = 0; r < R; ++r) {
    for (int c = 0; c < C; ++c) {
      const CellValue color = grid.at(r, c);
      if (color == 0 || seen[r * C + c]) continue;
      ObjectRegion region;
      region.color = color;
      std::deque<std::pair<int, int>> frontier{{r, c}};
      seen[r * C + c] = 1;
      while (!frontier.empty()) {
        auto [cr, cc] = frontier.front();
        frontier.pop_front();
        region.cells.emplace_back(cr, cc);
        for (int k = 0; k < num_offsets; ++k) {
          const int nr = cr + kOffsets8[k][0], nc = cc + kOffsets8[k][1];
          if (!grid.in_bounds(nr, nc) || seen[nr * C + nc]) continue;
          if (grid.at(nr, nc) != color) continue;
          seen[nr * C + nc] = 1;
          frontier.emplace_back(nr, nc);
        }
      }
      std::sort(region.cells.begin(), region.cells.end());
      BoundingBox box{R, C, -1, -1};
      for (auto [rr, cc] : region.cells) {
        box.min_row = std::min(box.min_row, rr);
        box.min_col = std::min(box.min_col, cc);
        box.max_row = std::max(box.max_row, rr);
        box.max_col = std::max(box.max_col, cc);
      }
      region.bounding_box = box;
      regions.push_back(std::move(region));
    }
  }
  // Discovery order (row-major first cell) breaks bounding-box ties.
  std::stable_sort(regions.begin(), regions.end(),
                   [](const ObjectRegion& a, const ObjectRegion& b) {
                     if (a.bounding_box.min_row != b.bounding_box.min_row)
                       return a.bounding_box.min_row < b.bounding_box.min_row;
                     return a.bounding_box.min_col < b.bounding_box.min_col;
                   });
  return regions;
}

std::string serialize_objects(const Grid& grid, Connectivity conn) {
  const auto objects = extract_objects(grid, conn);
  char buf[128];
  std::string out;
  std::snprintf(buf, sizeof(buf), "grid %dx%d\n", grid.rows(), grid.cols());
  out += buf;
  std::snprintf(buf, sizeof(buf), "objects: %zu\n", objects.size());
  out += buf;
  for (size_t i = 0; i < objects.size(); ++i) {
    const auto& o = objects[i];
    std::snprintf(buf, sizeof(buf),
                  "object %zu: color=%d cells=%zu bbox=(%d,%d,%d,%d)\n", i + 1,
                  static_cast<int>(o.color), o.cells.size(),
                  o.bounding_box.min_row, o.bounding_box.min_col,
                  o.bounding_box.max_row, o.bounding_box.max_col);
    out += buf;
  }
  for (size_t i = 0; i < objects.size(); ++i) {
    for (size_t j = i + 1; j < objects.size(); ++j) {
      const auto& a = objects[i].bounding_box;
      const auto& b = objects[j].bounding_box;
      const char* relations[4] = {nullptr, nullptr, nullptr, nullptr};
      int n = 0;
      if (a.max_row < b.min_row) relations[n++] = "above";
      if (a.min_row > b.max_row) relations[n++] = "below";
      if (a.max_col < b.min_col) relations[n++] = "left-of";
      if (a.min_col > b.max_col) relations[n++] = "right-of";
      for (int k = 0; k < n; ++k) {
        std::snprintf(buf, sizeof(buf), "object %zu %s object %zu\n", i + 1,
                      relations[k], j + 1);
        out += buf;
      }
    }
  }
  return out;
}

}  // namespace occamix

#include "occamix/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace occamix {

namespace {

void dump_value(const ojson& v, std::string& out, int precision, int indent) {
  const std::string pad(static_cast<size_t>(indent) * 2, ' ');
  const std::string pad_in(static_cast<size_t>(indent + 1) * 2, ' ');
  switch (v.type()) {
    case nlohmann::detail::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      size_t i = 0;
      for (auto it = v.begin(); it != v.end(); ++it, ++i) {
        out += pad_in;
        out += ojson(it.key()).dump();
        out += ": ";
        dump_value(it.value(), out, precision, indent + 1);
        if (i + 1 < v.size()) out += ',';
        out += '\n';
      }
      out += pad + "}";
      return;
    }
    case nlohmann::detail::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      // Scalar-only arrays stay on one line (grids read naturally).
      bool scalars = true;
      for (const auto& e : v)
        if (e.is_structured()) {
          scalars = false;
          break;
        }
      if (scalars) {
        out += '[';
        for (size_t i = 0; i < v.size(); ++i) {
          if (i) out += ", ";
          dump_value(v[i], out, precision, indent);
        }
        out += ']';
        return;
      }
      out += "[\n";
      for (size_t i = 0; i < v.size(); ++i) {
        out += pad_in;
        dump_value(v[i], out, precision, indent + 1);
        if (i + 1 < v.size()) out += ',';
        out += '\n';
      }
      out += pad + "]";
      return;
    }
    case nlohmann::detail::value_t::number_float: {
      double d = v.get<double>();
      if (d == 0.0) d = 0.0;  // normalize -0
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.*f", precision, d);
      out += buf;
      return;
    }
    default:
      out += v.dump();
      return;
  }
}

}  // namespace

std::string dump_fixed(const ojson& value, int precision) {
  std::string out;
  dump_value(value, out, precision, 0);
  out += '\n';
  return out;
}

ojson grid_to_json(const Grid& grid) {
  ojson rows = ojson::array();
  for (int r = 0; r < grid.rows(); ++r) {
    ojson row = ojson::array();
    for (int c = 0; c < grid.cols(); ++c)
      row.push_back(static_cast<int>(grid.at(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Grid grid_from_json(const nlohmann::json& rows) {
  if (!rows.is_array())
    throw Error(ErrorCode::SchemaError, "grid must be an array of rows");
  std::vector<std::vector<int>> data;
  for (const auto& row : rows) {
    if (!row.is_array())
      throw Error(ErrorCode::SchemaError, "grid row must be an array");
    std::vector<int> cells;
    for (const auto& cell : row) {
      if (!cell.is_number_integer())
        throw Error(ErrorCode::SchemaError, "grid cell must be an integer");
      cells.push_back(cell.get<int>());
    }
    data.push_back(std::move(cells));
  }
  return grid_from_rows(data);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  out << content;
  if (!out) throw Error(ErrorCode::IoError, "short write to '" + path + "'");
}

}  // namespace occamix

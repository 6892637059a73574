#pragma once

#include <string>

#include <json.hpp>

#include "occamix/grid.hpp"

namespace occamix {

using ojson = nlohmann::ordered_json;

// Serializes with every float printed as a fixed-point number with
// `precision` decimals, 2-space indentation, and insertion-ordered keys.
// All report artifacts go through this so reruns are byte-identical.
std::string dump_fixed(const ojson& value, int precision = 6);

ojson grid_to_json(const Grid& grid);

// Validates shape and palette; errors: SchemaError plus the grid errors.
Grid grid_from_json(const nlohmann::json& rows);

// Reads a whole file; IoError when unreadable.
std::string read_text_file(const std::string& path);

// Creates parent directories as needed.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace occamix

#pragma once

#include <string>
#include <vector>

#include "tdnls/grid.hpp"

namespace tdnls {

// Compact little-endian binary field dump.
// Header: magic "TDNLSF1\0", int32 dim, int32 points, float64 half_width,
// float64 scale, int32 frame tag, float64 t; then interleaved re/im float64.
void write_field(const std::string& path, const WaveState& state);
WaveState read_field(const std::string& path);

// Writes rows of named columns; all columns must share a length.
void write_csv(const std::string& path, const std::vector<std::string>& headers,
               const std::vector<const std::vector<double>*>& columns);

void write_text(const std::string& path, const std::string& text);

void ensure_directory(const std::string& path);

std::string path_join(const std::string& a, const std::string& b);

}  // namespace tdnls

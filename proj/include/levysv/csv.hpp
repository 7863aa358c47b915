#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace levysv {

// Locale-independent decimal rendering with 17 significant digits, enough to
// round-trip any double exactly. All CSV and JSON numbers go through this so
// artifact bytes depend only on the computed values.
std::string format17(double v);

std::string format_u64(std::uint64_t v);

// Minimal CSV reader for the artifact files: splits on commas, no quoting
// (none of the formats need it). Returns one vector of cells per line.
std::vector<std::vector<std::string>> read_csv(std::istream& is);

double parse_double(const std::string& cell);

}  // namespace levysv

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ldgf/curves.hpp"

namespace ldgf {

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);
/// 16 lowercase hex digits.
std::string hex64(std::uint64_t value);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// Comma-separated, full round-trip precision; `comments` become leading
/// '#' lines, which gnuplot skips.
std::string format_csv(const CsvTable& table, const std::vector<std::string>& comments = {});
/// Skips '#' lines and blank lines; the first remaining line is the header.
CsvTable parse_csv(std::string_view text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

/// Columns t, x.
CsvTable curve_table(const SampledCurve& curve);
/// Columns t, x_left, x, x_right.
CsvTable curve_table(const BVCurve& curve);
/// Both read columns t and x; the BV reader also turns rows whose x_left
/// or x_right differ from x into jumps.
SampledCurve sampled_curve_from(const CsvTable& table);
BVCurve bv_curve_from(const CsvTable& table);

}  // namespace ldgf

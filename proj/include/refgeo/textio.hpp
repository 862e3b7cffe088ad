#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace refgeo {

// Numeric CSV cells: unrounded, up to 9 fractional digits, trailing zeros
// trimmed. Integral values print without a decimal point.
std::string format_number(double v);

// Display variant: fixed two decimals ("44.10").
std::string format_display(double v);

// Two-decimal display rounding as a value (for tests that compare at the
// display precision).
double round2(double v);

// RFC-4180-style escaping: quote when the field contains comma, quote, CR or
// LF; embedded quotes doubled.
std::string csv_escape(const std::string& field);

std::string join_csv_row(const std::vector<std::string>& cells);

// FNV-1a 64-bit, used for config/corpus fingerprints in report metadata.
std::uint64_t fnv1a64(const void* data, std::size_t len);
std::uint64_t fnv1a64(const std::string& s);
std::string hex64(std::uint64_t v);

// Whole-file helpers. read_file throws std::runtime_error when unreadable.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

std::string to_lower_ascii(std::string s);
std::string trim(const std::string& s);
// Collapses internal whitespace runs to single spaces, trims ends.
std::string normalize_spaces(const std::string& s);

}  // namespace refgeo

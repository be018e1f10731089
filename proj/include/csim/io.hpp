#pragma once

#include <complex>
#include <filesystem>
#include <string>

namespace csim {

/// "%.17g": 17 significant digits, so every double round-trips exactly.
std::string format_double(double x);

/// "[re, im]" with both parts at 17 significant digits.
std::string format_complex_json(std::complex<double> z);

/// Writes through a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

std::string read_file(const std::filesystem::path& path);

}  // namespace csim

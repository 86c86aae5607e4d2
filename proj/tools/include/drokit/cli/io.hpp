#pragma once

#include <filesystem>
#include <string>

namespace drokit::cli {

/// 17 significant digits, enough to round-trip any double.
std::string format_real(double v);

/// Write-then-rename so partial outputs never appear under the final name.
void atomic_write(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

} // namespace drokit::cli

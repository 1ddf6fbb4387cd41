#pragma once

// Deterministic text output helpers shared by the CSV/JSON writers.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

namespace rankbm::io {

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double value);

/// Comma-joined shortest representations.
std::string join(std::span<const double> values, std::string_view sep = ",");

/// Writes text to a file, creating parent directories. Binary mode, so
/// output bytes do not depend on the platform's newline convention.
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace rankbm::io

#pragma once

#include <filesystem>
#include <string>

namespace syntro {

/// Formats a double with 17 significant digits, enough to round-trip the
/// exact binary value through decimal text.
std::string format_g17(double v);

/// Writes content through a temporary file in the same directory followed by
/// a rename, so readers never observe a partially written file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace syntro

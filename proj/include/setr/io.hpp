#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace setr::io {

/// Shortest-exact decimal form ("%.17g"); round-trips every double bitwise.
std::string format_real(double x);

/// Writes `content` to `path`, creating parent directories. IoError on failure.
void write_text_file(const std::filesystem::path& path, std::string_view content);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace setr::io

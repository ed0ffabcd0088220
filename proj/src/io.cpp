#include "setr/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "setr/errors.hpp"

namespace setr::io {

std::string format_real(double x) {
    char buf[32];
    const int n = std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf, static_cast<std::size_t>(n));
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("write failed for " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace setr::io

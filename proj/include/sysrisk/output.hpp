#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sysrisk::io {

// Floating-point serialization with 17 significant digits so CSV round-trips
// are bit-faithful.
std::string format_double(double value);
std::string format_u64(std::uint64_t value);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

// Header row is mandatory; values are written verbatim (callers pre-format).
void write_csv(const std::string& path, const Table& table);

void write_text(const std::string& path, const std::string& content);

void ensure_directory(const std::string& path);

}  // namespace sysrisk::io

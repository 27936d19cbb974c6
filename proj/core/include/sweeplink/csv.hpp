#pragma once

#include <string>
#include <vector>

// Deterministic CSV assembly: shortest round-trip number formatting, '\n'
// line endings, byte-identical output for identical inputs.

namespace sweeplink {

// Shortest decimal form that parses back to the same double. NaN becomes an
// empty cell; infinities become "inf"/"-inf".
std::string csv_number(double v);
std::string csv_number(long long v);
std::string csv_number(unsigned long long v);

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns);

    // Cell count must match the header.
    void add_row(std::vector<std::string> cells);

    std::string str() const;
    std::size_t rows() const { return rows_.size(); }

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

// Writes content atomically enough for test use (single write); throws on
// failure, including an unwritable directory.
void write_text_file(const std::string& path, const std::string& content);

std::string read_text_file(const std::string& path);

} // namespace sweeplink

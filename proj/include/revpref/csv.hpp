// Minimal strict CSV reader. The file formats used here are plain
// comma-separated tables with a mandatory header row and no quoting, so a
// tiny parser with precise error locations beats a general dependency.
#pragma once

#include <string>
#include <vector>

namespace revpref {

struct CsvTable {
    std::string path;
    std::vector<std::string> header;
    // One entry per data row, each with exactly header.size() fields.
    std::vector<std::vector<std::string>> rows;
    // 1-based file line number of each data row, for error messages.
    std::vector<long> line_numbers;

    // Index of a required column; throws ValidationError when missing.
    int column(const std::string& name) const;
    // Index of an optional column, -1 when absent.
    int optional_column(const std::string& name) const;
};

// Reads and validates the table. Trailing blank lines are tolerated, ragged
// rows are not. Throws ValidationError with file:line context.
CsvTable read_csv(const std::string& path);

// Parses CSV content already in memory (used by tests and simulation
// round-trips); `path` only labels error messages.
CsvTable parse_csv(const std::string& content, const std::string& path);

} // namespace revpref

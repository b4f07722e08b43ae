#include "revpref/csv.hpp"

#include "revpref/errors.hpp"

#include <fstream>
#include <sstream>

namespace revpref {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            out.push_back(field);
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    out.push_back(field);
    return out;
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

} // namespace

int CsvTable::column(const std::string& name) const {
    int idx = optional_column(name);
    if (idx < 0)
        throw ValidationError(path + ": missing required column '" + name + "'");
    return idx;
}

int CsvTable::optional_column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

CsvTable parse_csv(const std::string& content, const std::string& path) {
    CsvTable table;
    table.path = path;

    std::istringstream in(content);
    std::string line;
    long line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (!have_header) {
            if (line.empty())
                throw ValidationError(path + ": line 1: empty header line");
            table.header = split_fields(line);
            have_header = true;
            continue;
        }
        if (line.empty()) continue; // tolerated: trailing or stray blank line
        auto fields = split_fields(line);
        if (fields.size() != table.header.size()) {
            throw ValidationError(path + ": line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(table.header.size()) + " fields, got " +
                                  std::to_string(fields.size()));
        }
        table.rows.push_back(std::move(fields));
        table.line_numbers.push_back(line_no);
    }
    if (!have_header) throw ValidationError(path + ": empty file");
    return table;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), path);
}

} // namespace revpref

#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ppdsim/common.hpp"

namespace ppdsim {

/// Row-oriented CSV writer. All of our formats are plain numeric/identifier
/// columns, so no quoting is performed.
class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path) : out_(path) {
        if (!out_)
            throw SimError("cannot open for writing: " + path);
        out_.precision(17); // doubles round-trip
    }

    template <typename... Ts>
    void row(const Ts&... cells) {
        bool first = true;
        ((write_cell(cells, first), first = false), ...);
        out_ << '\n';
    }

    void flush() { out_.flush(); }

  private:
    template <typename T>
    void write_cell(const T& v, bool first) {
        if (!first)
            out_ << ',';
        out_ << v;
    }

    std::ofstream out_;
};

/// Splits one CSV line; no quoting/escaping.
std::vector<std::string> split_csv_line(const std::string& line);

/// Reads a whole CSV file into rows of string cells. Skips blank lines.
std::vector<std::vector<std::string>> read_csv(const std::string& path);

} // namespace ppdsim

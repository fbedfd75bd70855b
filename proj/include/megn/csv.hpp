#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace megn {

inline constexpr const char* artifact_version = "megn-1.0.0";

// Deterministic shortest-roundtrip double formatting so identical runs
// produce byte-identical files.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    double back = std::strtod(buf, nullptr);
    if (back == v) {
        for (int prec = 1; prec <= 16; ++prec) {
            char s[40];
            std::snprintf(s, sizeof s, "%.*g", prec, v);
            if (std::strtod(s, nullptr) == v) return s;
        }
    }
    return buf;
}

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::string& config_hash,
              const std::vector<std::string>& columns)
        : out_(path) {
        if (!out_) throw std::runtime_error("cannot open " + path);
        out_ << "# config=" << config_hash << " version=" << artifact_version << "\n";
        for (std::size_t i = 0; i < columns.size(); ++i)
            out_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
    }

    void field(const std::string& v) { cells_.push_back(v); }
    void field(double v) { cells_.push_back(format_double(v)); }
    void field(int v) { cells_.push_back(std::to_string(v)); }
    void field(long v) { cells_.push_back(std::to_string(v)); }
    void field(unsigned long v) { cells_.push_back(std::to_string(v)); }

    void end_row() {
        for (std::size_t i = 0; i < cells_.size(); ++i)
            out_ << cells_[i] << (i + 1 < cells_.size() ? "," : "\n");
        cells_.clear();
    }

    void flush() { out_.flush(); }

private:
    std::ofstream out_;
    std::vector<std::string> cells_;
};

struct CsvTable {
    std::string config_hash;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return static_cast<int>(i);
        return -1;
    }
    int require_column(const std::string& name) const {
        int c = column(name);
        if (c < 0) throw std::runtime_error("csv is missing required column: " + name);
        return c;
    }
    double num(std::size_t row, int col) const { return std::strtod(rows[row][col].c_str(), nullptr); }
};

inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    CsvTable t;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto pos = line.find("config=");
            if (pos != std::string::npos) {
                auto end = line.find(' ', pos);
                t.config_hash = line.substr(pos + 7, end - pos - 7);
            }
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!have_header) {
            t.columns = std::move(cells);
            have_header = true;
        } else {
            t.rows.push_back(std::move(cells));
        }
    }
    return t;
}

}  // namespace megn

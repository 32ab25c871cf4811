#include "pinvminres/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pinvminres {

namespace {

std::string join(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
    }
    return out;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

void check_cell(const std::string& s) {
    if (s.find_first_of(",\n\r") != std::string::npos) throw std::invalid_argument("CSV cell contains a separator: " + s);
}

}  // namespace

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
    for (const auto& c : columns_) check_cell(c);
}

void CsvTable::set_config(const std::string& key, const std::string& value) {
    if (key.find_first_of("=\n") != std::string::npos || value.find('\n') != std::string::npos)
        throw std::invalid_argument("bad config entry " + key);
    for (auto& kv : config_)
        if (kv.first == key) {
            kv.second = value;
            return;
        }
    config_.emplace_back(key, value);
}

void CsvTable::add_row(std::vector<std::string> cells) {
    if (cells.size() != columns_.size())
        throw std::invalid_argument("row has " + std::to_string(cells.size()) + " cells, expected " +
                                    std::to_string(columns_.size()));
    for (const auto& c : cells) check_cell(c);
    rows_.push_back(std::move(cells));
}

std::string CsvTable::config_value(const std::string& key) const {
    for (const auto& kv : config_)
        if (kv.first == key) return kv.second;
    throw std::out_of_range("no config entry " + key);
}

const std::string& CsvTable::cell(std::size_t row, const std::string& column) const {
    for (std::size_t j = 0; j < columns_.size(); ++j)
        if (columns_[j] == column) return rows_.at(row).at(j);
    throw std::out_of_range("no column " + column);
}

std::string CsvTable::str() const {
    std::string out = std::string(csv_version_line) + "\n";
    for (const auto& kv : config_) out += "# " + kv.first + "=" + kv.second + "\n";
    out += join(columns_) + "\n";
    for (const auto& r : rows_) out += join(r) + "\n";
    return out;
}

void CsvTable::write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << str();
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

std::string CsvTable::num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string CsvTable::num(long long v) { return std::to_string(v); }

CsvTable parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != csv_version_line) throw std::invalid_argument("missing CSV version line");
    CsvTable t;
    std::vector<std::pair<std::string, std::string>> config;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!have_header && line.rfind("# ", 0) == 0) {
            const auto eq = line.find('=');
            if (eq == std::string::npos) throw std::invalid_argument("bad config line: " + line);
            config.emplace_back(line.substr(2, eq - 2), line.substr(eq + 1));
        } else if (!have_header) {
            t = CsvTable(split(line));
            have_header = true;
        } else if (!line.empty()) {
            t.add_row(split(line));
        }
    }
    if (!have_header) throw std::invalid_argument("missing CSV column header");
    for (auto& kv : config) t.set_config(kv.first, kv.second);
    return t;
}

}  // namespace pinvminres

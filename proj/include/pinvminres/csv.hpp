#pragma once

#include <map>
#include <string>
#include <vector>

namespace pinvminres {

inline constexpr const char* csv_version_line = "pinv-minres-csv v1";

// Versioned CSV: the version line, "# key=value" config lines in insertion
// order, the column header, then rows. Numbers are written with %.17g so a
// rerun with the same seed reproduces the file byte for byte.
class CsvTable {
public:
    CsvTable() = default;
    explicit CsvTable(std::vector<std::string> columns);

    void set_config(const std::string& key, const std::string& value);
    void add_row(std::vector<std::string> cells);

    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<std::vector<std::string>>& rows() const { return rows_; }
    const std::vector<std::pair<std::string, std::string>>& config() const { return config_; }
    std::string config_value(const std::string& key) const;
    // cell of the named column
    const std::string& cell(std::size_t row, const std::string& column) const;

    std::string str() const;
    void write(const std::string& path) const;

    static std::string num(double v);
    static std::string num(long long v);

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
    std::vector<std::pair<std::string, std::string>> config_;
};

CsvTable parse_csv(const std::string& text);

}  // namespace pinvminres

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace subdiff::output {

// Shortest decimal string that parses back to exactly the same double.
// Keeps CSV/JSON goldens stable across platforms and never loses precision.
std::string format_double(double v);

// RFC-4180-ish quoting: only fields containing a comma, quote, or newline
// are wrapped (with embedded quotes doubled).
std::string csv_quote(const std::string& raw);

// Small CSV assembler; numeric cells go through format_double.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    void add_row(std::vector<std::string> cells);
    std::size_t rows() const { return rows_.size(); }
    std::string str() const;

    static std::string cell(double v) { return format_double(v); }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

// Two-column (x, y) rows separated by a single space: gnuplot's native diet.
std::string dat_series(std::span<const double> x, std::span<const double> y);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

// Append one run record to ledger.csv, creating it with a header first time.
// The timestamp column is the only wall-clock value any run writes, so every
// other artifact stays byte-identical across repeated runs.
void append_ledger(const std::filesystem::path& ledger_path, const std::string& scenario_id,
                   const std::string& subcommand, const std::string& input_hash,
                   const std::string& key_outputs, const std::vector<std::string>& artifacts);

} // namespace subdiff::output

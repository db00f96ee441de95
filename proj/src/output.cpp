#include "subdiff/output.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "subdiff/errors.hpp"

namespace subdiff::output {

std::string format_double(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{})
        throw Error("number formatting failed");
    return std::string(buf, ptr);
}

std::string csv_quote(const std::string& raw)
{
    if (raw.find_first_of(",\"\n") == std::string::npos)
        return raw;
    std::string out = "\"";
    for (const char c : raw) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<std::string> cells)
{
    if (cells.size() != header_.size())
        throw GridMismatch("csv row width " + std::to_string(cells.size()) +
                           " does not match header width " + std::to_string(header_.size()));
    rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const
{
    std::string out;
    auto emit = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i)
                out += ',';
            out += csv_quote(cells[i]);
        }
        out += '\n';
    };
    emit(header_);
    for (const auto& row : rows_)
        emit(row);
    return out;
}

std::string dat_series(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size())
        throw GridMismatch("dat series needs matching x/y lengths");
    std::string out;
    for (std::size_t i = 0; i < x.size(); ++i)
        out += format_double(x[i]) + " " + format_double(y[i]) + "\n";
    return out;
}

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(path.string() + ": cannot open for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(path.string() + ": cannot open for writing");
    out << content;
    if (!out)
        throw Error(path.string() + ": write failed");
}

namespace {

std::string utc_timestamp()
{
    const auto now = std::chrono::system_clock::now();
    const std::time_t secs = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&secs, &tm);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
    return buf;
}

} // namespace

void append_ledger(const std::filesystem::path& ledger_path, const std::string& scenario_id,
                   const std::string& subcommand, const std::string& input_hash,
                   const std::string& key_outputs, const std::vector<std::string>& artifacts)
{
    if (ledger_path.has_parent_path())
        std::filesystem::create_directories(ledger_path.parent_path());
    const bool fresh = !std::filesystem::exists(ledger_path);
    std::ofstream out(ledger_path, std::ios::binary | std::ios::app);
    if (!out)
        throw Error(ledger_path.string() + ": cannot open ledger for appending");
    if (fresh)
        out << "scenario,timestamp,subcommand,input_hash,key_outputs,artifacts\n";
    std::string joined;
    for (std::size_t i = 0; i < artifacts.size(); ++i) {
        if (i)
            joined += ';';
        joined += artifacts[i];
    }
    out << csv_quote(scenario_id) << ',' << utc_timestamp() << ',' << csv_quote(subcommand)
        << ',' << csv_quote(input_hash) << ',' << csv_quote(key_outputs) << ','
        << csv_quote(joined) << '\n';
}

} // namespace subdiff::output

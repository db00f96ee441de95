#include "subdiff/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "subdiff/errors.hpp"
#include "subdiff/output.hpp"

namespace subdiff::config {

namespace {

std::string trim(const std::string& s)
{
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return s.substr(b, e - b);
}

bool parse_full_double(const std::string& token, double& out)
{
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

// Canonical value: split on commas, re-render numeric tokens in shortest
// round-trip form, join with ", ".  Non-numeric tokens pass through trimmed.
std::string canonical_value(const std::string& raw)
{
    std::string out;
    std::size_t start = 0;
    bool first = true;
    while (start <= raw.size()) {
        const std::size_t comma = raw.find(',', start);
        const std::string token =
            trim(raw.substr(start, comma == std::string::npos ? std::string::npos
                                                              : comma - start));
        if (!first)
            out += ", ";
        double v = 0.0;
        if (parse_full_double(token, v))
            out += output::format_double(v);
        else
            out += token;
        first = false;
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    return out;
}

[[noreturn]] void syntax_error(const std::string& source, int line, const std::string& message)
{
    std::ostringstream os;
    os << source << ":" << line << ": " << message;
    throw ConfigError(os.str());
}

} // namespace

Config Config::parse(const std::string& text, const std::string& source_name)
{
    Config cfg;
    cfg.source_ = source_name;

    std::istringstream stream(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(stream, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line.front() == '#' || line.front() == ';')
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                syntax_error(source_name, line_no, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                syntax_error(source_name, line_no, "empty section name");
            cfg.sections_[section]; // created on sight, even if left empty
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            syntax_error(source_name, line_no, "expected `key = value` or a [section] header");
        if (section.empty())
            syntax_error(source_name, line_no, "key outside of any [section]");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            syntax_error(source_name, line_no, "empty key");
        auto& sec = cfg.sections_[section];
        if (sec.count(key))
            syntax_error(source_name, line_no,
                         "duplicate key `" + key + "` in [" + section + "] (first set on line " +
                             std::to_string(sec[key].line) + ")");
        sec[key] = Entry{value, line_no};
    }
    return cfg;
}

Config Config::parse_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError(path + ": cannot open configuration file");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str(), path);
}

const Entry* Config::find(const std::string& section, const std::string& key) const
{
    const auto sec = sections_.find(section);
    if (sec == sections_.end())
        return nullptr;
    const auto it = sec->second.find(key);
    return it == sec->second.end() ? nullptr : &it->second;
}

const Entry& Config::require(const std::string& section, const std::string& key) const
{
    const Entry* entry = find(section, key);
    if (!entry) {
        std::ostringstream os;
        os << source_ << ": missing required field `" << key << "` in [" << section << "]";
        throw ConfigError(os.str());
    }
    return *entry;
}

bool Config::has_section(const std::string& section) const
{
    return sections_.count(section) != 0;
}

bool Config::has(const std::string& section, const std::string& key) const
{
    return find(section, key) != nullptr;
}

void Config::fail(const std::string& section, const std::string& key,
                  const std::string& message) const
{
    std::ostringstream os;
    os << source_;
    if (const Entry* entry = find(section, key))
        os << ":" << entry->line;
    os << ": [" << section << "] " << key << ": " << message;
    throw ConfigError(os.str());
}

std::string Config::get_string(const std::string& section, const std::string& key) const
{
    return require(section, key).value;
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::string& fallback) const
{
    const Entry* entry = find(section, key);
    return entry ? entry->value : fallback;
}

double Config::get_double(const std::string& section, const std::string& key) const
{
    const Entry& entry = require(section, key);
    double v = 0.0;
    if (!parse_full_double(entry.value, v))
        fail(section, key, "expected a number, got `" + entry.value + "`");
    return v;
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const
{
    return has(section, key) ? get_double(section, key) : fallback;
}

long Config::get_int(const std::string& section, const std::string& key) const
{
    const Entry& entry = require(section, key);
    long v = 0;
    const char* first = entry.value.data();
    const char* last = first + entry.value.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
        fail(section, key, "expected an integer, got `" + entry.value + "`");
    return v;
}

long Config::get_int(const std::string& section, const std::string& key, long fallback) const
{
    return has(section, key) ? get_int(section, key) : fallback;
}

bool Config::get_bool(const std::string& section, const std::string& key) const
{
    const Entry& entry = require(section, key);
    if (entry.value == "true" || entry.value == "yes" || entry.value == "on" ||
        entry.value == "1")
        return true;
    if (entry.value == "false" || entry.value == "no" || entry.value == "off" ||
        entry.value == "0")
        return false;
    fail(section, key, "expected a boolean (true/false), got `" + entry.value + "`");
}

bool Config::get_bool(const std::string& section, const std::string& key, bool fallback) const
{
    return has(section, key) ? get_bool(section, key) : fallback;
}

std::vector<double> Config::get_double_list(const std::string& section,
                                            const std::string& key) const
{
    const Entry& entry = require(section, key);
    std::vector<double> out;
    std::size_t start = 0;
    const std::string& raw = entry.value;
    while (start <= raw.size()) {
        const std::size_t comma = raw.find(',', start);
        const std::string token =
            trim(raw.substr(start, comma == std::string::npos ? std::string::npos
                                                              : comma - start));
        double v = 0.0;
        if (!parse_full_double(token, v))
            fail(section, key, "expected a comma-separated list of numbers, got `" + raw + "`");
        out.push_back(v);
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    return out;
}

std::string Config::normalized() const
{
    std::string out;
    bool first = true;
    for (const auto& [name, entries] : sections_) {
        if (!first)
            out += "\n";
        first = false;
        out += "[" + name + "]\n";
        for (const auto& [key, entry] : entries)
            out += key + " = " + canonical_value(entry.value) + "\n";
    }
    return out;
}

std::uint64_t Config::input_hash() const
{
    // FNV-1a, 64-bit, over the canonical rendering
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const char c : normalized()) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string Config::input_hash_hex() const
{
    static const char digits[] = "0123456789abcdef";
    std::uint64_t h = input_hash();
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

} // namespace subdiff::config

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace subdiff::config {

// One key = value entry plus the line it came from, kept for diagnostics.
struct Entry {
    std::string value;
    int line = 0;
};

// INI-style scenario file: [section] headers over key = value lines, with
// full-line comments starting with '#' or ';'.  Duplicate sections merge;
// redefining a key inside one section is an error (silent last-wins makes
// hash-stable configs too easy to fool).
//
// normalized() renders a canonical form -- sections and keys sorted, numeric
// tokens re-printed in shortest round-trip decimal, single spacing -- such
// that parse(normalized()) yields the same canonical form again.  The input
// hash is computed over exactly that text, so formatting, comments, and key
// order never influence it.
class Config {
public:
    static Config parse(const std::string& text, const std::string& source_name = "<string>");
    static Config parse_file(const std::string& path);

    bool has_section(const std::string& section) const;
    bool has(const std::string& section, const std::string& key) const;

    // Required lookups; a missing or malformed field raises ConfigError
    // naming the source, line (when known), section, and key.
    std::string get_string(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key) const;
    long get_int(const std::string& section, const std::string& key) const;
    bool get_bool(const std::string& section, const std::string& key) const;
    std::vector<double> get_double_list(const std::string& section, const std::string& key) const;

    // Defaulted lookups: absent key yields the fallback, present-but-broken
    // still raises.
    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    long get_int(const std::string& section, const std::string& key, long fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;

    // Raise ConfigError for `section.key` with this message, citing the
    // key's line when it exists.  Used by callers for semantic checks
    // (bounds, file existence) so diagnostics stay uniform.
    [[noreturn]] void fail(const std::string& section, const std::string& key,
                           const std::string& message) const;

    std::string normalized() const;
    std::uint64_t input_hash() const;
    std::string input_hash_hex() const; // 16 lowercase hex digits

    const std::string& source() const { return source_; }

private:
    std::string source_ = "<string>";
    std::map<std::string, std::map<std::string, Entry>> sections_;

    const Entry* find(const std::string& section, const std::string& key) const;
    const Entry& require(const std::string& section, const std::string& key) const;
};

} // namespace subdiff::config

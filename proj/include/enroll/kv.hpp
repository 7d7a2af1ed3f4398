#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace enroll::kv {

// Flat `key = value` document. One entry per line, `#` starts a comment line,
// keys are unique and keep their file order. Values run to end of line and are
// trimmed; everything after the first `=` belongs to the value.
class Document {
public:
    Document() = default;

    static Document parse(std::string_view text, std::string_view origin = "<memory>");
    static Document load(const std::string& path);

    void set(std::string key, std::string value);
    void set(std::string key, double value);
    void set(std::string key, std::int64_t value);
    void set(std::string key, bool value);

    bool contains(std::string_view key) const;
    std::optional<std::string> find(std::string_view key) const;

    std::string get(std::string_view key) const;
    std::string get_or(std::string_view key, std::string fallback) const;
    double get_double(std::string_view key) const;
    double get_double_or(std::string_view key, double fallback) const;
    std::int64_t get_int(std::string_view key) const;
    std::int64_t get_int_or(std::string_view key, std::int64_t fallback) const;
    bool get_bool(std::string_view key) const;
    bool get_bool_or(std::string_view key, bool fallback) const;

    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

    std::string serialize() const;
    void save(const std::string& path) const;

private:
    std::vector<std::pair<std::string, std::string>> entries_;
    std::string origin_ = "<memory>";
};

// Shortest decimal text that parses back to the identical double.
std::string format_double(double value);
std::optional<double> parse_double(std::string_view text);
std::optional<std::int64_t> parse_int(std::string_view text);
std::optional<bool> parse_bool(std::string_view text);

// Comma-separated list, each item trimmed; empty text yields an empty list.
std::vector<std::string> split_list(std::string_view text, char sep = ',');
std::string join_list(const std::vector<std::string>& items, std::string_view sep = ", ");

std::string_view trim(std::string_view text);

} // namespace enroll::kv

#include "enroll/kv.hpp"

#include "enroll/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace enroll::kv {

std::string_view trim(std::string_view text)
{
    auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
    while (!text.empty() && is_space(text.front()))
        text.remove_prefix(1);
    while (!text.empty() && is_space(text.back()))
        text.remove_suffix(1);
    return text;
}

std::string format_double(double value)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

std::optional<double> parse_double(std::string_view text)
{
    text = trim(text);
    if (text.empty())
        return std::nullopt;
    if (text.front() == '+')
        text.remove_prefix(1);
    double value = 0.0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        return std::nullopt;
    return value;
}

std::optional<std::int64_t> parse_int(std::string_view text)
{
    text = trim(text);
    if (text.empty())
        return std::nullopt;
    if (text.front() == '+')
        text.remove_prefix(1);
    std::int64_t value = 0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        return std::nullopt;
    return value;
}

std::optional<bool> parse_bool(std::string_view text)
{
    std::string lower(trim(text));
    std::transform(lower.begin(), lower.end(), lower.begin(),
        [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "true" || lower == "yes" || lower == "1" || lower == "on")
        return true;
    if (lower == "false" || lower == "no" || lower == "0" || lower == "off")
        return false;
    return std::nullopt;
}

std::vector<std::string> split_list(std::string_view text, char sep)
{
    std::vector<std::string> out;
    text = trim(text);
    if (text.empty())
        return out;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        out.emplace_back(trim(text.substr(start, pos - start)));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

std::string join_list(const std::vector<std::string>& items, std::string_view sep)
{
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i)
            out += sep;
        out += items[i];
    }
    return out;
}

Document Document::parse(std::string_view text, std::string_view origin)
{
    Document doc;
    doc.origin_ = std::string(origin);
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos)
            end = text.size();
        ++line_no;
        auto line = trim(text.substr(start, end - start));
        start = end + 1;
        if (line.empty() || line.front() == '#') {
            if (end == text.size())
                break;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw Error(ErrorCode::Config,
                doc.origin_ + ":" + std::to_string(line_no) + ": expected 'key = value'");
        std::string key(trim(line.substr(0, eq)));
        if (key.empty())
            throw Error(ErrorCode::Config, doc.origin_ + ":" + std::to_string(line_no) + ": empty key");
        if (doc.contains(key))
            throw Error(ErrorCode::Config,
                doc.origin_ + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
        doc.entries_.emplace_back(std::move(key), std::string(trim(line.substr(eq + 1))));
        if (end == text.size())
            break;
    }
    return doc;
}

Document Document::load(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::Io, "cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

void Document::set(std::string key, std::string value)
{
    for (auto& [k, v] : entries_) {
        if (k == key) {
            v = std::move(value);
            return;
        }
    }
    entries_.emplace_back(std::move(key), std::move(value));
}

void Document::set(std::string key, double value) { set(std::move(key), format_double(value)); }
void Document::set(std::string key, std::int64_t value) { set(std::move(key), std::to_string(value)); }
void Document::set(std::string key, bool value) { set(std::move(key), std::string(value ? "true" : "false")); }

bool Document::contains(std::string_view key) const { return find(key).has_value(); }

std::optional<std::string> Document::find(std::string_view key) const
{
    for (const auto& [k, v] : entries_)
        if (k == key)
            return v;
    return std::nullopt;
}

std::string Document::get(std::string_view key) const
{
    auto v = find(key);
    if (!v)
        throw Error(ErrorCode::Config, origin_ + ": missing key '" + std::string(key) + "'");
    return *v;
}

std::string Document::get_or(std::string_view key, std::string fallback) const
{
    auto v = find(key);
    return v ? *v : std::move(fallback);
}

double Document::get_double(std::string_view key) const
{
    auto v = parse_double(get(key));
    if (!v)
        throw Error(ErrorCode::Config, origin_ + ": key '" + std::string(key) + "' is not a number");
    return *v;
}

double Document::get_double_or(std::string_view key, double fallback) const
{
    return contains(key) ? get_double(key) : fallback;
}

std::int64_t Document::get_int(std::string_view key) const
{
    auto v = parse_int(get(key));
    if (!v)
        throw Error(ErrorCode::Config, origin_ + ": key '" + std::string(key) + "' is not an integer");
    return *v;
}

std::int64_t Document::get_int_or(std::string_view key, std::int64_t fallback) const
{
    return contains(key) ? get_int(key) : fallback;
}

bool Document::get_bool(std::string_view key) const
{
    auto v = parse_bool(get(key));
    if (!v)
        throw Error(ErrorCode::Config, origin_ + ": key '" + std::string(key) + "' is not a boolean");
    return *v;
}

bool Document::get_bool_or(std::string_view key, bool fallback) const
{
    return contains(key) ? get_bool(key) : fallback;
}

std::string Document::serialize() const
{
    std::string out;
    for (const auto& [k, v] : entries_) {
        out += k;
        out += " = ";
        out += v;
        out += '\n';
    }
    return out;
}

void Document::save(const std::string& path) const
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorCode::Io, "cannot write '" + path + "'");
    out << serialize();
}

} // namespace enroll::kv

#include "byzgrad/toml_lite.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "byzgrad/errors.hpp"

namespace byzgrad::toml {

namespace {

[[noreturn]] void fail(int line, const std::string& what) {
    throw config_invalid_error("config line " + std::to_string(line) + ": " + what);
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// comment starts at the first # outside a string
std::string strip_comment(const std::string& s) {
    bool in_str = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        if (in_str) {
            if (c == '\\' && i + 1 < s.size())
                ++i;
            else if (c == '"')
                in_str = false;
        } else if (c == '"') {
            in_str = true;
        } else if (c == '#') {
            return s.substr(0, i);
        }
    }
    return s;
}

bool valid_key(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' && c != '.')
            return false;
    return s.front() != '.' && s.back() != '.' && s.find("..") == std::string::npos;
}

std::string parse_string_literal(const std::string& s, int line) {
    if (s.size() < 2 || s.front() != '"' || s.back() != '"') fail(line, "bad string literal");
    std::string out;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        char c = s[i];
        if (c == '"') fail(line, "unescaped quote inside string");
        if (c == '\\') {
            if (i + 2 >= s.size()) fail(line, "dangling escape");
            c = s[++i];
            switch (c) {
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                case '"': out += '"'; break;
                case '\\': out += '\\'; break;
                default: fail(line, "unsupported escape");
            }
        } else {
            out += c;
        }
    }
    return out;
}

// split a flat [a, b, c] body on top-level commas
std::vector<std::string> split_array_body(const std::string& body, int line) {
    std::vector<std::string> parts;
    std::string cur;
    bool in_str = false;
    for (std::size_t i = 0; i < body.size(); ++i) {
        const char c = body[i];
        if (in_str) {
            cur += c;
            if (c == '\\' && i + 1 < body.size())
                cur += body[++i];
            else if (c == '"')
                in_str = false;
        } else if (c == '"') {
            cur += c;
            in_str = true;
        } else if (c == '[') {
            fail(line, "nested arrays are not supported");
        } else if (c == ',') {
            parts.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (in_str) fail(line, "unterminated string");
    const std::string last = trim(cur);
    if (!last.empty()) parts.push_back(last);
    for (const auto& p : parts)
        if (p.empty()) fail(line, "empty array element");
    return parts;
}

Value parse_scalar(const std::string& raw, int line) {
    Value v;
    if (!raw.empty() && raw.front() == '"') {
        v.kind = Value::Kind::string;
        v.str = parse_string_literal(raw, line);
        return v;
    }
    if (raw == "true" || raw == "false") {
        v.kind = Value::Kind::boolean;
        v.flag = raw == "true";
        return v;
    }
    std::string digits = raw;
    digits.erase(std::remove(digits.begin(), digits.end(), '_'), digits.end());
    char* end = nullptr;
    const double num = std::strtod(digits.c_str(), &end);
    if (end == digits.c_str() || *end != '\0' || !std::isfinite(num))
        fail(line, "cannot parse value: " + raw);
    v.kind = Value::Kind::number;
    v.num = num;
    return v;
}

Value parse_value(const std::string& raw, int line) {
    if (!raw.empty() && raw.front() == '[') {
        if (raw.back() != ']') fail(line, "unterminated array");
        Value v;
        v.kind = Value::Kind::array;
        for (const auto& part : split_array_body(raw.substr(1, raw.size() - 2), line))
            v.items.push_back(parse_scalar(part, line));
        return v;
    }
    return parse_scalar(raw, line);
}

}  // namespace

const std::string& Value::as_string(const std::string& key) const {
    if (kind != Kind::string) throw config_invalid_error(key + " must be a string");
    return str;
}

double Value::as_double(const std::string& key) const {
    if (kind != Kind::number) throw config_invalid_error(key + " must be a number");
    return num;
}

long long Value::as_int(const std::string& key) const {
    const double d = as_double(key);
    const long long i = static_cast<long long>(std::llround(d));
    if (static_cast<double>(i) != d) throw config_invalid_error(key + " must be an integer");
    return i;
}

bool Value::as_bool(const std::string& key) const {
    if (kind != Kind::boolean) throw config_invalid_error(key + " must be a boolean");
    return flag;
}

std::vector<double> Value::as_double_array(const std::string& key) const {
    if (kind != Kind::array) throw config_invalid_error(key + " must be an array");
    std::vector<double> out;
    for (const auto& item : items) out.push_back(item.as_double(key + " element"));
    return out;
}

const Value& Table::get(const std::string& key) const {
    auto it = values.find(key);
    if (it == values.end()) throw config_invalid_error("missing config key: " + key);
    return it->second;
}

std::string Table::get_string(const std::string& key) const { return get(key).as_string(key); }

double Table::get_double(const std::string& key, double fallback) const {
    return has(key) ? get(key).as_double(key) : fallback;
}

long long Table::get_int(const std::string& key, long long fallback) const {
    return has(key) ? get(key).as_int(key) : fallback;
}

bool Table::get_bool(const std::string& key, bool fallback) const {
    return has(key) ? get(key).as_bool(key) : fallback;
}

std::vector<std::string> Table::keys_under(const std::string& prefix) const {
    std::vector<std::string> out;
    const std::string p = prefix + ".";
    for (const auto& [k, v] : values)
        if (k.size() > p.size() && k.compare(0, p.size(), p) == 0) out.push_back(k.substr(p.size()));
    return out;
}

Table parse_toml(const std::string& text) {
    Table t;
    std::istringstream in(text);
    std::string raw;
    std::string prefix;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string s = trim(strip_comment(raw));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') fail(line, "unterminated table header");
            prefix = trim(s.substr(1, s.size() - 2));
            if (!valid_key(prefix)) fail(line, "bad table name: " + prefix);
            continue;
        }
        bool in_str = false;
        std::size_t eq = std::string::npos;
        for (std::size_t i = 0; i < s.size() && eq == std::string::npos; ++i) {
            if (s[i] == '"') in_str = !in_str;
            if (s[i] == '=' && !in_str) eq = i;
        }
        if (eq == std::string::npos) fail(line, "expected key = value");
        const std::string key = trim(s.substr(0, eq));
        const std::string rhs = trim(s.substr(eq + 1));
        if (!valid_key(key)) fail(line, "bad key: " + key);
        if (rhs.empty()) fail(line, "missing value for " + key);
        const std::string full = prefix.empty() ? key : prefix + "." + key;
        if (t.values.count(full)) fail(line, "duplicate key: " + full);
        t.values.emplace(full, parse_value(rhs, line));
    }
    return t;
}

Table load_toml(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw io_error("cannot open config: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_toml(ss.str());
}

void set_value(Table& t, const std::string& dotted_key, const std::string& raw) {
    if (!valid_key(dotted_key)) throw config_invalid_error("bad override key: " + dotted_key);
    const std::string rhs = trim(raw);
    if (rhs.empty()) throw config_invalid_error("empty override value for " + dotted_key);
    t.values[dotted_key] = parse_value(rhs, 0);
}

}  // namespace byzgrad::toml

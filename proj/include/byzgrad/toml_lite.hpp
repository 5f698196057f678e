#pragma once

#include <map>
#include <string>
#include <vector>

namespace byzgrad::toml {

// the slice of toml the experiment configs use: [section.sub] headers, bare
// keys, strings, numbers, booleans, and single-line flat arrays. everything is
// flattened to dotted keys ("run.T")
struct Value {
    enum class Kind { string, number, boolean, array };
    Kind kind = Kind::string;
    std::string str;
    double num = 0.0;
    bool flag = false;
    std::vector<Value> items;

    const std::string& as_string(const std::string& key) const;
    double as_double(const std::string& key) const;
    long long as_int(const std::string& key) const;
    bool as_bool(const std::string& key) const;
    std::vector<double> as_double_array(const std::string& key) const;
};

struct Table {
    std::map<std::string, Value> values;

    bool has(const std::string& key) const { return values.count(key) != 0; }
    const Value& get(const std::string& key) const;
    std::string get_string(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    long long get_int(const std::string& key, long long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    // dotted keys strictly under `prefix.`, with the prefix stripped
    std::vector<std::string> keys_under(const std::string& prefix) const;
};

Table parse_toml(const std::string& text);
Table load_toml(const std::string& path);

// parses raw as a toml scalar or array and stores it; used by sweep overrides
void set_value(Table& t, const std::string& dotted_key, const std::string& raw);

}  // namespace byzgrad::toml

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace mfg::toml {

// Minimal TOML reader covering what the experiment configs use: [section]
// headers, key = value pairs with strings, integers, floats, booleans, and
// flat arrays of those, plus comments. Keys flatten to "section.key".
// Everything outside that subset is a ConfigError with a line number.

struct Value {
    std::variant<std::string, std::int64_t, double, bool, std::vector<Value>> data;
    int line = 0;

    bool is_string() const { return std::holds_alternative<std::string>(data); }
    bool is_int() const { return std::holds_alternative<std::int64_t>(data); }
    bool is_float() const { return std::holds_alternative<double>(data); }
    bool is_bool() const { return std::holds_alternative<bool>(data); }
    bool is_array() const { return std::holds_alternative<std::vector<Value>>(data); }
};

using Table = std::map<std::string, Value>;

Table parse(const std::string& text);

// Typed accessors. The require_* forms throw ConfigError naming the key;
// get_* fall back to the provided default. Integers coerce to double where a
// float is requested.
std::string require_string(const Table& t, const std::string& key);
std::int64_t require_int(const Table& t, const std::string& key);
double require_double(const Table& t, const std::string& key);
bool require_bool(const Table& t, const std::string& key);
std::string get_string(const Table& t, const std::string& key, const std::string& fallback);
std::int64_t get_int(const Table& t, const std::string& key, std::int64_t fallback);
double get_double(const Table& t, const std::string& key, double fallback);
bool get_bool(const Table& t, const std::string& key, bool fallback);
std::vector<double> get_double_array(const Table& t, const std::string& key);
bool has_key(const Table& t, const std::string& key);

} // namespace mfg::toml

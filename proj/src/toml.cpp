#include "mfg/toml.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

#include "mfg/errors.hpp"

namespace mfg::toml {

namespace {

[[noreturn]] void fail(int line, const std::string& what) {
    throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

struct Cursor {
    const std::string& s;
    std::size_t pos = 0;
    int line;

    bool done() const { return pos >= s.size(); }
    char peek() const { return s[pos]; }
    void skip_ws() {
        while (!done() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    }
};

bool is_bare_key_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '-';
}

std::string parse_basic_string(Cursor& c) {
    ++c.pos; // opening quote
    std::string out;
    while (true) {
        if (c.done()) fail(c.line, "unterminated string");
        const char ch = c.s[c.pos++];
        if (ch == '"') return out;
        if (ch == '\\') {
            if (c.done()) fail(c.line, "dangling escape");
            const char esc = c.s[c.pos++];
            switch (esc) {
            case '"': out.push_back('"'); break;
            case '\\': out.push_back('\\'); break;
            case 'n': out.push_back('\n'); break;
            case 't': out.push_back('\t'); break;
            case 'r': out.push_back('\r'); break;
            default: fail(c.line, std::string("unsupported escape \\") + esc);
            }
        } else {
            out.push_back(ch);
        }
    }
}

Value parse_value(Cursor& c);

Value parse_array(Cursor& c) {
    ++c.pos; // '['
    std::vector<Value> items;
    while (true) {
        c.skip_ws();
        if (c.done()) fail(c.line, "unterminated array");
        if (c.peek() == ']') {
            ++c.pos;
            break;
        }
        items.push_back(parse_value(c));
        c.skip_ws();
        if (c.done()) fail(c.line, "unterminated array");
        if (c.peek() == ',') {
            ++c.pos;
            continue;
        }
        if (c.peek() == ']') {
            ++c.pos;
            break;
        }
        fail(c.line, "expected ',' or ']' in array");
    }
    Value v;
    v.data = std::move(items);
    v.line = c.line;
    return v;
}

Value parse_scalar(Cursor& c) {
    Value v;
    v.line = c.line;
    const std::size_t start = c.pos;
    while (!c.done() && c.peek() != ',' && c.peek() != ']' && c.peek() != '#' &&
           c.peek() != ' ' && c.peek() != '\t') {
        ++c.pos;
    }
    std::string token = c.s.substr(start, c.pos - start);
    if (token.empty()) fail(c.line, "missing value");
    if (token == "true") {
        v.data = true;
        return v;
    }
    if (token == "false") {
        v.data = false;
        return v;
    }
    // Try integer first, then float.
    {
        std::int64_t i = 0;
        const auto [p, ec] = std::from_chars(token.data(), token.data() + token.size(), i);
        if (ec == std::errc() && p == token.data() + token.size()) {
            v.data = i;
            return v;
        }
    }
    {
        double d = 0.0;
        const auto [p, ec] = std::from_chars(token.data(), token.data() + token.size(), d);
        if (ec == std::errc() && p == token.data() + token.size()) {
            v.data = d;
            return v;
        }
    }
    fail(c.line, "cannot parse value '" + token + "'");
}

Value parse_value(Cursor& c) {
    c.skip_ws();
    if (c.done()) fail(c.line, "missing value");
    if (c.peek() == '"') {
        Value v;
        v.line = c.line;
        v.data = parse_basic_string(c);
        return v;
    }
    if (c.peek() == '[') return parse_array(c);
    return parse_scalar(c);
}

} // namespace

Table parse(const std::string& text) {
    Table table;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        Cursor c{raw, 0, line_no};
        c.skip_ws();
        if (c.done() || c.peek() == '#') continue;

        if (c.peek() == '[') {
            const auto close = raw.find(']', c.pos);
            if (close == std::string::npos) fail(line_no, "unterminated section header");
            section = raw.substr(c.pos + 1, close - c.pos - 1);
            if (section.empty()) fail(line_no, "empty section name");
            for (char ch : section) {
                if (!is_bare_key_char(ch) && ch != '.') {
                    fail(line_no, "bad character in section name");
                }
            }
            c.pos = close + 1;
            c.skip_ws();
            if (!c.done() && c.peek() != '#') fail(line_no, "junk after section header");
            continue;
        }

        const std::size_t key_start = c.pos;
        while (!c.done() && is_bare_key_char(c.peek())) ++c.pos;
        const std::string key = raw.substr(key_start, c.pos - key_start);
        if (key.empty()) fail(line_no, "expected a key");
        c.skip_ws();
        if (c.done() || c.peek() != '=') fail(line_no, "expected '=' after key '" + key + "'");
        ++c.pos;
        Value v = parse_value(c);
        c.skip_ws();
        if (!c.done() && c.peek() != '#') fail(line_no, "junk after value for key '" + key + "'");

        const std::string full = section.empty() ? key : section + "." + key;
        if (table.contains(full)) fail(line_no, "duplicate key '" + full + "'");
        table.emplace(full, std::move(v));
    }
    return table;
}

namespace {

const Value& require(const Table& t, const std::string& key) {
    const auto it = t.find(key);
    if (it == t.end()) throw ConfigError("config: missing required key '" + key + "'");
    return it->second;
}

[[noreturn]] void type_fail(const std::string& key, const Value& v, const char* want) {
    throw ConfigError("config line " + std::to_string(v.line) + ": key '" + key + "' is not " +
                      want);
}

} // namespace

std::string require_string(const Table& t, const std::string& key) {
    const Value& v = require(t, key);
    if (!v.is_string()) type_fail(key, v, "a string");
    return std::get<std::string>(v.data);
}

std::int64_t require_int(const Table& t, const std::string& key) {
    const Value& v = require(t, key);
    if (!v.is_int()) type_fail(key, v, "an integer");
    return std::get<std::int64_t>(v.data);
}

double require_double(const Table& t, const std::string& key) {
    const Value& v = require(t, key);
    if (v.is_int()) return static_cast<double>(std::get<std::int64_t>(v.data));
    if (!v.is_float()) type_fail(key, v, "a number");
    return std::get<double>(v.data);
}

bool require_bool(const Table& t, const std::string& key) {
    const Value& v = require(t, key);
    if (!v.is_bool()) type_fail(key, v, "a boolean");
    return std::get<bool>(v.data);
}

std::string get_string(const Table& t, const std::string& key, const std::string& fallback) {
    return t.contains(key) ? require_string(t, key) : fallback;
}

std::int64_t get_int(const Table& t, const std::string& key, std::int64_t fallback) {
    return t.contains(key) ? require_int(t, key) : fallback;
}

double get_double(const Table& t, const std::string& key, double fallback) {
    return t.contains(key) ? require_double(t, key) : fallback;
}

bool get_bool(const Table& t, const std::string& key, bool fallback) {
    return t.contains(key) ? require_bool(t, key) : fallback;
}

std::vector<double> get_double_array(const Table& t, const std::string& key) {
    const auto it = t.find(key);
    if (it == t.end()) return {};
    if (!it->second.is_array()) type_fail(key, it->second, "an array");
    std::vector<double> out;
    for (const Value& v : std::get<std::vector<Value>>(it->second.data)) {
        if (v.is_int()) {
            out.push_back(static_cast<double>(std::get<std::int64_t>(v.data)));
        } else if (v.is_float()) {
            out.push_back(std::get<double>(v.data));
        } else {
            type_fail(key, v, "a numeric array");
        }
    }
    return out;
}

bool has_key(const Table& t, const std::string& key) { return t.contains(key); }

} // namespace mfg::toml

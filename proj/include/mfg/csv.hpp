#pragma once

#include <string>
#include <vector>

namespace mfg {

// Shortest decimal that round-trips the exact double (std::to_chars).
std::string format_double(double x);

// Writes content atomically-ish (temp file + rename), LF endings assumed in
// the content. Throws IoError.
void write_text_file(const std::string& path, const std::string& content);

std::string read_text_file(const std::string& path);

// Splits one CSV line on commas; no quoting (none of our payloads need it).
std::vector<std::string> split_csv_line(const std::string& line);

double parse_double(const std::string& field);

} // namespace mfg

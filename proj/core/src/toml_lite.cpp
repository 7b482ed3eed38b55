#include "toml_lite.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "ldslab/errors.hpp"
#include "text_util.hpp"

namespace ldslab::detail {

namespace {

[[noreturn]] void fail(int line_no, const std::string& what) {
  throw ParseError("config line " + std::to_string(line_no) + ": " + what);
}

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Removes a trailing comment, respecting double-quoted strings.
std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (c == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
    if (c == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

bool valid_key(const std::string& key) {
  if (key.empty()) return false;
  for (char c : key) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') return false;
  }
  return true;
}

TomlValue parse_value(const std::string& raw, int line_no) {
  TomlValue value;
  value.line = line_no;
  if (raw.empty()) fail(line_no, "missing value");
  if (raw.front() == '"') {
    if (raw.size() < 2 || raw.back() != '"') fail(line_no, "unterminated string");
    std::string out;
    for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
      if (raw[i] == '\\' && i + 2 < raw.size()) {
        const char next = raw[i + 1];
        if (next == '"' || next == '\\') {
          out.push_back(next);
          ++i;
          continue;
        }
      }
      if (raw[i] == '"') fail(line_no, "unescaped quote inside string");
      out.push_back(raw[i]);
    }
    value.kind = TomlValue::Kind::string;
    value.str = out;
    return value;
  }
  if (raw == "true" || raw == "false") {
    value.kind = TomlValue::Kind::boolean;
    value.boolean = raw == "true";
    return value;
  }
  long long integer = 0;
  if (parse_long(raw, integer)) {
    value.kind = TomlValue::Kind::integer;
    value.integer = integer;
    return value;
  }
  double floating = 0.0;
  if (parse_double(raw, floating)) {
    value.kind = TomlValue::Kind::floating;
    value.floating = floating;
    return value;
  }
  fail(line_no, "cannot parse value '" + raw + "'");
}

}  // namespace

TomlDoc parse_toml(const std::string& text) {
  TomlDoc doc;
  TomlTable* current = &doc.root;

  std::istringstream in(text);
  std::string raw_line;
  int line_no = 0;
  while (std::getline(in, raw_line)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw_line));
    if (line.empty()) continue;

    if (line.front() == '[') {
      const bool is_array = line.size() >= 2 && line[1] == '[';
      const std::string closer = is_array ? "]]" : "]";
      if (line.size() < 2 + closer.size() ||
          line.substr(line.size() - closer.size()) != closer) {
        fail(line_no, "malformed table header '" + line + "'");
      }
      const std::string name =
          trim(line.substr(is_array ? 2 : 1, line.size() - 2 * (is_array ? 2 : 1)));
      if (!valid_key(name)) fail(line_no, "invalid table name '" + name + "'");
      if (is_array) {
        auto& list = doc.arrays[name];
        list.emplace_back();
        list.back().line = line_no;
        current = &list.back();
      } else {
        if (doc.tables.contains(name)) fail(line_no, "table '" + name + "' redefined");
        auto& table = doc.tables[name];
        table.line = line_no;
        current = &table;
      }
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    const std::string raw_value = trim(line.substr(eq + 1));

    TomlTable* target = current;
    const std::size_t dot = key.find('.');
    if (dot != std::string::npos) {
      const std::string table_name = key.substr(0, dot);
      key = key.substr(dot + 1);
      if (!valid_key(table_name)) fail(line_no, "invalid table name '" + table_name + "'");
      if (current != &doc.root) fail(line_no, "dotted keys are only allowed at the top level");
      target = &doc.tables[table_name];
      if (target->line == 0) target->line = line_no;
    }
    if (!valid_key(key)) fail(line_no, "invalid key '" + key + "'");
    if (target->values.contains(key)) fail(line_no, "duplicate key '" + key + "'");
    target->values.emplace(key, parse_value(raw_value, line_no));
  }
  return doc;
}

TomlDoc parse_toml_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open config file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_toml(buffer.str());
}

}  // namespace ldslab::detail

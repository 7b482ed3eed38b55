#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ldslab::detail {

// Parser for the flat TOML subset the config format uses: top-level key/value
// pairs, [table] headers, [[array-of-table]] headers, single-level dotted keys,
// and string / integer / float / boolean values. Anything else is rejected.
struct TomlValue {
  enum class Kind { string, integer, floating, boolean };
  Kind kind = Kind::string;
  std::string str;
  std::int64_t integer = 0;
  double floating = 0.0;
  bool boolean = false;
  int line = 0;
};

struct TomlTable {
  std::map<std::string, TomlValue> values;
  int line = 0;
};

struct TomlDoc {
  TomlTable root;
  std::map<std::string, TomlTable> tables;
  std::map<std::string, std::vector<TomlTable>> arrays;
};

TomlDoc parse_toml(const std::string& text);
TomlDoc parse_toml_file(const std::string& path);

}  // namespace ldslab::detail

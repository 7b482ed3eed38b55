#include "ldslab/mps.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "text_util.hpp"

namespace ldslab {

namespace {

char sense_tag(RowSense sense) {
  switch (sense) {
    case RowSense::less_equal:
      return 'L';
    case RowSense::greater_equal:
      return 'G';
    case RowSense::equal:
      return 'E';
  }
  return 'L';
}

}  // namespace

std::string write_mps_string(const LpModel& model) {
  using detail::format_exact;
  std::ostringstream out;
  out << "NAME " << model.name << "\n";
  out << "ROWS\n";
  out << " N OBJ\n";
  for (const Row& row : model.rows()) {
    out << " " << sense_tag(row.sense) << " " << row.name << "\n";
  }

  // Column-major view of the row coefficients, insertion order preserved.
  std::vector<std::vector<std::pair<int, double>>> columns(model.num_vars());
  for (int r = 0; r < model.num_rows(); ++r) {
    for (const RowCoeff& c : model.row(r).coeffs) {
      columns[c.var].emplace_back(r, c.value);
    }
  }

  out << "COLUMNS\n";
  for (int j = 0; j < model.num_vars(); ++j) {
    const Variable& var = model.variable(j);
    out << " " << var.name << " OBJ " << format_exact(var.objective);
    for (const auto& [r, value] : columns[j]) {
      out << " " << model.row(r).name << " " << format_exact(value);
    }
    out << "\n";
  }

  out << "RHS\n";
  for (const Row& row : model.rows()) {
    if (row.rhs != 0.0) {
      out << " RHS " << row.name << " " << format_exact(row.rhs) << "\n";
    }
  }

  out << "BOUNDS\n";
  for (const Variable& var : model.variables()) {
    const bool lo_inf = std::isinf(var.lower) && var.lower < 0;
    const bool up_inf = std::isinf(var.upper) && var.upper > 0;
    if (var.lower == 0.0 && up_inf) continue;
    if (var.lower == var.upper) {
      out << " FX BND " << var.name << " " << format_exact(var.lower) << "\n";
      continue;
    }
    if (lo_inf && up_inf) {
      out << " FR BND " << var.name << "\n";
      continue;
    }
    if (lo_inf) {
      out << " MI BND " << var.name << "\n";
    } else if (var.lower != 0.0) {
      out << " LO BND " << var.name << " " << format_exact(var.lower) << "\n";
    }
    if (!up_inf) {
      out << " UP BND " << var.name << " " << format_exact(var.upper) << "\n";
    }
  }
  out << "ENDATA\n";
  return out.str();
}

void write_mps(const LpModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot open '" + path.string() + "' for writing");
  }
  out << write_mps_string(model);
  if (!out) {
    throw IoError("failed while writing '" + path.string() + "'");
  }
}

namespace {

struct ParsedBound {
  double lower = 0.0;
  double upper = kInfinity;
};

[[noreturn]] void fail(int line_no, const std::string& what) {
  throw ParseError("mps line " + std::to_string(line_no) + ": " + what);
}

double number_or_fail(std::string_view token, int line_no) {
  double value = 0.0;
  if (!detail::parse_double(token, value)) {
    fail(line_no, "expected a number, got '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

LpModel parse_mps_string(std::string_view text) {
  enum class Section { none, rows, columns, rhs, ranges, bounds, done };

  std::string model_name = "ldslab";
  std::string objective_row;
  std::vector<std::string> row_names;
  std::vector<RowSense> row_senses;
  std::map<std::string, int> row_lookup;

  std::vector<std::string> var_names;
  std::vector<double> var_obj;
  std::vector<std::vector<std::pair<int, double>>> var_coeffs;  // (row, value)
  std::map<std::string, int> var_lookup;
  std::vector<ParsedBound> bounds;
  std::vector<double> rhs_values;

  auto var_or_fail = [&](std::string_view name, int line_no) -> int {
    auto it = var_lookup.find(std::string(name));
    if (it == var_lookup.end()) fail(line_no, "unknown column '" + std::string(name) + "'");
    return it->second;
  };

  Section section = Section::none;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (end == text.size() && line.empty()) break;

    if (!line.empty() && line[0] == '*') continue;  // comment
    auto tokens = detail::split_whitespace(line);
    if (tokens.empty()) continue;

    const std::string_view head = tokens[0];
    // Section keywords start in column 1; data lines are indented, which
    // keeps row-set names like "RHS" unambiguous.
    const bool at_margin = line[0] != ' ' && line[0] != '\t';
    if (at_margin) {
      if (head == "NAME") {
        if (tokens.size() > 1) model_name = std::string(tokens[1]);
        continue;
      }
      if (head == "ROWS") {
        section = Section::rows;
        continue;
      }
      if (head == "COLUMNS") {
        section = Section::columns;
        continue;
      }
      if (head == "RHS") {
        section = Section::rhs;
        continue;
      }
      if (head == "RANGES") {
        section = Section::ranges;
        continue;
      }
      if (head == "BOUNDS") {
        section = Section::bounds;
        continue;
      }
      if (head == "ENDATA") {
        section = Section::done;
        break;
      }
      fail(line_no, "unknown section '" + std::string(head) + "'");
    }

    switch (section) {
      case Section::rows: {
        if (tokens.size() != 2) fail(line_no, "ROWS entries need a type and a name");
        const std::string name(tokens[1]);
        if (head == "N") {
          if (!objective_row.empty()) fail(line_no, "multiple N rows");
          objective_row = name;
          break;
        }
        RowSense sense;
        if (head == "L") {
          sense = RowSense::less_equal;
        } else if (head == "G") {
          sense = RowSense::greater_equal;
        } else if (head == "E") {
          sense = RowSense::equal;
        } else {
          fail(line_no, "unknown row type '" + std::string(head) + "'");
        }
        if (row_lookup.contains(name)) fail(line_no, "duplicate row '" + name + "'");
        row_lookup.emplace(name, static_cast<int>(row_names.size()));
        row_names.push_back(name);
        row_senses.push_back(sense);
        rhs_values.push_back(0.0);
        break;
      }
      case Section::columns: {
        if (tokens.size() < 3 || tokens.size() % 2 == 0) {
          fail(line_no, "COLUMNS entries need a column name and (row, value) pairs");
        }
        const std::string name(tokens[0]);
        int var;
        auto it = var_lookup.find(name);
        if (it == var_lookup.end()) {
          var = static_cast<int>(var_names.size());
          var_lookup.emplace(name, var);
          var_names.push_back(name);
          var_obj.push_back(0.0);
          var_coeffs.emplace_back();
          bounds.emplace_back();
        } else {
          var = it->second;
        }
        for (std::size_t i = 1; i + 1 < tokens.size(); i += 2) {
          const std::string row_name(tokens[i]);
          const double value = number_or_fail(tokens[i + 1], line_no);
          if (row_name == objective_row) {
            var_obj[var] += value;
            continue;
          }
          auto row_it = row_lookup.find(row_name);
          if (row_it == row_lookup.end()) fail(line_no, "unknown row '" + row_name + "'");
          var_coeffs[var].emplace_back(row_it->second, value);
        }
        break;
      }
      case Section::rhs: {
        if (tokens.size() < 3 || tokens.size() % 2 == 0) {
          fail(line_no, "RHS entries need a set name and (row, value) pairs");
        }
        for (std::size_t i = 1; i + 1 < tokens.size(); i += 2) {
          const std::string row_name(tokens[i]);
          const double value = number_or_fail(tokens[i + 1], line_no);
          if (row_name == objective_row) continue;  // objective offset unsupported
          auto row_it = row_lookup.find(row_name);
          if (row_it == row_lookup.end()) fail(line_no, "unknown row '" + row_name + "'");
          rhs_values[row_it->second] = value;
        }
        break;
      }
      case Section::ranges:
        fail(line_no, "RANGES section is not supported");
      case Section::bounds: {
        if (tokens.size() < 3) fail(line_no, "BOUNDS entries need a type, set and column");
        const int var = var_or_fail(tokens[2], line_no);
        ParsedBound& b = bounds[var];
        if (head == "FR") {
          b.lower = -kInfinity;
          b.upper = kInfinity;
        } else if (head == "MI") {
          b.lower = -kInfinity;
        } else if (head == "PL") {
          b.upper = kInfinity;
        } else if (head == "LO" || head == "UP" || head == "FX") {
          if (tokens.size() < 4) fail(line_no, "bound needs a value");
          const double value = number_or_fail(tokens[3], line_no);
          if (head == "LO") {
            b.lower = value;
          } else if (head == "UP") {
            b.upper = value;
          } else {
            b.lower = value;
            b.upper = value;
          }
        } else {
          fail(line_no, "unsupported bound type '" + std::string(head) + "'");
        }
        break;
      }
      case Section::none:
        fail(line_no, "data before any section header");
      case Section::done:
        break;
    }
  }

  if (section != Section::done) {
    fail(line_no, "missing ENDATA");
  }

  LpModel model;
  model.name = model_name;
  for (std::size_t j = 0; j < var_names.size(); ++j) {
    model.add_variable(var_names[j], bounds[j].lower, bounds[j].upper, var_obj[j]);
  }
  // Rebuild rows in ROWS order from the column-major coefficient lists.
  std::vector<std::vector<RowCoeff>> row_coeffs(row_names.size());
  for (std::size_t j = 0; j < var_coeffs.size(); ++j) {
    for (const auto& [row, value] : var_coeffs[j]) {
      row_coeffs[row].push_back(RowCoeff{static_cast<int>(j), value});
    }
  }
  for (std::size_t r = 0; r < row_names.size(); ++r) {
    model.add_row(row_names[r], row_senses[r], rhs_values[r], row_coeffs[r]);
  }
  return model;
}

LpModel parse_mps(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "' for reading");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_mps_string(buffer.str());
}

}  // namespace ldslab

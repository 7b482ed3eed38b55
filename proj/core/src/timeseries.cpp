#include "ldslab/timeseries.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "text_util.hpp"

namespace ldslab {

void TimeSeriesTable::add_column(const std::string& name, std::vector<double> values) {
  if (has_column(name)) {
    throw DuplicateName("timeseries column '" + name + "' already exists");
  }
  if (!columns_.empty() && values.size() != length()) {
    throw LengthError("timeseries column '" + name + "' has length " +
                      std::to_string(values.size()) + ", expected " + std::to_string(length()));
  }
  names_.push_back(name);
  columns_.push_back(std::move(values));
}

int TimeSeriesTable::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return static_cast<int>(i);
  }
  return -1;
}

const std::vector<double>& TimeSeriesTable::column(const std::string& name) const {
  const int idx = index_of(name);
  if (idx < 0) {
    throw MissingColumnError("timeseries column '" + name + "' not found");
  }
  return columns_[idx];
}

namespace {

// RFC-4180 field splitting; quoted fields may contain commas and "" escapes.
std::vector<std::string> split_csv_line(const std::string& line, int line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  if (in_quotes) {
    throw ParseError("csv line " + std::to_string(line_no) + ": unterminated quote");
  }
  fields.push_back(field);
  return fields;
}

}  // namespace

TimeSeriesTable parse_timeseries(const std::string& text, const SystemConfig& config) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;

  if (!std::getline(in, line)) {
    throw ParseError("csv: empty file");
  }
  ++line_no;
  const std::vector<std::string> header = split_csv_line(line, line_no);
  if (header.empty() || header.front() != "step") {
    throw ParseError("csv line 1: first column must be 'step'");
  }
  const std::size_t num_cols = header.size();
  std::vector<std::vector<double>> data(num_cols - 1);

  long long previous_step = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> fields = split_csv_line(line, line_no);
    if (fields.size() != num_cols) {
      throw ParseError("csv line " + std::to_string(line_no) + ": expected " +
                       std::to_string(num_cols) + " fields, got " +
                       std::to_string(fields.size()));
    }
    long long step = 0;
    if (!detail::parse_long(fields[0], step)) {
      throw ParseError("csv line " + std::to_string(line_no) + ": bad step '" + fields[0] + "'");
    }
    if (step <= previous_step) {
      throw ParseError("csv line " + std::to_string(line_no) +
                       ": step values must be strictly increasing and 1-based");
    }
    previous_step = step;
    for (std::size_t c = 1; c < num_cols; ++c) {
      double value = 0.0;
      if (!detail::parse_double(fields[c], value)) {
        throw ParseError("csv line " + std::to_string(line_no) + ": bad number '" + fields[c] +
                         "' in column '" + header[c] + "'");
      }
      data[c - 1].push_back(value);
    }
  }

  const std::size_t expected = static_cast<std::size_t>(config.horizon.total_steps);
  for (std::size_t c = 1; c < num_cols; ++c) {
    if (data[c - 1].size() != expected) {
      throw LengthError("timeseries has " + std::to_string(data[c - 1].size()) +
                        " rows, expected H = " + std::to_string(expected));
    }
  }

  TimeSeriesTable table;
  for (std::size_t c = 1; c < num_cols; ++c) {
    table.add_column(header[c], std::move(data[c - 1]));
  }

  // Cross-checks against the config's references.
  std::set<std::string> availability_columns;
  for (const Generator& g : config.generators) {
    if (g.kind != GeneratorKind::vre) continue;
    if (!table.has_column(g.availability_series)) {
      throw MissingColumnError("generator '" + g.name + "' references missing column '" +
                               g.availability_series + "'");
    }
    availability_columns.insert(g.availability_series);
  }
  for (const std::string& name : availability_columns) {
    std::size_t h = 0;
    for (double v : table.column(name)) {
      ++h;
      if (!(v >= 0.0 && v <= 1.0)) {
        throw RangeError("column '" + name + "' step " + std::to_string(h) +
                         ": availability " + detail::format_sig9(v) + " outside [0, 1]");
      }
    }
  }
  for (const std::string& name : table.names()) {
    if (name.rfind("demand.", 0) != 0) continue;
    std::size_t h = 0;
    for (double v : table.column(name)) {
      ++h;
      if (!(v >= 0.0)) {
        throw RangeError("column '" + name + "' step " + std::to_string(h) +
                         ": demand must be nonnegative");
      }
    }
  }
  return table;
}

TimeSeriesTable load_timeseries(const std::filesystem::path& path, const SystemConfig& config) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open timeseries file '" + path.string() + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_timeseries(buffer.str(), config);
}

ValidationReport validate_inputs(const SystemConfig& config, const TimeSeriesTable& ts) {
  ValidationReport report;
  auto issue = [&](const std::string& code, const std::string& message) {
    report.issues.push_back(ValidationIssue{code, message});
  };

  std::set<std::string> zones(config.zones.begin(), config.zones.end());
  for (const Generator& g : config.generators) {
    if (!zones.contains(g.zone)) {
      issue("unknown zone", "generator '" + g.name + "' references zone '" + g.zone + "'");
    }
    if (g.kind == GeneratorKind::vre && !ts.has_column(g.availability_series)) {
      issue("missing availability series",
            "generator '" + g.name + "' references column '" + g.availability_series + "'");
    }
  }
  for (const Storage& s : config.storages) {
    if (!zones.contains(s.zone)) {
      issue("unknown zone", "storage '" + s.name + "' references zone '" + s.zone + "'");
    }
  }
  for (const Line& l : config.lines) {
    if (!zones.contains(l.from_zone)) {
      issue("unknown zone", "line references zone '" + l.from_zone + "'");
    }
    if (!zones.contains(l.to_zone)) {
      issue("unknown zone", "line references zone '" + l.to_zone + "'");
    }
  }
  for (const std::string& zone : config.zones) {
    if (!ts.has_column("demand." + zone)) {
      issue("missing demand series", "no column 'demand." + zone + "'");
    }
  }
  if (ts.length() != static_cast<std::size_t>(config.horizon.total_steps)) {
    issue("length mismatch", "timeseries length " + std::to_string(ts.length()) +
                                 " differs from horizon H = " +
                                 std::to_string(config.horizon.total_steps));
  }
  for (std::size_t c = 0; c < ts.names().size(); ++c) {
    const std::string& name = ts.names()[c];
    const bool is_demand = name.rfind("demand.", 0) == 0;
    bool is_availability = false;
    for (const Generator& g : config.generators) {
      if (g.kind == GeneratorKind::vre && g.availability_series == name) {
        is_availability = true;
      }
    }
    for (double v : ts.columns()[c]) {
      if (is_demand && !(v >= 0.0)) {
        issue("negative demand", "column '" + name + "' has a negative value");
        break;
      }
      if (is_availability && !(v >= 0.0 && v <= 1.0)) {
        issue("availability out of range", "column '" + name + "' leaves [0, 1]");
        break;
      }
    }
  }
  return report;
}

}  // namespace ldslab

#include "ldslab/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "text_util.hpp"
#include "toml_lite.hpp"

namespace ldslab {

namespace {

using detail::TomlTable;
using detail::TomlValue;

class TableReader {
 public:
  TableReader(const TomlTable& table, std::string context)
      : table_(table), context_(std::move(context)) {}

  bool has(const std::string& key) const { return table_.values.contains(key); }

  const TomlValue& require(const std::string& key) {
    auto it = table_.values.find(key);
    if (it == table_.values.end()) {
      throw SchemaError(context_ + ": missing required key '" + key + "'");
    }
    used_.insert(key);
    return it->second;
  }

  std::string require_string(const std::string& key) {
    const TomlValue& v = require(key);
    if (v.kind != TomlValue::Kind::string) {
      throw SchemaError(context_ + ": key '" + key + "' must be a string");
    }
    return v.str;
  }

  double require_number(const std::string& key) {
    const TomlValue& v = require(key);
    if (v.kind == TomlValue::Kind::integer) return static_cast<double>(v.integer);
    if (v.kind == TomlValue::Kind::floating) return v.floating;
    throw SchemaError(context_ + ": key '" + key + "' must be a number");
  }

  std::int64_t require_integer(const std::string& key) {
    const TomlValue& v = require(key);
    if (v.kind != TomlValue::Kind::integer) {
      throw SchemaError(context_ + ": key '" + key + "' must be an integer");
    }
    return v.integer;
  }

  bool require_bool(const std::string& key) {
    const TomlValue& v = require(key);
    if (v.kind != TomlValue::Kind::boolean) {
      throw SchemaError(context_ + ": key '" + key + "' must be true or false");
    }
    return v.boolean;
  }

  std::string optional_string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    return require_string(key);
  }

  double optional_number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    return require_number(key);
  }

  // Every key must have been consumed; extras are schema violations.
  void finish() const {
    for (const auto& [key, value] : table_.values) {
      if (!used_.contains(key)) {
        throw SchemaError(context_ + ": unexpected key '" + key + "'");
      }
    }
  }

 private:
  const TomlTable& table_;
  std::string context_;
  std::set<std::string> used_;
};

void check_positive(double value, const std::string& key) {
  if (!(value > 0.0)) {
    throw DomainError("key '" + key + "' must be positive");
  }
}

void check_nonnegative(double value, const std::string& key) {
  if (!(value >= 0.0)) {
    throw DomainError("key '" + key + "' must be nonnegative");
  }
}

}  // namespace

SystemConfig parse_config(const std::string& text) {
  const detail::TomlDoc doc = detail::parse_toml(text);
  SystemConfig config;

  {
    TableReader root(doc.root, "top level");
    config.nse_penalty = root.require_number("nse_penalty");
    check_positive(config.nse_penalty, "nse_penalty");
    root.finish();
  }

  for (const auto& [name, table] : doc.tables) {
    if (name != "horizon" && name != "aggregation" && name != "solver") {
      throw SchemaError("unexpected table [" + name + "]");
    }
  }
  for (const auto& [name, list] : doc.arrays) {
    if (name != "zone" && name != "generator" && name != "storage" && name != "line") {
      throw SchemaError("unexpected array of tables [[" + name + "]]");
    }
  }

  {
    auto it = doc.tables.find("horizon");
    if (it == doc.tables.end()) throw SchemaError("missing [horizon] table");
    TableReader horizon(it->second, "[horizon]");
    const std::int64_t total = horizon.require_integer("H");
    const std::int64_t per_period = horizon.require_integer("T");
    config.horizon.dt_hours = horizon.require_number("dt_hours");
    horizon.finish();
    if (total < 1) throw DomainError("key 'horizon.H' must be at least 1");
    if (per_period < 1) throw DomainError("key 'horizon.T' must be at least 1");
    if (total % per_period != 0) {
      throw DomainError("key 'horizon.H': H not divisible by T (" + std::to_string(total) +
                        " / " + std::to_string(per_period) + ")");
    }
    config.horizon.total_steps = static_cast<int>(total);
    config.horizon.steps_per_period = static_cast<int>(per_period);
    check_positive(config.horizon.dt_hours, "horizon.dt_hours");
  }

  {
    auto it = doc.tables.find("aggregation");
    if (it == doc.tables.end()) throw SchemaError("missing [aggregation] table");
    TableReader agg(it->second, "[aggregation]");
    const std::int64_t k = agg.require_integer("num_representatives");
    const std::int64_t seed = agg.require_integer("seed");
    agg.finish();
    if (k < 1) throw DomainError("key 'aggregation.num_representatives' must be at least 1");
    if (k > config.horizon.num_periods()) {
      throw DomainError("key 'aggregation.num_representatives' exceeds the number of periods");
    }
    config.aggregation.num_representatives = static_cast<int>(k);
    config.aggregation.seed = static_cast<std::uint64_t>(seed);
  }

  if (auto it = doc.tables.find("solver"); it != doc.tables.end()) {
    TableReader solver(it->second, "[solver]");
    const std::string backend = solver.optional_string("backend", "reference");
    if (backend == "reference") {
      config.solver.backend = SolverBackend::reference;
    } else if (backend == "external") {
      config.solver.backend = SolverBackend::external;
    } else {
      throw DomainError("key 'solver.backend' must be 'reference' or 'external'");
    }
    config.solver.command_template = solver.optional_string("command_template", "");
    config.solver.time_limit_s = solver.optional_number("time_limit_s", 0.0);
    solver.finish();
  }

  std::set<std::string> zone_names;
  if (auto it = doc.arrays.find("zone"); it != doc.arrays.end()) {
    for (const TomlTable& table : it->second) {
      TableReader zone(table, "[[zone]]");
      const std::string name = zone.require_string("name");
      zone.finish();
      if (!zone_names.insert(name).second) {
        throw DomainError("duplicate zone name '" + name + "'");
      }
      config.zones.push_back(name);
    }
  }
  if (config.zones.empty()) {
    throw SchemaError("at least one [[zone]] is required");
  }

  std::set<std::string> entity_names;
  if (auto it = doc.arrays.find("generator"); it != doc.arrays.end()) {
    for (const TomlTable& table : it->second) {
      TableReader gen(table, "[[generator]]");
      Generator g;
      g.name = gen.require_string("name");
      g.zone = gen.require_string("zone");
      const std::string kind = gen.require_string("kind");
      g.capex = gen.require_number("capex");
      g.varcost = gen.require_number("varcost");
      if (kind == "thermal") {
        g.kind = GeneratorKind::thermal;
      } else if (kind == "vre") {
        g.kind = GeneratorKind::vre;
        g.availability_series = gen.require_string("availability_series");
      } else {
        throw DomainError("generator '" + g.name + "': kind must be 'thermal' or 'vre'");
      }
      gen.finish();
      check_nonnegative(g.capex, g.name + ".capex");
      check_nonnegative(g.varcost, g.name + ".varcost");
      if (!entity_names.insert(g.name).second) {
        throw DomainError("duplicate generator/storage name '" + g.name + "'");
      }
      config.generators.push_back(std::move(g));
    }
  }

  if (auto it = doc.arrays.find("storage"); it != doc.arrays.end()) {
    for (const TomlTable& table : it->second) {
      TableReader stor(table, "[[storage]]");
      Storage s;
      s.name = stor.require_string("name");
      s.zone = stor.require_string("zone");
      s.is_lds = stor.require_bool("is_lds");
      s.capex_energy = stor.require_number("capex_energy");
      s.capex_power = stor.require_number("capex_power");
      s.eta_cha = stor.require_number("eta_cha");
      s.eta_dis = stor.require_number("eta_dis");
      s.eta_sdc = stor.require_number("eta_sdc");
      stor.finish();
      check_nonnegative(s.capex_energy, s.name + ".capex_energy");
      check_nonnegative(s.capex_power, s.name + ".capex_power");
      if (!(s.eta_cha > 0.0 && s.eta_cha <= 1.0)) {
        throw DomainError("key '" + s.name + ".eta_cha' must lie in (0, 1]");
      }
      if (!(s.eta_dis > 0.0 && s.eta_dis <= 1.0)) {
        throw DomainError("key '" + s.name + ".eta_dis' must lie in (0, 1]");
      }
      if (!(s.eta_sdc >= 0.0 && s.eta_sdc < 1.0)) {
        throw DomainError("key '" + s.name + ".eta_sdc' must lie in [0, 1)");
      }
      if (!entity_names.insert(s.name).second) {
        throw DomainError("duplicate generator/storage name '" + s.name + "'");
      }
      config.storages.push_back(std::move(s));
    }
  }

  if (auto it = doc.arrays.find("line"); it != doc.arrays.end()) {
    for (const TomlTable& table : it->second) {
      TableReader line(table, "[[line]]");
      Line l;
      l.from_zone = line.require_string("from");
      l.to_zone = line.require_string("to");
      l.capex = line.require_number("capex");
      line.finish();
      check_nonnegative(l.capex, "line.capex");
      if (l.from_zone == l.to_zone) {
        throw DomainError("line connects zone '" + l.from_zone + "' to itself");
      }
      config.lines.push_back(std::move(l));
    }
  }

  return config;
}

SystemConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open config file '" + path.string() + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string dump_config(const SystemConfig& config) {
  using detail::format_exact;
  std::ostringstream out;
  out << "nse_penalty = " << format_exact(config.nse_penalty) << "\n\n";
  out << "[horizon]\n";
  out << "H = " << config.horizon.total_steps << "\n";
  out << "T = " << config.horizon.steps_per_period << "\n";
  out << "dt_hours = " << format_exact(config.horizon.dt_hours) << "\n\n";
  out << "[aggregation]\n";
  out << "num_representatives = " << config.aggregation.num_representatives << "\n";
  out << "seed = " << config.aggregation.seed << "\n\n";
  out << "[solver]\n";
  out << "backend = \""
      << (config.solver.backend == SolverBackend::reference ? "reference" : "external")
      << "\"\n";
  out << "command_template = \"" << config.solver.command_template << "\"\n";
  out << "time_limit_s = " << format_exact(config.solver.time_limit_s) << "\n";
  for (const std::string& zone : config.zones) {
    out << "\n[[zone]]\nname = \"" << zone << "\"\n";
  }
  for (const Generator& g : config.generators) {
    out << "\n[[generator]]\n";
    out << "name = \"" << g.name << "\"\n";
    out << "zone = \"" << g.zone << "\"\n";
    out << "kind = \"" << (g.kind == GeneratorKind::thermal ? "thermal" : "vre") << "\"\n";
    out << "capex = " << format_exact(g.capex) << "\n";
    out << "varcost = " << format_exact(g.varcost) << "\n";
    if (g.kind == GeneratorKind::vre) {
      out << "availability_series = \"" << g.availability_series << "\"\n";
    }
  }
  for (const Storage& s : config.storages) {
    out << "\n[[storage]]\n";
    out << "name = \"" << s.name << "\"\n";
    out << "zone = \"" << s.zone << "\"\n";
    out << "is_lds = " << (s.is_lds ? "true" : "false") << "\n";
    out << "capex_energy = " << format_exact(s.capex_energy) << "\n";
    out << "capex_power = " << format_exact(s.capex_power) << "\n";
    out << "eta_cha = " << format_exact(s.eta_cha) << "\n";
    out << "eta_dis = " << format_exact(s.eta_dis) << "\n";
    out << "eta_sdc = " << format_exact(s.eta_sdc) << "\n";
  }
  for (const Line& l : config.lines) {
    out << "\n[[line]]\n";
    out << "from = \"" << l.from_zone << "\"\n";
    out << "to = \"" << l.to_zone << "\"\n";
    out << "capex = " << format_exact(l.capex) << "\n";
  }
  return out.str();
}

void save_config(const SystemConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot open '" + path.string() + "' for writing");
  }
  out << dump_config(config);
}

bool operator==(const SystemConfig& a, const SystemConfig& b) {
  auto gen_eq = [](const Generator& x, const Generator& y) {
    return x.name == y.name && x.zone == y.zone && x.kind == y.kind && x.capex == y.capex &&
           x.varcost == y.varcost && x.availability_series == y.availability_series;
  };
  auto stor_eq = [](const Storage& x, const Storage& y) {
    return x.name == y.name && x.zone == y.zone && x.is_lds == y.is_lds &&
           x.capex_energy == y.capex_energy && x.capex_power == y.capex_power &&
           x.eta_cha == y.eta_cha && x.eta_dis == y.eta_dis && x.eta_sdc == y.eta_sdc;
  };
  auto line_eq = [](const Line& x, const Line& y) {
    return x.from_zone == y.from_zone && x.to_zone == y.to_zone && x.capex == y.capex;
  };
  if (a.zones != b.zones || a.generators.size() != b.generators.size() ||
      a.storages.size() != b.storages.size() || a.lines.size() != b.lines.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.generators.size(); ++i) {
    if (!gen_eq(a.generators[i], b.generators[i])) return false;
  }
  for (std::size_t i = 0; i < a.storages.size(); ++i) {
    if (!stor_eq(a.storages[i], b.storages[i])) return false;
  }
  for (std::size_t i = 0; i < a.lines.size(); ++i) {
    if (!line_eq(a.lines[i], b.lines[i])) return false;
  }
  return a.horizon.total_steps == b.horizon.total_steps &&
         a.horizon.steps_per_period == b.horizon.steps_per_period &&
         a.horizon.dt_hours == b.horizon.dt_hours &&
         a.aggregation.num_representatives == b.aggregation.num_representatives &&
         a.aggregation.seed == b.aggregation.seed && a.nse_penalty == b.nse_penalty &&
         a.solver.backend == b.solver.backend &&
         a.solver.command_template == b.solver.command_template &&
         a.solver.time_limit_s == b.solver.time_limit_s;
}

}  // namespace ldslab

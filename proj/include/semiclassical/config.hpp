#pragma once

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "compare.hpp"
#include "fgh.hpp"
#include "kinetics.hpp"
#include "potentials.hpp"
#include "wkbj.hpp"

namespace semiclassical {

/// Malformed or inconsistent run configuration (CLI exit status 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LawSpec {
  std::string kind;
  std::map<std::string, double> parameters;
};

struct RunConfig {
  LawSpec kinetic;
  LawSpec potential;
  double hbar = 1.0;
  std::vector<int> states;

  FghConfig fgh;
  bool fgh_states_explicit = false;
  WkbjSettings wkbj;
  std::optional<double> e_star;

  std::size_t classical_grid_points = 2001;
  double classical_grid_margin = 0.05;

  double validation_p_max = 10.0;
  std::size_t validation_samples = 2048;

  std::filesystem::path output_directory = "out";
  std::vector<OutputFormat> formats{OutputFormat::csv, OutputFormat::json};

  /// Fully resolved configuration, defaults included.
  nlohmann::json echo() const;
};

namespace config_detail {

inline const std::map<std::string, std::vector<std::string>>& kinetic_kinds() {
  static const std::map<std::string, std::vector<std::string>> kinds{
      {"nonrelativistic", {"m"}}, {"relativistic", {"m"}}, {"massless", {}}};
  return kinds;
}

inline const std::map<std::string, std::vector<std::string>>& potential_kinds() {
  static const std::map<std::string, std::vector<std::string>> kinds{
      {"linear", {"lambda"}}, {"harmonic", {"m", "omega"}}, {"power", {"c", "q"}}};
  return kinds;
}

inline std::string line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

class Reader {
 public:
  Reader(const nlohmann::json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) fail("", "expected a section");
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
    seen_.insert(key);
    if (!node_.contains(key)) {
      if (fallback) return *fallback;
      fail(key, "missing required number");
    }
    const auto& v = node_.at(key);
    if (!v.is_number()) fail(key, "expected a number");
    return v.get<double>();
  }

  std::size_t count(const std::string& key, std::size_t fallback) {
    seen_.insert(key);
    if (!node_.contains(key)) return fallback;
    const auto& v = node_.at(key);
    if (!v.is_number_integer() || v.get<long long>() <= 0) fail(key, "expected a positive integer");
    return static_cast<std::size_t>(v.get<long long>());
  }

  std::string text(const std::string& key, std::optional<std::string> fallback = std::nullopt) {
    seen_.insert(key);
    if (!node_.contains(key)) {
      if (fallback) return *fallback;
      fail(key, "missing required string");
    }
    const auto& v = node_.at(key);
    if (!v.is_string()) fail(key, "expected a string");
    return v.get<std::string>();
  }

  const nlohmann::json* raw(const std::string& key) {
    seen_.insert(key);
    return node_.contains(key) ? &node_.at(key) : nullptr;
  }

  Reader section(const std::string& key) {
    seen_.insert(key);
    static const nlohmann::json empty = nlohmann::json::object();
    return Reader(node_.contains(key) ? node_.at(key) : empty, field(key));
  }

  /// Rejects keys that were never read (catches typos).
  void finish() const {
    for (const auto& item : node_.items()) {
      if (!seen_.count(item.key())) fail(item.key(), "unknown field");
    }
  }

  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    throw ConfigError("field '" + field(key) + "': " + message);
  }

  std::string field(const std::string& key) const {
    if (key.empty()) return path_;
    return path_.empty() ? key : path_ + "." + key;
  }

 private:
  const nlohmann::json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

inline LawSpec read_law(Reader reader, const std::map<std::string, std::vector<std::string>>& kinds) {
  LawSpec spec;
  spec.kind = reader.text("kind");
  const auto it = kinds.find(spec.kind);
  if (it == kinds.end()) reader.fail("kind", "unknown kind '" + spec.kind + "'");
  for (const auto& name : it->second) spec.parameters[name] = reader.number(name);
  reader.finish();
  return spec;
}

inline std::vector<int> read_states(const nlohmann::json& node, const Reader& parent) {
  std::vector<int> states;
  if (node.is_array()) {
    for (const auto& v : node) {
      if (!v.is_number_integer()) parent.fail("states", "expected integers");
      states.push_back(v.get<int>());
    }
  } else if (node.is_object()) {
    if (!node.contains("from") || !node.contains("to") || !node.at("from").is_number_integer() ||
        !node.at("to").is_number_integer()) {
      parent.fail("states", "a range needs integer 'from' and 'to'");
    }
    for (int n = node.at("from").get<int>(); n <= node.at("to").get<int>(); ++n) states.push_back(n);
  } else {
    parent.fail("states", "expected a list or a {from, to} range");
  }
  if (states.empty()) parent.fail("states", "no states requested");
  for (int n : states) {
    if (n < 0) parent.fail("states", "quantum numbers must be non-negative");
  }
  std::sort(states.begin(), states.end());
  states.erase(std::unique(states.begin(), states.end()), states.end());
  return states;
}

}  // namespace config_detail

/// Parses the JSON run configuration. Throws ConfigError with the line and
/// column of syntax errors, or the dotted path of the offending field.
inline RunConfig parse_config(const std::string& text) {
  using config_detail::Reader;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("syntax error at " + config_detail::line_column(text, e.byte == 0 ? 0 : e.byte - 1) + ": " +
                      e.what());
  }
  if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");

  RunConfig config;
  Reader root(doc, "");
  {
    Reader problem = root.section("problem");
    config.kinetic = config_detail::read_law(problem.section("kinetic"), config_detail::kinetic_kinds());
    config.potential = config_detail::read_law(problem.section("potential"), config_detail::potential_kinds());
    config.hbar = problem.number("hbar", 1.0);
    if (!(config.hbar > 0.0)) problem.fail("hbar", "must be positive");
    problem.finish();
  }
  const nlohmann::json* states = root.raw("states");
  if (!states) root.fail("states", "missing");
  config.states = config_detail::read_states(*states, root);
  {
    Reader fgh = root.section("fgh");
    config.fgh.n_points = fgh.count("n_points", 513);
    config.fgh_states_explicit = fgh.has("n_states");
    config.fgh.n_states = fgh.count("n_states", static_cast<std::size_t>(config.states.back()) + 1);
    config.fgh.padding = fgh.number("padding", 0.35);
    if (const nlohmann::json* box = fgh.raw("box")) {
      if (box->is_string() && box->get<std::string>() == "auto") {
      } else if (box->is_array() && box->size() == 2 && (*box)[0].is_number() && (*box)[1].is_number()) {
        config.fgh.box = Interval{(*box)[0].get<double>(), (*box)[1].get<double>()};
      } else {
        fgh.fail("box", "expected \"auto\" or [x_min, x_max]");
      }
    }
    fgh.finish();
  }
  {
    Reader wkbj = root.section("wkbj");
    config.wkbj.quadrature.relative_tolerance = wkbj.number("quadrature_tolerance", 1e-11);
    config.wkbj.quadrature.max_nodes = wkbj.count("quadrature_max_nodes", std::size_t{1} << 20);
    config.wkbj.energy_ceiling = wkbj.number("energy_ceiling", 1e8);
    config.wkbj.phase_table_cells = wkbj.count("phase_table_cells", 2048);
    if (const nlohmann::json* estar = wkbj.raw("e_star")) {
      if (estar->is_number()) {
        config.e_star = estar->get<double>();
      } else if (!(estar->is_string() && estar->get<std::string>() == "auto")) {
        wkbj.fail("e_star", "expected \"auto\" or a positive number");
      }
    }
    wkbj.finish();
  }
  {
    Reader classical = root.section("classical");
    config.classical_grid_points = classical.count("grid_points", 2001);
    config.classical_grid_margin = classical.number("margin", 0.05);
    classical.finish();
  }
  {
    Reader validation = root.section("validation");
    config.validation_p_max = validation.number("p_max", 10.0);
    config.validation_samples = validation.count("samples", 2048);
    validation.finish();
  }
  {
    Reader outputs = root.section("outputs");
    config.output_directory = outputs.text("directory", "out");
    if (const nlohmann::json* formats = outputs.raw("formats")) {
      if (!formats->is_array() || formats->empty()) outputs.fail("formats", "expected a non-empty list");
      config.formats.clear();
      for (const auto& f : *formats) {
        if (f == "csv") {
          config.formats.push_back(OutputFormat::csv);
        } else if (f == "json") {
          config.formats.push_back(OutputFormat::json);
        } else {
          outputs.fail("formats", "expected \"csv\" or \"json\"");
        }
      }
    }
    outputs.finish();
  }
  root.finish();
  return config;
}

inline RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

inline nlohmann::json RunConfig::echo() const {
  nlohmann::json doc;
  doc["problem"]["kinetic"]["kind"] = kinetic.kind;
  for (const auto& [k, v] : kinetic.parameters) doc["problem"]["kinetic"][k] = v;
  doc["problem"]["potential"]["kind"] = potential.kind;
  for (const auto& [k, v] : potential.parameters) doc["problem"]["potential"][k] = v;
  doc["problem"]["hbar"] = hbar;
  doc["states"] = states;
  doc["fgh"]["n_points"] = fgh.n_points;
  doc["fgh"]["n_states"] = fgh.n_states;
  doc["fgh"]["padding"] = fgh.padding;
  doc["fgh"]["box"] = fgh.box ? nlohmann::json{fgh.box->lo, fgh.box->hi} : nlohmann::json("auto");
  doc["wkbj"]["quadrature_tolerance"] = wkbj.quadrature.relative_tolerance;
  doc["wkbj"]["quadrature_max_nodes"] = wkbj.quadrature.max_nodes;
  doc["wkbj"]["energy_ceiling"] = wkbj.energy_ceiling;
  doc["wkbj"]["phase_table_cells"] = wkbj.phase_table_cells;
  doc["wkbj"]["e_star"] = e_star ? nlohmann::json(*e_star) : nlohmann::json("auto");
  doc["classical"]["grid_points"] = classical_grid_points;
  doc["classical"]["margin"] = classical_grid_margin;
  doc["validation"]["p_max"] = validation_p_max;
  doc["validation"]["samples"] = validation_samples;
  return doc;
}

inline KineticLaw make_kinetic(const LawSpec& spec) {
  if (spec.kind == "nonrelativistic") return kinetic_laws::nonrelativistic(spec.parameters.at("m"));
  if (spec.kind == "relativistic") return kinetic_laws::relativistic(spec.parameters.at("m"));
  if (spec.kind == "massless") return kinetic_laws::massless();
  throw ConfigError("unknown kinetic kind '" + spec.kind + "'");
}

inline PotentialLaw make_potential(const LawSpec& spec) {
  const auto& p = spec.parameters;
  if (spec.kind == "linear") return potentials::linear(p.at("lambda"));
  if (spec.kind == "harmonic") return potentials::harmonic(p.at("m"), p.at("omega"));
  if (spec.kind == "power") return potentials::power_law(p.at("c"), p.at("q"));
  throw ConfigError("unknown potential kind '" + spec.kind + "'");
}

inline BoundStateProblem make_problem(const RunConfig& config) {
  return BoundStateProblem(make_kinetic(config.kinetic), make_potential(config.potential), config.hbar);
}

}  // namespace semiclassical

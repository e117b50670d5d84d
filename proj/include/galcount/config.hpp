#pragma once

// Run configuration: a line-oriented key=value grammar with optional sections.
//
//   # comment
//   n = 2  command = count          (several key=value tokens may share a line)
//   [family]                        (keys below are read as family.<key>)
//   modulus = 4
//   rule.1 = ur+split(2)
//
// Values never contain spaces. Lists are comma-separated.

#include <cmath>
#include <map>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "galcount/asymptotics.hpp"
#include "galcount/dirichlet_euler.hpp"
#include "galcount/error.hpp"
#include "galcount/local_conditions.hpp"

namespace galcount {

enum class Command { Count, PoissonCheck, GwCheck, Invariants, ExampleD1mod4, Fit };

inline const std::map<std::string, Command>& command_names() {
  static const std::map<std::string, Command> names{
      {"count", Command::Count},           {"poisson-check", Command::PoissonCheck},
      {"gw-check", Command::GwCheck},      {"invariants", Command::Invariants},
      {"example-d1mod4", Command::ExampleD1mod4}, {"fit", Command::Fit}};
  return names;
}

inline std::string to_string(Command c) {
  for (const auto& [name, cmd] : command_names()) {
    if (cmd == c) return name;
  }
  return "?";
}

/// A family given inline: a Frobenian rule plus conditions at listed places.
struct FamilySpec {
  std::string builtin = "full";  // empty when the family is inline
  i64 modulus = 1;
  std::map<i64, std::string> rule;
  std::string fallback = "full";
  std::map<Place, std::string> places;

  ConditionFamily build(int n) const {
    if (!builtin.empty()) return builtin_family(builtin, n);
    FrobenianRule r;
    r.modulus = modulus;
    for (const auto& [c, s] : rule) r.classes.emplace(c, LocalSubset::parse(s));
    r.fallback = LocalSubset::parse(fallback);
    std::map<Place, LocalSubset> ex;
    for (const auto& [v, s] : places) ex.emplace(v, LocalSubset::parse(s));
    return ConditionFamily(n, r, ex, "custom");
  }

  friend bool operator==(const FamilySpec&, const FamilySpec&) = default;
};

struct Limits {
  i64 max_n = kDefaultSeriesCap;
  u64 max_x = kDefaultCountCap;
  i64 max_primes = 0;  // 0 = unlimited
  friend bool operator==(const Limits&, const Limits&) = default;
};

struct RunConfig {
  int n = 2;
  Command command = Command::Count;
  FamilySpec family;
  OrderingSpec ordering = OrderingSpec::disc_regular();
  u64 x = 1000000;
  std::vector<u64> grid;      // explicit grid; empty = log grid from grid_min to x
  u64 grid_min = 10;
  int grid_points = 25;
  i64 truncation = 1000;      // N
  double window = 0.6;
  std::map<Place, std::string> box;
  std::string out;
  Limits limits;

  std::vector<u64> x_grid() const {
    if (!grid.empty()) return grid;
    return log_grid(static_cast<double>(std::min(grid_min, x)), static_cast<double>(x), grid_points);
  }

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

namespace detail {

inline u64 parse_count(const std::string& s, const std::string& key, int line) {
  // integers or exact powers written like 1e7
  static const std::regex sci(R"(^([0-9]+)(?:[eE]([0-9]+))?$)");
  std::smatch m;
  if (!std::regex_match(s, m, sci)) throw ConfigError("expected a nonnegative integer for " + key + ", got '" + s + "'", line);
  u64 v = std::stoull(m[1].str());
  const int e = m[2].matched ? std::stoi(m[2].str()) : 0;
  for (int i = 0; i < e; ++i) {
    if (v > ~u64{0} / 10) throw ConfigError("value too large for " + key, line);
    v *= 10;
  }
  return v;
}

inline i64 parse_signed(const std::string& s, const std::string& key, int line) {
  try {
    return detail::parse_int(s, key);
  } catch (const DomainError& e) {
    throw ConfigError(e.what(), line);
  }
}

inline InertiaPattern parse_pattern(const std::string& s, int line) {
  static const std::regex order_re(R"(^o([0-9]+)$)");
  static const std::regex coord_re(R"(^c([0-9]+)\.([0-9]+)$)");
  std::smatch m;
  if (std::regex_match(s, m, order_re)) return InertiaPattern::of_order(std::stoll(m[1].str()));
  if (std::regex_match(s, m, coord_re)) return InertiaPattern::of_coords(std::stoll(m[1].str()), std::stoll(m[2].str()));
  throw ConfigError("bad inertia pattern '" + s + "' (expected o<d> or c<t>.<w>)", line);
}

struct Entry {
  std::string value;
  int line = 0;
};

/// Splits the text into key -> (value, line); section headers prefix keys.
inline std::map<std::string, Entry> tokenize(const std::string& text) {
  std::map<std::string, Entry> out;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  static const std::regex eq(R"(\s*=\s*)");
  static const std::regex header(R"(^\[([A-Za-z0-9_.-]*)\]$)");
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string trimmed = trim(raw);
    if (trimmed.empty()) continue;
    std::smatch m;
    if (std::regex_match(trimmed, m, header)) {
      section = m[1].str();
      continue;
    }
    std::istringstream toks(std::regex_replace(trimmed, eq, "="));
    std::string tok;
    while (toks >> tok) {
      const auto pos = tok.find('=');
      if (pos == std::string::npos || pos == 0 || pos + 1 == tok.size()) {
        throw ConfigError("expected key=value, got '" + tok + "'", line);
      }
      std::string key = tok.substr(0, pos);
      if (!section.empty()) key = section + "." + key;
      if (out.count(key)) throw ConfigError("duplicate key '" + key + "'", line);
      out[key] = {tok.substr(pos + 1), line};
    }
  }
  return out;
}

inline bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

}  // namespace detail

inline RunConfig parse_config(const std::string& text) {
  using detail::Entry;
  const auto entries = detail::tokenize(text);
  RunConfig c;
  auto line_of = [&](const std::string& key) { return entries.count(key) ? entries.at(key).line : 0; };

  bool custom_family = false;
  bool custom_ordering = false;
  i64 ord_modulus = 1;
  OrderingSpec::Table generic;
  OrderingSpec::Table exceptional;
  bool explicit_grid_bounds = false;

  for (const auto& [key, e] : entries) {
    const std::string& v = e.value;
    const int ln = e.line;
    try {
      if (key == "n") {
        const i64 n = detail::parse_signed(v, key, ln);
        if (n < 2 || n > 64) throw ConfigError("n must satisfy 2 <= n <= 64", ln);
        c.n = static_cast<int>(n);
      } else if (key == "command") {
        const auto it = command_names().find(v);
        if (it == command_names().end()) throw ConfigError("unknown command '" + v + "'", ln);
        c.command = it->second;
      } else if (key == "family") {
        if (v == "custom") {
          custom_family = true;
          c.family.builtin.clear();
        } else {
          c.family.builtin = v;
        }
      } else if (key == "family.modulus") {
        c.family.modulus = detail::parse_signed(v, key, ln);
        if (c.family.modulus < 1) throw ConfigError("family.modulus must be positive", ln);
      } else if (key == "family.default") {
        c.family.fallback = v;
      } else if (detail::starts_with(key, "family.rule.")) {
        c.family.rule[detail::parse_signed(key.substr(12), key, ln)] = v;
      } else if (detail::starts_with(key, "family.place.")) {
        c.family.places[Place::parse(key.substr(13))] = v;
      } else if (key == "ordering") {
        if (v == "disc") {
          c.ordering = OrderingSpec::disc_regular();
        } else if (v == "radical") {
          c.ordering = OrderingSpec::radical();
        } else if (v == "custom") {
          custom_ordering = true;
        } else {
          throw ConfigError("unknown ordering '" + v + "' (disc, radical or custom)", ln);
        }
      } else if (key == "ordering.modulus") {
        ord_modulus = detail::parse_signed(v, key, ln);
      } else if (detail::starts_with(key, "ordering.generic.") || detail::starts_with(key, "ordering.place.")) {
        const bool gen = detail::starts_with(key, "ordering.generic.");
        const std::string rest = key.substr(gen ? 17 : 15);
        const auto dot = rest.find('.');
        if (dot == std::string::npos) throw ConfigError("expected " + key + ".<pattern>", ln);
        const i64 r = detail::parse_signed(rest.substr(0, dot), key, ln);
        const auto pat = detail::parse_pattern(rest.substr(dot + 1), ln);
        (gen ? generic : exceptional)[{r, pat}] = static_cast<int>(detail::parse_signed(v, key, ln));
      } else if (key == "X") {
        c.x = detail::parse_count(v, key, ln);
      } else if (key == "N") {
        c.truncation = static_cast<i64>(detail::parse_count(v, key, ln));
      } else if (key == "grid") {
        for (const auto& t : detail::split(v, ',')) c.grid.push_back(detail::parse_count(t, key, ln));
      } else if (key == "grid.min") {
        c.grid_min = detail::parse_count(v, key, ln);
        explicit_grid_bounds = true;
      } else if (key == "grid.points") {
        c.grid_points = static_cast<int>(detail::parse_count(v, key, ln));
        explicit_grid_bounds = true;
      } else if (key == "fit.window") {
        std::size_t used = 0;
        c.window = std::stod(v, &used);
        if (used != v.size() || !(c.window > 0 && c.window <= 1)) throw ConfigError("fit.window must lie in (0, 1]", ln);
      } else if (detail::starts_with(key, "box.")) {
        c.box[Place::parse(key.substr(4))] = v;
      } else if (key == "out") {
        c.out = v;
      } else if (key == "limits.max_N") {
        c.limits.max_n = static_cast<i64>(detail::parse_count(v, key, ln));
      } else if (key == "limits.max_X") {
        c.limits.max_x = detail::parse_count(v, key, ln);
      } else if (key == "limits.max_primes") {
        c.limits.max_primes = static_cast<i64>(detail::parse_count(v, key, ln));
      } else {
        throw ConfigError("unknown key '" + key + "'", ln);
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& ex) {
      throw ConfigError(key + ": " + ex.what(), ln);
    }
  }

  const int fam_line = line_of("family");
  if (!custom_family && (c.family.modulus != 1 || !c.family.rule.empty() || c.family.fallback != "full" || !c.family.places.empty())) {
    throw ConfigError("family.* keys need family = custom", fam_line);
  }
  if (custom_ordering) {
    try {
      c.ordering = OrderingSpec::custom(ord_modulus, generic, exceptional);
    } catch (const DomainError& ex) {
      throw ConfigError(std::string("ordering: ") + ex.what(), line_of("ordering"));
    }
  } else if (ord_modulus != 1 || !generic.empty() || !exceptional.empty()) {
    throw ConfigError("ordering.* keys need ordering = custom", line_of("ordering"));
  }
  if (!c.grid.empty() && explicit_grid_bounds) throw ConfigError("grid and grid.min/grid.points are exclusive", line_of("grid"));

  // semantic checks that need the built family
  try {
    const ConditionFamily fam = c.family.build(c.n);
    if (auto v = fam.missing_identity()) {
      throw ConfigError("family must contain identity (fails at " + v->to_string() + ")", fam_line);
    }
    for (Place v : fam.irregular_places()) {
      if (!fam.contains(LocalClass::zero(v, c.n))) {
        throw ConfigError("family must contain identity (fails at " + v.to_string() + ")", fam_line);
      }
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& ex) {
    throw ConfigError(std::string("family: ") + ex.what(), fam_line);
  }
  if (c.command == Command::ExampleD1mod4 && c.n != 2) throw ConfigError("example-d1mod4 needs n = 2", line_of("n"));
  if (c.x > c.limits.max_x) throw ConfigError("X exceeds limits.max_X", line_of("X"));
  if (c.truncation > c.limits.max_n) throw ConfigError("N exceeds limits.max_N", line_of("N"));
  if (c.grid_points < 1) throw ConfigError("grid.points must be positive", line_of("grid.points"));
  return c;
}

/// Canonical text; parse_config(to_config_text(c)) == c.
inline std::string to_config_text(const RunConfig& c) {
  std::string out;
  auto put = [&](const std::string& k, const std::string& v) { out += k + " = " + v + "\n"; };
  put("n", std::to_string(c.n));
  put("command", to_string(c.command));
  put("family", c.family.builtin.empty() ? "custom" : c.family.builtin);
  put("ordering", c.ordering.name());
  put("X", std::to_string(c.x));
  put("N", std::to_string(c.truncation));
  if (!c.grid.empty()) {
    std::string g;
    for (u64 x : c.grid) g += (g.empty() ? "" : ",") + std::to_string(x);
    put("grid", g);
  } else {
    put("grid.min", std::to_string(c.grid_min));
    put("grid.points", std::to_string(c.grid_points));
  }
  {
    std::ostringstream w;
    w.precision(17);
    w << c.window;
    put("fit.window", w.str());
  }
  if (!c.out.empty()) put("out", c.out);
  for (const auto& [v, s] : c.box) put("box." + v.to_string(), s);
  put("limits.max_N", std::to_string(c.limits.max_n));
  put("limits.max_X", std::to_string(c.limits.max_x));
  put("limits.max_primes", std::to_string(c.limits.max_primes));
  if (c.family.builtin.empty()) {
    out += "[family]\n";
    put("modulus", std::to_string(c.family.modulus));
    put("default", c.family.fallback);
    for (const auto& [r, s] : c.family.rule) put("rule." + std::to_string(r), s);
    for (const auto& [v, s] : c.family.places) put("place." + v.to_string(), s);
  }
  if (c.ordering.kind() == OrderingKind::Custom) {
    out += "[ordering]\n";
    put("modulus", std::to_string(c.ordering.modulus()));
    for (const auto& [k, e] : c.ordering.generic_table()) put("generic." + std::to_string(k.first) + "." + k.second.to_string(), std::to_string(e));
    for (const auto& [k, e] : c.ordering.exceptional_table()) put("place." + std::to_string(k.first) + "." + k.second.to_string(), std::to_string(e));
  }
  return out;
}

}  // namespace galcount

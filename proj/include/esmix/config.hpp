#pragma once

// JSON scenario configuration: molecule (by database name or inline), the
// rotational levels to keep, the driving fields, and run controls. Parsing is
// strict: unknown keys are rejected so a typo cannot silently fall back to a
// default, and dotted-path overrides re-enter through the same validation.

#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "esmix/molecule_db.hpp"
#include "esmix/scenarios.hpp"

namespace esmix::config {

using nlohmann::json;

inline json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  return j;
}

/// 64-bit FNV-1a over the canonical (sorted-key) dump; stamped into output
/// headers so a result file identifies the exact configuration it came from.
inline std::uint64_t config_hash(const json& j) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : j.dump()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline Pol parse_pol(const std::string& s) {
  if (s == "x") return Pol::x;
  if (s == "y") return Pol::y;
  if (s == "z") return Pol::z;
  throw std::invalid_argument("config: polarization must be \"x\", \"y\" or \"z\", got \"" + s +
                              "\"");
}

inline threewave::Shape parse_shape(const std::string& s) {
  if (s == "flat") return threewave::Shape::flat;
  if (s == "sin2") return threewave::Shape::sin2;
  if (s == "smoothtop") return threewave::Shape::smoothtop;
  if (s == "gauss") return threewave::Shape::gauss;
  throw std::invalid_argument("config: unknown pulse shape \"" + s + "\"");
}

namespace detail {

inline void check_keys(const json& j, std::initializer_list<const char*> allowed,
                       const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument("config: " + where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw std::invalid_argument("config: unknown key '" + key + "' in " + where);
  }
}

inline scenarios::LevelSpec parse_level(const json& j, const std::string& where) {
  check_keys(j, {"J", "Ka", "Kc", "band"}, where);
  scenarios::LevelSpec ls;
  ls.J = j.at("J").get<int>();
  ls.Ka = j.at("Ka").get<int>();
  ls.Kc = j.at("Kc").get<int>();
  ls.band = j.value("band", std::string());
  return ls;
}

inline scenarios::FieldSpec parse_field(const json& j, const std::string& where) {
  check_keys(j,
             {"polarization", "intensity", "resonance", "frequency", "detuning", "chirp",
              "shape", "t_on", "t_off", "phase"},
             where);
  scenarios::FieldSpec f;
  f.polarization = parse_pol(j.at("polarization").get<std::string>());
  f.intensity = j.at("intensity").get<double>();
  if (j.contains("resonance")) {
    if (j.contains("frequency"))
      throw std::invalid_argument("config: " + where +
                                  " gives both a resonance pair and a frequency");
    const auto& r = j.at("resonance");
    if (!r.is_array() || r.size() != 2)
      throw std::invalid_argument("config: " + where +
                                  ".resonance must be a [lower, upper] index pair");
    f.lower = r.at(0).get<int>();
    f.upper = r.at(1).get<int>();
  } else if (j.contains("frequency")) {
    f.frequency = j.at("frequency").get<double>();
  }
  f.detuning = j.value("detuning", 0.0);
  f.chirp = j.value("chirp", 0.0);
  f.shape = parse_shape(j.value("shape", std::string("sin2")));
  f.t_on = j.value("t_on", 0.0);
  f.t_off = j.at("t_off").get<double>();
  f.phase = j.value("phase", 0.0);
  return f;
}

}  // namespace detail

/// Build a runnable scenario from its JSON form. `data_dir` seeds the
/// molecule-database lookup when the molecule is given by name (empty: use
/// the ESMIX_MOLECULES environment variable or the built-in locations).
inline scenarios::ScenarioConfig scenario_from_json(const json& j,
                                                    const std::string& data_dir = "") {
  detail::check_keys(j, {"molecule", "levels", "fields", "run"}, "scenario");
  scenarios::ScenarioConfig cfg;

  const auto& mol = j.at("molecule");
  if (mol.is_string())
    cfg.molecule = db::load_molecule_by_name(mol.get<std::string>(), data_dir);
  else
    cfg.molecule = db::molecule_from_json(mol);

  if (!j.contains("levels") || !j.at("levels").is_array() || j.at("levels").empty())
    throw std::invalid_argument("config: scenario needs a non-empty levels array");
  int idx = 0;
  for (const auto& l : j.at("levels"))
    cfg.levels.push_back(detail::parse_level(l, "levels." + std::to_string(idx++)));

  if (!j.contains("fields") || !j.at("fields").is_array() || j.at("fields").empty())
    throw std::invalid_argument("config: scenario needs a non-empty fields array");
  idx = 0;
  for (const auto& f : j.at("fields"))
    cfg.fields.push_back(detail::parse_field(f, "fields." + std::to_string(idx++)));

  if (j.contains("run")) {
    const auto& r = j.at("run");
    detail::check_keys(
        r, {"initial_level", "duration", "samples", "rwa_cutoff", "rel_tol", "abs_tol"}, "run");
    cfg.initial_level = r.value("initial_level", 0);
    cfg.duration = r.value("duration", 0.0);
    cfg.samples = r.value("samples", 201);
    cfg.rwa_cutoff = r.value("rwa_cutoff", 50.0);
    cfg.ode.rel_tol = r.value("rel_tol", cfg.ode.rel_tol);
    cfg.ode.abs_tol = r.value("abs_tol", cfg.ode.abs_tol);
  }
  return cfg;
}

/// Apply one `path.to.key=value` override to the JSON tree. Path tokens that
/// are non-negative integers index into arrays; everything else is an object
/// key. The value is parsed as JSON when possible and kept as a string
/// otherwise. New object keys are allowed here and rejected later by
/// scenario_from_json, so a mistyped override fails loudly.
inline void apply_override(json& j, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0)
    throw std::invalid_argument("override must look like path.to.key=value, got \"" + spec +
                                "\"");
  const std::string path = spec.substr(0, eq);
  const std::string value = spec.substr(eq + 1);

  json* node = &j;
  std::size_t pos = 0;
  while (true) {
    const auto dot = path.find('.', pos);
    const std::string tok = path.substr(pos, dot == std::string::npos ? dot : dot - pos);
    if (tok.empty()) throw std::invalid_argument("override has an empty path segment: " + spec);
    const bool is_index = tok.find_first_not_of("0123456789") == std::string::npos;
    const bool last = dot == std::string::npos;

    if (is_index && node->is_array()) {
      const std::size_t i = std::stoul(tok);
      if (i >= node->size())
        throw std::invalid_argument("override index " + tok + " out of range in \"" + spec +
                                    "\"");
      node = &(*node)[i];
    } else {
      if (node->is_null()) *node = json::object();
      if (!node->is_object())
        throw std::invalid_argument("override path \"" + path + "\" walks through a value");
      node = &(*node)[tok];
    }
    if (last) break;
    pos = dot + 1;
  }

  const json parsed = json::parse(value, nullptr, false);
  *node = parsed.is_discarded() ? json(value) : parsed;
}

}  // namespace esmix::config

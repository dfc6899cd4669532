#pragma once

// Loading molecules from the on-disk database: one JSON file per species with
// a units tag ("MHz" or "cm-1"), rotational constants, dipole components and
// optional extra bands. The database directory is resolved from, in order,
// an explicit argument, the ESMIX_MOLECULES environment variable, a local
// ./data/molecules directory, and the build-time default.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "esmix/rotor.hpp"

namespace esmix::db {

inline constexpr double kMHzPerInverseCm = 29979.2458;

inline double unit_to_mhz(const std::string& units) {
  if (units == "MHz") return 1.0;
  if (units == "cm-1") return kMHzPerInverseCm;
  throw std::invalid_argument("molecule file: unknown units tag '" + units +
                              "' (expected \"MHz\" or \"cm-1\")");
}

inline rotor::Molecule molecule_from_json(const nlohmann::json& j) {
  rotor::Molecule mol;
  mol.name = j.at("name").get<std::string>();
  const double scale = unit_to_mhz(j.at("units").get<std::string>());
  auto constants = [&](const nlohmann::json& c) {
    rotor::RotConstants rc;
    rc.A = c.at("A").get<double>() * scale;
    rc.B = c.at("B").get<double>() * scale;
    rc.C = c.at("C").get<double>() * scale;
    return rc;
  };
  auto dipole = [](const nlohmann::json& d) {
    rotor::DipoleVector mu;
    mu.a = d.value("a", 0.0);
    mu.b = d.value("b", 0.0);
    mu.c = d.value("c", 0.0);
    return mu;
  };
  mol.constants = constants(j.at("constants"));
  mol.dipole = dipole(j.at("dipole"));
  auto band_key = [](const std::string& s) { return s == "ground" ? std::string() : s; };
  if (j.contains("bands"))
    for (const auto& b : j.at("bands"))
      mol.bands.push_back({b.at("name").get<std::string>(), constants(b.at("constants")),
                           b.value("origin", 0.0) * scale});
  if (j.contains("transition_dipoles"))
    for (const auto& d : j.at("transition_dipoles"))
      mol.transition_dipoles.push_back({band_key(d.at("from").get<std::string>()),
                                        band_key(d.at("to").get<std::string>()),
                                        dipole(d.at("dipole"))});
  mol.validate();
  return mol;
}

inline rotor::Molecule load_molecule(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open molecule file " + path.string());
  nlohmann::json j;
  in >> j;
  return molecule_from_json(j);
}

inline std::filesystem::path database_dir(const std::string& override_dir = std::string()) {
  namespace fs = std::filesystem;
  if (!override_dir.empty()) return override_dir;
  if (const char* env = std::getenv("ESMIX_MOLECULES"); env && *env) return env;
  if (fs::exists("data/molecules")) return "data/molecules";
#ifdef ESMIX_DATA_DIR
  return ESMIX_DATA_DIR;
#else
  return "data/molecules";
#endif
}

inline rotor::Molecule load_molecule_by_name(const std::string& name,
                                             const std::string& dir = std::string()) {
  const auto base = database_dir(dir);
  for (const auto& candidate : {base / (name + ".json"), std::filesystem::path(name)})
    if (std::filesystem::exists(candidate)) return load_molecule(candidate);
  throw std::runtime_error("molecule '" + name + "' not found under " + base.string());
}

}  // namespace esmix::db

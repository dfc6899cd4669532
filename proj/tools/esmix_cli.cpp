// Command-line front end. Every subcommand reads a strict JSON config,
// applies --set overrides, and writes CSV whose leading comments echo the
// effective config and its hash, so identical configs produce byte-identical
// files and every output identifies the run it came from.
//
// Exit codes: 0 success, 1 run finished but norm drift exceeded tolerance,
// 2 bad usage or config.

#include <atomic>
#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "esmix/config.hpp"
#include "esmix/csv.hpp"
#include "esmix/cycles.hpp"
#include "esmix/molecule_db.hpp"
#include "esmix/rotor.hpp"
#include "esmix/scenarios.hpp"
#include "esmix/threewave.hpp"

namespace {

using esmix::config::json;

constexpr double kNormTolerance = 1e-9;

struct CommonArgs {
  std::string config_path;
  std::string out_path;
  std::vector<std::string> overrides;
  int jobs = 1;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--config", a.config_path, "JSON configuration file")->required();
  cmd->add_option("--out", a.out_path, "output CSV path (stdout when absent)");
  cmd->add_option("--set", a.overrides, "override one config entry, path.to.key=value");
  cmd->add_option("--jobs", a.jobs, "worker threads for grid subcommands")
      ->check(CLI::PositiveNumber);
}

json effective_config(const CommonArgs& a) {
  json j = esmix::config::load_json(a.config_path);
  for (const auto& s : a.overrides) esmix::config::apply_override(j, s);
  return j;
}

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument("config: " + where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw std::invalid_argument("config: unknown key '" + key + "' in " + where);
  }
}

esmix::rotor::Molecule resolve_molecule(const json& j) {
  if (j.is_string()) return esmix::db::load_molecule_by_name(j.get<std::string>());
  return esmix::db::molecule_from_json(j);
}

void stamp(esmix::csv::Table& t, const char* sub, const json& cfg) {
  char hash[24];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(esmix::config::config_hash(cfg)));
  t.comments.push_back(std::string("esmix ") + sub);
  t.comments.push_back(std::string("config_hash=") + hash);
  t.comments.push_back(std::string("config=") + cfg.dump());
}

void emit(const esmix::csv::Table& t, const CommonArgs& a) {
  const std::string body = esmix::csv::render(t);
  if (a.out_path.empty())
    std::fwrite(body.data(), 1, body.size(), stdout);
  else
    esmix::csv::write_atomic(a.out_path, body);
}

std::string fmt(double x) { return esmix::csv::format_number(x); }
std::string fmt(int x) { return std::to_string(x); }

// Uniform grid parameters for dressed/scan subcommands.
struct Grid {
  double min = 0.0, max = 0.0;
  int points = 2;
  double at(int k) const {
    return points < 2 ? min : min + (max - min) * static_cast<double>(k) / (points - 1);
  }
};

Grid parse_grid(const json& j, const std::string& where, double dmin, double dmax, int dpoints) {
  Grid g{dmin, dmax, dpoints};
  if (j.contains(where)) {
    const auto& o = j.at(where);
    check_keys(o, {"min", "max", "points"}, where);
    g.min = o.value("min", dmin);
    g.max = o.value("max", dmax);
    g.points = o.value("points", dpoints);
  }
  if (g.points < 1) throw std::invalid_argument("config: " + where + ".points must be positive");
  return g;
}

// band, J, tau, Ka, Kc, irrep and energy of every level up to jmax, all bands.
int cmd_spectrum(const CommonArgs& a) {
  const json j = effective_config(a);
  check_keys(j, {"molecule", "jmax"}, "spectrum");
  const auto mol = resolve_molecule(j.at("molecule"));
  const int jmax = j.at("jmax").get<int>();
  if (jmax < 0) throw std::invalid_argument("config: jmax must be non-negative");

  esmix::csv::Table t;
  stamp(t, "spectrum", j);
  t.comments.push_back("units: energy_mhz MHz, energy_cm cm^-1; band origin included");
  t.columns = {"band", "J", "tau", "Ka", "Kc", "irrep", "energy_mhz", "energy_cm"};
  std::vector<std::string> bands = {""};
  for (const auto& b : mol.bands) bands.push_back(b.name);
  for (const auto& band : bands) {
    const double origin = mol.band_origin(band);
    for (int J = 0; J <= jmax; ++J)
      for (const auto& s : esmix::rotor::eigenstates(mol, J, band)) {
        const double mhz = origin + s.energy;
        t.rows.push_back({band, fmt(s.J), fmt(s.tau), fmt(s.Ka), fmt(s.Kc),
                          esmix::rotor::irrep_name(s.irrep), fmt(mhz),
                          fmt(mhz / esmix::db::kMHzPerInverseCm)});
      }
  }
  emit(t, a);
  return 0;
}

// Dressed-state energies of the closed rotating-frame triad against the
// loop phase, for both mirror forms.
int cmd_dressed(const CommonArgs& a) {
  const json j = effective_config(a);
  check_keys(j, {"couplings", "detunings", "phi"}, "dressed");
  std::vector<double> h = {1.0, 1.0, 1.0};
  std::vector<double> d = {0.0, 0.0};
  if (j.contains("couplings")) h = j.at("couplings").get<std::vector<double>>();
  if (j.contains("detunings")) d = j.at("detunings").get<std::vector<double>>();
  if (h.size() != 3) throw std::invalid_argument("config: couplings must be [h12, h23, h13]");
  if (d.size() != 2) throw std::invalid_argument("config: detunings must be [delta12, delta23]");
  const Grid phi = parse_grid(j, "phi", 0.0, 2.0 * std::numbers::pi, 121);

  esmix::csv::Table t;
  stamp(t, "dressed", j);
  t.comments.push_back("units: phi rad; energies rad per time unit; form +1/-1 mirror pair");
  t.columns = {"phi", "form", "e1", "e2", "e3"};
  for (int k = 0; k < phi.points; ++k) {
    esmix::threewave::ThreeLevelParams p;
    p.h12 = h[0];
    p.h23 = h[1];
    p.h13 = h[2];
    p.delta12 = d[0];
    p.delta23 = d[1];
    p.phi12 = phi.at(k);
    const Eigen::Vector3d ep = esmix::threewave::dressed_spectrum(p);
    const Eigen::Vector3d em = esmix::threewave::dressed_spectrum(p.mirrored());
    t.add_row({phi.at(k), 1.0, ep(0), ep(1), ep(2)});
    t.add_row({phi.at(k), -1.0, em(0), em(1), em(2)});
  }
  emit(t, a);
  return 0;
}

// Closed dipole triads up to jmax with their classification and the
// brute-force M-averaged loop signal for each polarization assignment.
int cmd_cycles(const CommonArgs& a) {
  const json j = effective_config(a);
  check_keys(j, {"molecule", "jmax", "band", "polarizations"}, "cycles");
  const auto mol = resolve_molecule(j.at("molecule"));
  const int jmax = j.at("jmax").get<int>();
  const std::string band = j.value("band", std::string());

  std::vector<std::array<esmix::Pol, 3>> assignments;
  if (j.contains("polarizations")) {
    for (const auto& s : j.at("polarizations")) {
      const std::string triple = s.get<std::string>();
      if (triple.size() != 3)
        throw std::invalid_argument("config: polarization entries are 3-letter, e.g. \"zxy\"");
      std::array<esmix::Pol, 3> pols;
      for (size_t i = 0; i < 3; ++i)
        pols[i] = esmix::config::parse_pol(std::string(1, triple[i]));
      assignments.push_back(pols);
    }
  } else {
    const std::array<esmix::Pol, 3> all = {esmix::Pol::x, esmix::Pol::y, esmix::Pol::z};
    for (esmix::Pol p0 : all)
      for (esmix::Pol p1 : all)
        for (esmix::Pol p2 : all) assignments.push_back({p0, p1, p2});
  }

  esmix::csv::Table t;
  stamp(t, "cycles", j);
  t.comments.push_back(
      "legs are (0->1), (1->2), (2->0); m_ratio = |chiral signal| / total magnitude");
  t.columns = {"state0",    "state1",    "state2", "types", "pols",         "m_closure",
               "sigma",     "selective", "m_ratio", "realizations"};
  auto label = [](const esmix::rotor::RotState& s) {
    return s.band.empty() ? s.label() : s.label() + ":" + s.band;
  };
  for (const auto& c : esmix::cycles::enumerate_cycles(mol, jmax, band)) {
    for (const auto& pols : assignments) {
      const auto cls = esmix::cycles::classify(c, pols);
      const auto avg = esmix::cycles::verify_by_m_average(mol, c, pols);
      std::string types, pol_str;
      for (int i = 0; i < 3; ++i) {
        types += esmix::axis_name(c.types[static_cast<size_t>(i)]);
        pol_str += esmix::pol_name(pols[static_cast<size_t>(i)]);
      }
      t.rows.push_back({label(c.states[0]), label(c.states[1]), label(c.states[2]), types,
                        pol_str, fmt(static_cast<int>(cls.m_closure)), fmt(cls.sigma_product),
                        fmt(static_cast<int>(cls.selective)), fmt(avg.ratio),
                        fmt(avg.realizations)});
    }
  }
  emit(t, a);
  return 0;
}

// Full M-degenerate scenario: time traces of the M-averaged level
// populations for both mirror forms and their per-level difference.
int cmd_propagate(const CommonArgs& a) {
  const json j = effective_config(a);
  const auto cfg = esmix::config::scenario_from_json(j);
  const auto res = esmix::scenarios::run_scenario(cfg);

  esmix::csv::Table t;
  stamp(t, "propagate", j);
  t.comments.push_back("units: time in t0 = 1/B; populations summed over each level's sublevels,"
                       " averaged over initial sublevels");
  t.comments.push_back("t0_seconds=" + fmt(res.t0_seconds));
  const double drift =
      std::max(res.plus().norm_drift, res.minus().norm_drift);
  t.comments.push_back("norm_drift=" + fmt(drift));

  const size_t nlev = res.basis.levels.size();
  std::vector<std::string> labels;
  for (const auto& s : res.basis.levels)
    labels.push_back(s.band.empty() ? s.label() : s.label() + "_" + s.band);
  std::string summary = "final_selectivity:";
  for (size_t k = 0; k < nlev; ++k)
    summary += " " + labels[k] + "=" + fmt(res.final_selectivity[k]);
  t.comments.push_back(summary);

  t.columns = {"time"};
  for (const auto& l : labels) t.columns.push_back("p_plus_" + l);
  for (const auto& l : labels) t.columns.push_back("p_minus_" + l);
  for (const auto& l : labels) t.columns.push_back("sel_" + l);
  for (size_t i = 0; i < res.times.size(); ++i) {
    std::vector<double> row;
    row.reserve(1 + 3 * nlev);
    row.push_back(res.times[i]);
    for (size_t k = 0; k < nlev; ++k) row.push_back(res.plus().populations[i][k]);
    for (size_t k = 0; k < nlev; ++k) row.push_back(res.minus().populations[i][k]);
    for (size_t k = 0; k < nlev; ++k) row.push_back(res.selectivity[i][k]);
    t.add_row(row);
  }
  emit(t, a);

  std::fprintf(stderr, "esmix propagate: duration %.6g t0 (%.6g s), norm drift %.3g\n",
               res.duration, res.duration * res.t0_seconds, drift);
  for (size_t k = 0; k < nlev; ++k)
    std::fprintf(stderr, "  %-12s P+ %.6f  P- %.6f  selectivity %.6f\n", labels[k].c_str(),
                 res.plus().populations.back()[k], res.minus().populations.back()[k],
                 res.final_selectivity[k]);
  return drift <= kNormTolerance ? 0 : 1;
}

// Selectivity of the three-level scheme over a static-detuning grid, one
// block per loop phase. Grid points are independent; --jobs shards them.
int cmd_scan(const CommonArgs& a) {
  const json j = effective_config(a);
  check_keys(j, {"scheme", "coupling", "shape", "loop_phases", "delta"}, "scan");
  const std::string scheme_name = j.at("scheme").get<std::string>();
  esmix::threewave::Scheme scheme;
  if (scheme_name == "sequential")
    scheme = esmix::threewave::Scheme::sequential;
  else if (scheme_name == "simultaneous")
    scheme = esmix::threewave::Scheme::simultaneous;
  else
    throw std::invalid_argument("config: scheme must be sequential or simultaneous");

  std::vector<double> phis = {0.0, std::numbers::pi / 2};
  if (j.contains("loop_phases")) phis = j.at("loop_phases").get<std::vector<double>>();
  if (phis.empty()) throw std::invalid_argument("config: loop_phases must be non-empty");
  const Grid delta = parse_grid(j, "delta", -0.5, 0.5, 101);

  esmix::threewave::SchemeParams sp;
  sp.h = j.value("coupling", 0.3);
  sp.shape = esmix::config::parse_shape(j.value("shape", "flat"));

  struct Task {
    double phi = 0.0, delta = 0.0;
    esmix::threewave::ScanPoint pt;
    double drift = 0.0;
  };
  std::vector<Task> tasks;
  for (double phi : phis)
    for (int k = 0; k < delta.points; ++k) tasks.push_back({phi, delta.at(k), {}, 0.0});

  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1)) {
      Task& task = tasks[i];
      esmix::threewave::SchemeParams p = sp;
      p.loop_phase = task.phi;
      auto [pulses, T] = esmix::threewave::make_scheme(scheme, p);
      esmix::threewave::Drive drive;
      drive.pulses = std::move(pulses);
      drive.delta12 = drive.delta23 = task.delta;
      Eigen::Vector3cd psi0;
      psi0 << 1.0, 0.0, 0.0;
      const auto rp = esmix::threewave::propagate(drive, 0.0, T, psi0, 0);
      const auto rm = esmix::threewave::propagate(drive.mirrored(), 0.0, T, psi0, 0);
      task.pt.delta = task.delta;
      task.pt.p_plus = std::norm(rp.amplitudes(1));
      task.pt.p_minus = std::norm(rm.amplitudes(1));
      task.pt.selectivity = esmix::threewave::selectivity(task.pt.p_plus, task.pt.p_minus);
      task.drift = std::max(rp.norm_drift, rm.norm_drift);
    }
  };
  const size_t nthreads =
      std::min<size_t>(static_cast<size_t>(a.jobs), std::max<size_t>(tasks.size(), 1));
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (size_t i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  esmix::csv::Table t;
  stamp(t, "scan", j);
  t.comments.push_back("units: loop_phase rad; delta and coupling rad per time unit;"
                       " populations on the target state |2>");
  t.columns = {"loop_phase", "delta", "p_plus", "p_minus", "selectivity"};
  double drift = 0.0;
  for (const auto& task : tasks) {
    t.add_row({task.phi, task.pt.delta, task.pt.p_plus, task.pt.p_minus, task.pt.selectivity});
    drift = std::max(drift, task.drift);
  }
  emit(t, a);
  return drift <= kNormTolerance ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"enantio-selective three-wave mixing of chiral rotors"};
  app.require_subcommand(1);

  CommonArgs args[5];
  CLI::App* sub[5] = {
      app.add_subcommand("spectrum", "rotational level table of a molecule"),
      app.add_subcommand("dressed", "dressed-state energies against the loop phase"),
      app.add_subcommand("cycles", "closed dipole triads and their selection-rule verdicts"),
      app.add_subcommand("propagate", "full M-degenerate scenario time traces"),
      app.add_subcommand("scan", "three-level selectivity over a detuning grid"),
  };
  for (int i = 0; i < 5; ++i) add_common(sub[i], args[i]);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sub[0]->parsed()) return cmd_spectrum(args[0]);
    if (sub[1]->parsed()) return cmd_dressed(args[1]);
    if (sub[2]->parsed()) return cmd_cycles(args[2]);
    if (sub[3]->parsed()) return cmd_propagate(args[3]);
    if (sub[4]->parsed()) return cmd_scan(args[4]);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "esmix: %s\n", e.what());
    return 2;
  }
  return 2;
}

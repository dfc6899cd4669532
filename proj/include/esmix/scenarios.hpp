#pragma once

// Real-molecule, M-degenerate simulations: build the interaction-picture
// Hamiltonian over a chosen set of rotational levels (each fanned over its
// 2J+1 sublevels), drive it with polarized pulses, propagate both mirror
// forms, and reduce to M-averaged level populations and per-level
// selectivity. This module owns all unit conversions.
//
// Unit conventions, used throughout:
//   - time unit      t0 = 1/B with B the default-band rotational constant
//                    taken in Hz (menthol: 1.44 ns, carvone: 1.52 ns,
//                    HSOH: 65.4 ps)
//   - frequencies    angular, rad/t0; a level at energy E (MHz) carries the
//                    phase rate 2*pi*E/B_MHz
//   - couplings      rad/t0; a dipole element mu (Debye) in a field E gives
//                    the half-Rabi rate mu*E/(2 hbar) * t0
//
// Every field couples every dipole-allowed sublevel pair, not only its
// named resonance; off-resonant terms keep their oscillatory phase
// exp(i*Delta*t) and are dropped only beyond a configurable rate cutoff
// (they are what produces the fast non-resonant population wiggles seen at
// high intensity).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "esmix/coupling.hpp"
#include "esmix/ode.hpp"
#include "esmix/rotor.hpp"
#include "esmix/threewave.hpp"

namespace esmix::scenarios {

using cplx = std::complex<double>;

inline constexpr double kEpsilon0 = 8.8541878128e-12;    // F/m
inline constexpr double kSpeedOfLight = 2.99792458e8;    // m/s
inline constexpr double kPlanck = 6.62607015e-34;        // J s
inline constexpr double kHbar = kPlanck / (2.0 * std::numbers::pi);  // J s
inline constexpr double kDebyeSI = 3.33564e-30;          // C m

/// Peak electric field (V/m) of a plane wave with the given intensity in
/// W/cm^2, from I = (1/2) eps0 c E^2.
inline double field_amplitude(double intensity_w_cm2) {
  if (intensity_w_cm2 < 0.0)
    throw std::domain_error("field_amplitude: intensity must be non-negative");
  return std::sqrt(2.0 * intensity_w_cm2 * 1e4 / (kEpsilon0 * kSpeedOfLight));
}

/// Natural time unit t0 = 1/B in seconds, with B the default-band constant
/// expressed in Hz.
inline double time_unit(const rotor::Molecule& mol) {
  return 1.0 / (mol.constants.B * 1e6);
}

/// Dimensionless drive strength mu E / (h B): dipole component (Debye) times
/// peak field over Planck constant times the rotational constant (Hz).
inline double mu_field_over_hb(double mu_debye, double intensity_w_cm2, double B_MHz) {
  return mu_debye * kDebyeSI * field_amplitude(intensity_w_cm2) / (kPlanck * B_MHz * 1e6);
}

/// One rotational level to include in the basis, by its J_{Ka Kc} label and
/// (optionally) vibrational band.
struct LevelSpec {
  int J = 0, Ka = 0, Kc = 0;
  std::string band;
};

/// One driving field: polarization, intensity, carrier (either named by a
/// pair of level indices or given explicitly), envelope and phase. A nonzero
/// `chirp` sweeps the carrier linearly from -chirp to +chirp relative to its
/// nominal value across the pulse support.
struct FieldSpec {
  Pol polarization = Pol::z;
  double intensity = 0.0;  // W/cm^2
  int lower = -1, upper = -1;  // resonance: indices into ScenarioConfig::levels
  double frequency = 0.0;  // explicit carrier (rad/t0) when no resonance named
  double detuning = 0.0;   // static carrier offset, rad/t0
  double chirp = 0.0;      // sweep half-width delta0, rad/t0
  threewave::Shape shape = threewave::Shape::sin2;
  double t_on = 0.0, t_off = 0.0;  // support, t0 units
  double phase = 0.0;              // carrier phase, rad

  bool has_resonance() const { return lower >= 0 || upper >= 0; }
  threewave::Envelope envelope() const { return {shape, t_on, t_off}; }
};

struct ScenarioConfig {
  rotor::Molecule molecule;
  std::vector<LevelSpec> levels;
  std::vector<FieldSpec> fields;
  int initial_level = 0;
  double duration = 0.0;     // t0 units; 0 = latest pulse switch-off
  int samples = 201;         // output grid points (including both ends)
  double rwa_cutoff = 50.0;  // rad/t0; faster interaction terms are dropped
  ode::Options ode;
};

/// The working basis: each requested level fanned over M = -J..J, together
/// with the material phase rate of every sublevel.
struct Basis {
  std::vector<rotor::RotState> levels;  // representatives (M = 0)
  std::vector<rotor::RotState> states;  // with M set
  std::vector<int> level_of;            // per basis state
  std::vector<int> offset;              // first basis index of each level
  std::vector<double> omega;            // phase rates, rad/t0 (band origin included)

  int size() const { return static_cast<int>(states.size()); }
  int index(int level, int M) const {
    return offset[static_cast<size_t>(level)] + M + levels[static_cast<size_t>(level)].J;
  }
};

inline Basis make_basis(const ScenarioConfig& cfg) {
  if (cfg.levels.empty()) throw std::invalid_argument("scenario: no levels given");
  Basis b;
  const double B = cfg.molecule.constants.B;
  for (const auto& ls : cfg.levels) {
    rotor::RotState s = rotor::find_state(cfg.molecule, ls.J, ls.Ka, ls.Kc, ls.band);
    for (const auto& prev : b.levels)
      if (prev.J == s.J && prev.Ka == s.Ka && prev.Kc == s.Kc && prev.band == s.band)
        throw std::invalid_argument("scenario: duplicate level " + s.label());
    const double e_mhz = s.energy + cfg.molecule.band_origin(ls.band);
    b.offset.push_back(b.size());
    for (int M = -s.J; M <= s.J; ++M) {
      b.states.push_back(s.with_m(M));
      b.level_of.push_back(static_cast<int>(b.levels.size()));
      b.omega.push_back(2.0 * std::numbers::pi * e_mhz / B);
    }
    b.levels.push_back(std::move(s));
  }
  return b;
}

/// Assembled time-dependent Hamiltonian for one enantiomer: a list of
/// retained interaction terms H(p,q) += amp * env(t) * exp(i(freq*t + s*zeta))
/// where zeta is the accumulated phase of a swept carrier.
struct System {
  Basis basis;
  struct Drive {
    threewave::Envelope env;
    double chirp = 0.0;
  };
  std::vector<Drive> drives;  // one per config field
  struct Term {
    int p = 0, q = 0;    // row, column (p is the bra)
    cplx amp;            // half-Rabi element with the carrier phase folded in
    double freq = 0.0;   // static oscillation rate, rad/t0
    double csign = 1.0;  // sign of the swept-carrier phase contribution
    int field = 0;
  };
  std::vector<Term> terms;

  /// Accumulated phase of a linearly swept carrier relative to its nominal
  /// frequency: integral of chirp*(2u/T - 1) from pulse start.
  static double swept_phase(const Drive& d, double t) {
    const double T = d.env.duration();
    if (T <= 0.0) return 0.0;
    const double u = std::clamp(t - d.env.t_on, 0.0, T);
    return d.chirp * (u * u / T - u);
  }

  void hamiltonian(double t, Eigen::MatrixXcd& H) const {
    const int n = basis.size();
    H.setZero(n, n);
    for (const auto& tm : terms) {
      const auto& d = drives[static_cast<size_t>(tm.field)];
      const double e = d.env.value(t);
      if (e == 0.0) continue;
      double ph = tm.freq * t;
      if (d.chirp != 0.0) ph += tm.csign * swept_phase(d, t);
      const cplx v = tm.amp * e * std::polar(1.0, ph);
      H(tm.p, tm.q) += v;
      H(tm.q, tm.p) += std::conj(v);
    }
  }

  /// Envelope kinks inside (0, t_end), ascending; integration restarts there.
  std::vector<double> breakpoints(double t_end) const {
    std::vector<double> cuts;
    for (const auto& d : drives)
      for (double b : d.env.breakpoints())
        if (b > 0.0 && b < t_end) cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double a, double b) {
                             return std::abs(a - b) < 1e-12 * (1.0 + std::abs(a));
                           }),
               cuts.end());
    return cuts;
  }
};

/// Build the interaction-picture system for one enantiomer. Every field is
/// expanded over every dipole-allowed sublevel pair; both half-oscillations
/// of the cosine carrier are kept whenever their net rate is within the
/// configured cutoff. Throws if a named resonance cannot be driven by its
/// field's polarization.
inline System build_system(const ScenarioConfig& cfg, coupling::Enantiomer en) {
  System sys;
  sys.basis = make_basis(cfg);
  const auto& mol = cfg.molecule;
  const double t0 = time_unit(mol);
  const int n = sys.basis.size();
  const int nlevels = static_cast<int>(sys.basis.levels.size());

  for (const auto& f : cfg.fields) {
    if (!(f.t_off > f.t_on))
      throw std::invalid_argument("scenario field: empty pulse support");
    double carrier = 0.0;
    if (f.has_resonance()) {
      if (f.lower < 0 || f.upper < 0 || f.lower >= nlevels || f.upper >= nlevels ||
          f.lower == f.upper)
        throw std::invalid_argument("scenario field: resonance indices out of range");
      const auto& lo = sys.basis.levels[static_cast<size_t>(f.lower)];
      const auto& up = sys.basis.levels[static_cast<size_t>(f.upper)];
      double best = 0.0;
      for (int Mb = -up.J; Mb <= up.J; ++Mb)
        for (int Mk = -lo.J; Mk <= lo.J; ++Mk)
          best = std::max(best, std::abs(coupling::transition_element(
                                             mol, en, up.with_m(Mb), lo.with_m(Mk),
                                             f.polarization)
                                             .value));
      if (best == 0.0)
        throw std::invalid_argument("scenario field: resonance " + lo.label() + " -> " +
                                    up.label() + " is dipole-forbidden for polarization " +
                                    pol_name(f.polarization));
      carrier = std::abs(sys.basis.omega[static_cast<size_t>(sys.basis.index(f.upper, 0))] -
                         sys.basis.omega[static_cast<size_t>(sys.basis.index(f.lower, 0))]);
      if (carrier == 0.0)
        throw std::invalid_argument("scenario field: named resonance is degenerate");
    } else {
      if (!(f.frequency > 0.0))
        throw std::invalid_argument(
            "scenario field: needs a resonance pair or a positive carrier frequency");
      carrier = f.frequency;
    }
    carrier += f.detuning;

    const double hscale = kDebyeSI * field_amplitude(f.intensity) * t0 / (2.0 * kHbar);
    sys.drives.push_back({f.envelope(), f.chirp});
    const int fidx = static_cast<int>(sys.drives.size()) - 1;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const auto& sp = sys.basis.states[static_cast<size_t>(p)];
        const auto& sq = sys.basis.states[static_cast<size_t>(q)];
        if (sp.band != sq.band && !mol.band_dipole(sp.band, sq.band)) continue;
        const cplx elem = coupling::transition_element(mol, en, sp, sq, f.polarization).value;
        if (std::abs(elem) < 1e-15) continue;
        const double w = sys.basis.omega[static_cast<size_t>(p)] -
                         sys.basis.omega[static_cast<size_t>(q)];
        for (double s : {+1.0, -1.0}) {
          const double freq = w + s * carrier;
          if (std::abs(freq) > cfg.rwa_cutoff) continue;
          sys.terms.push_back(
              {p, q, hscale * elem * std::polar(1.0, s * f.phase), freq, s, fidx});
        }
      }
    }
  }
  return sys;
}

/// Level-resolved population time series: for each run (one per initial
/// sublevel) sum |amplitude|^2 over the sublevels of each level, then average
/// over the runs. With a J=0 initial level this is the plain per-level
/// probability.
inline std::vector<std::vector<double>> m_averaged_populations(
    const Basis& basis, const std::vector<std::vector<Eigen::VectorXcd>>& amplitudes) {
  if (amplitudes.empty()) return {};
  const size_t runs = amplitudes.size();
  const size_t nsamples = amplitudes.front().size();
  const size_t nlevels = basis.levels.size();
  std::vector<std::vector<double>> out(nsamples, std::vector<double>(nlevels, 0.0));
  for (const auto& run : amplitudes) {
    for (size_t s = 0; s < nsamples; ++s) {
      const auto& v = run[s];
      for (int i = 0; i < basis.size(); ++i)
        out[s][static_cast<size_t>(basis.level_of[static_cast<size_t>(i)])] +=
            std::norm(v(i)) / static_cast<double>(runs);
    }
  }
  return out;
}

struct ScenarioResult {
  std::vector<double> times;  // t0 units
  struct Trace {
    std::vector<std::vector<Eigen::VectorXcd>> amplitudes;  // [initial sublevel][sample]
    std::vector<std::vector<double>> populations;           // [sample][level], M-averaged
    double norm_drift = 0.0;
    ode::Stats stats;
  };
  std::array<Trace, 2> enantiomer;               // [0]: reference form, [1]: mirror form
  std::vector<std::vector<double>> selectivity;  // [sample][level], |P+ - P-|
  std::vector<double> final_selectivity;         // [level]
  Basis basis;
  double duration = 0.0;    // t0 units
  double t0_seconds = 0.0;  // one time unit in seconds

  const Trace& plus() const { return enantiomer[0]; }
  const Trace& minus() const { return enantiomer[1]; }
};

/// Propagate both enantiomers from the configured initial level (one run per
/// initial M sublevel) and reduce to M-averaged level populations and
/// per-level selectivity on a uniform output grid.
inline ScenarioResult run_scenario(const ScenarioConfig& cfg) {
  if (cfg.samples < 2) throw std::invalid_argument("scenario: need at least 2 samples");
  if (cfg.fields.empty()) throw std::invalid_argument("scenario: no fields given");
  if (cfg.initial_level < 0 ||
      cfg.initial_level >= static_cast<int>(cfg.levels.size()))
    throw std::invalid_argument("scenario: initial level out of range");

  const std::array<System, 2> systems = {build_system(cfg, coupling::Enantiomer::plus()),
                                         build_system(cfg, coupling::Enantiomer::minus())};
  ScenarioResult res;
  res.basis = systems[0].basis;
  double t_end = cfg.duration;
  if (t_end <= 0.0)
    for (const auto& f : cfg.fields) t_end = std::max(t_end, f.t_off);
  if (t_end <= 0.0) throw std::invalid_argument("scenario: zero duration");
  res.duration = t_end;
  res.t0_seconds = time_unit(cfg.molecule);

  res.times.reserve(static_cast<size_t>(cfg.samples));
  for (int k = 0; k < cfg.samples; ++k)
    res.times.push_back(t_end * static_cast<double>(k) / (cfg.samples - 1));

  const int J0 = res.basis.levels[static_cast<size_t>(cfg.initial_level)].J;
  for (int e = 0; e < 2; ++e) {
    const System& sys = systems[static_cast<size_t>(e)];
    auto& tr = res.enantiomer[static_cast<size_t>(e)];
    const int n = sys.basis.size();
    Eigen::MatrixXcd H(n, n);

    std::vector<double> cuts = {0.0};
    for (double b : sys.breakpoints(t_end)) cuts.push_back(b);
    cuts.push_back(t_end);

    for (int m0 = -J0; m0 <= J0; ++m0) {
      Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(n);
      psi(sys.basis.index(cfg.initial_level, m0)) = 1.0;
      std::vector<Eigen::VectorXcd> trace(res.times.size());
      size_t emitted = 0;
      auto observe = [&](double, const Eigen::VectorXcd& v) {
        if (emitted < trace.size()) trace[emitted++] = v;
      };
      size_t gpos = 0;
      for (size_t s = 0; s + 1 < cuts.size(); ++s) {
        const double lo = cuts[s], hi = cuts[s + 1];
        std::vector<double> seg_grid;
        while (gpos < res.times.size() &&
               res.times[gpos] <= hi + 1e-15 * (1.0 + std::abs(hi))) {
          seg_grid.push_back(res.times[gpos]);
          ++gpos;
        }
        // evaluation times landing on a segment edge are nudged inside, so
        // abutting pulses never both read as on at the shared instant
        const double theta = 1e-12 * (hi - lo);
        auto f = [&sys, &H, lo, hi, theta](double t, const Eigen::VectorXcd& v,
                                           Eigen::VectorXcd& dv) {
          const double tt = std::clamp(t, lo + theta, hi - theta);
          sys.hamiltonian(tt, H);
          dv.noalias() = H * v;
          dv *= cplx{0.0, -1.0};
        };
        const auto st = ode::integrate(f, lo, hi, psi, seg_grid, observe, cfg.ode);
        tr.stats.steps += st.steps;
        tr.stats.rejected += st.rejected;
        tr.stats.evals += st.evals;
      }
      if (emitted != trace.size())
        throw std::runtime_error("scenario: output grid not fully emitted");
      tr.norm_drift = std::max(tr.norm_drift, std::abs(psi.norm() - 1.0));
      tr.amplitudes.push_back(std::move(trace));
    }
    tr.populations = m_averaged_populations(sys.basis, tr.amplitudes);
  }

  const size_t nlevels = res.basis.levels.size();
  res.selectivity.assign(res.times.size(), std::vector<double>(nlevels, 0.0));
  for (size_t s = 0; s < res.times.size(); ++s)
    for (size_t l = 0; l < nlevels; ++l)
      res.selectivity[s][l] =
          std::abs(res.plus().populations[s][l] - res.minus().populations[s][l]);
  res.final_selectivity = res.selectivity.back();
  return res;
}

}  // namespace esmix::scenarios

#pragma once

// Closed-loop three-level dynamics: rotating-frame Hamiltonians for a triad
// driven on all three legs, pulse envelopes, adaptive propagation, composite
// pulse schemes, chirped sweeps and detuning scans. The mirror-image species
// enters through a sign flip of one leg's coupling, equivalent to shifting
// the loop phase by pi.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "esmix/ode.hpp"

namespace esmix::threewave {

using cplx = std::complex<double>;

/// Static rotating-frame parameters of one triad. Couplings are angular
/// rates (rad per time unit); the leg 13 detuning is fixed by loop closure,
/// delta13 = delta12 + delta23.
struct ThreeLevelParams {
  double h12 = 0, h13 = 0, h23 = 0;
  double phi12 = 0, phi13 = 0, phi23 = 0;
  double delta12 = 0, delta23 = 0;
  int flip_leg = 23;  // leg whose sign distinguishes the mirror forms

  double loop_phase() const { return phi12 + phi23 - phi13; }
  double delta13() const { return delta12 + delta23; }

  ThreeLevelParams mirrored() const {
    ThreeLevelParams p = *this;
    switch (flip_leg) {
      case 12: p.phi12 += std::numbers::pi; break;
      case 13: p.phi13 += std::numbers::pi; break;
      case 23: p.phi23 += std::numbers::pi; break;
      default: throw std::invalid_argument("ThreeLevelParams: flip_leg must be 12, 13 or 23");
    }
    return p;
  }
};

/// Rotating-frame Hamiltonian on basis (|1>, |2>, |3>).
inline Eigen::Matrix3cd rwa_hamiltonian(const ThreeLevelParams& p) {
  const cplx i{0.0, 1.0};
  const cplx g12 = p.h12 * std::exp(i * p.phi12);
  const cplx g13 = p.h13 * std::exp(i * p.phi13);
  const cplx g23 = p.h23 * std::exp(i * p.phi23);
  Eigen::Matrix3cd H;
  H << cplx(p.delta12), g12, g13,
      std::conj(g12), cplx(0.0), g23,
      std::conj(g13), std::conj(g23), cplx(-p.delta23);
  return H;
}

/// Dressed-state energies, ascending.
inline Eigen::Vector3d dressed_spectrum(const ThreeLevelParams& p) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(rwa_hamiltonian(p),
                                                     Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

enum class Shape { flat, sin2, smoothtop, gauss };

/// Pulse envelope with unit peak on the support [t_on, t_off].
struct Envelope {
  Shape shape = Shape::flat;
  double t_on = 0.0, t_off = 1.0;

  double duration() const { return t_off - t_on; }

  double value(double t) const {
    const double T = duration();
    if (t < t_on || t > t_off || T <= 0.0) return 0.0;
    const double u = t - t_on;
    switch (shape) {
      case Shape::flat:
        return 1.0;
      case Shape::sin2: {
        const double s = std::sin(std::numbers::pi * u / T);
        return s * s;
      }
      case Shape::smoothtop: {
        const double ramp = 0.1 * T;
        if (u < ramp) {
          const double s = std::sin(0.5 * std::numbers::pi * u / ramp);
          return s * s;
        }
        if (u > T - ramp) {
          const double s = std::sin(0.5 * std::numbers::pi * (T - u) / ramp);
          return s * s;
        }
        return 1.0;
      }
      case Shape::gauss: {
        const double mu = 0.5 * T, sigma = T / 6.0;
        const double x = (u - mu) / sigma;
        return std::exp(-0.5 * x * x);
      }
    }
    return 0.0;
  }

  /// Integral of the profile over its support.
  double area() const {
    const double T = duration();
    switch (shape) {
      case Shape::flat: return T;
      case Shape::sin2: return 0.5 * T;
      case Shape::smoothtop: return 0.9 * T;
      case Shape::gauss: {
        const double sigma = T / 6.0;
        return sigma * std::sqrt(2.0 * std::numbers::pi) * std::erf(3.0 / std::sqrt(2.0));
      }
    }
    return 0.0;
  }

  /// Times where the profile or its slope is discontinuous; integration is
  /// restarted there.
  std::vector<double> breakpoints() const {
    if (shape == Shape::smoothtop) {
      const double ramp = 0.1 * duration();
      return {t_on, t_on + ramp, t_off - ramp, t_off};
    }
    return {t_on, t_off};
  }
};

/// One driving pulse on one leg; the applied coupling is
/// peak * envelope(t) * exp(i phase).
struct Pulse {
  int leg = 12;  // 12, 13 or 23
  Envelope env;
  double peak = 0.0;
  double phase = 0.0;

  /// Rotation area integral(h dt); a two-level flat pulse of area pi/2
  /// inverts the populations.
  double area() const { return peak * env.area(); }
};

inline void check_leg(int leg) {
  if (leg != 12 && leg != 13 && leg != 23)
    throw std::invalid_argument("leg must be 12, 13 or 23");
}

inline Pulse make_pulse(int leg, Shape shape, double t_on, double t_off, double rotation_area,
                        double phase = 0.0) {
  check_leg(leg);
  Pulse p;
  p.leg = leg;
  p.env = Envelope{shape, t_on, t_off};
  if (p.env.area() <= 0.0) throw std::invalid_argument("make_pulse: empty envelope");
  p.peak = rotation_area / p.env.area();
  p.phase = phase;
  return p;
}

/// A full driving schedule: pulses plus (possibly swept) detunings.
struct Drive {
  std::vector<Pulse> pulses;
  double delta12 = 0.0, delta23 = 0.0;
  std::function<double(double)> delta12_t, delta23_t;  // override statics when set
  int flip_leg = 23;

  Drive mirrored() const {
    check_leg(flip_leg);
    Drive d = *this;
    for (auto& p : d.pulses)
      if (p.leg == flip_leg) p.phase += std::numbers::pi;
    return d;
  }

  Eigen::Matrix3cd hamiltonian(double t) const {
    ThreeLevelParams p;
    p.delta12 = delta12_t ? delta12_t(t) : delta12;
    p.delta23 = delta23_t ? delta23_t(t) : delta23;
    Eigen::Matrix3cd H = rwa_hamiltonian(p);
    const cplx i{0.0, 1.0};
    for (const auto& pl : pulses) {
      const cplx g = pl.peak * pl.env.value(t) * std::exp(i * pl.phase);
      const int r = pl.leg / 10 - 1, c = pl.leg % 10 - 1;
      H(r, c) += g;
      H(c, r) += std::conj(g);
    }
    return H;
  }
};

struct Propagation {
  std::vector<double> times;
  std::vector<std::array<double, 3>> populations;
  Eigen::Vector3cd amplitudes = Eigen::Vector3cd::Zero();
  double norm_drift = 0.0;  // max |<psi|psi> - <psi0|psi0>| over the samples
  ode::Stats stats;
};

/// Integrate i d psi/dt = H(t) psi over [t0, t1], sampling populations at
/// `samples`+1 uniform times (none when samples = 0).
inline Propagation propagate(const Drive& drive, double t0, double t1,
                             Eigen::Vector3cd psi0, int samples = 0,
                             const ode::Options& opt = ode::Options()) {
  for (const auto& p : drive.pulses) check_leg(p.leg);
  std::vector<double> cuts = {t0, t1};
  for (const auto& p : drive.pulses)
    for (double b : p.env.breakpoints())
      if (b > t0 && b < t1) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [&](double a, double b) { return std::abs(a - b) < 1e-12 * (1.0 + std::abs(a)); }),
             cuts.end());

  std::vector<double> grid;
  if (samples > 0) {
    grid.reserve(samples + 1);
    for (int k = 0; k <= samples; ++k)
      grid.push_back(t0 + (t1 - t0) * static_cast<double>(k) / samples);
  }

  Propagation out;
  const double norm0 = psi0.squaredNorm();
  Eigen::VectorXcd y = psi0;
  auto observe = [&](double t, const Eigen::VectorXcd& v) {
    out.times.push_back(t);
    out.populations.push_back({std::norm(v(0)), std::norm(v(1)), std::norm(v(2))});
    out.norm_drift = std::max(out.norm_drift, std::abs(v.squaredNorm() - norm0));
  };

  std::size_t gpos = 0;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double lo = cuts[s], hi = cuts[s + 1];
    std::vector<double> seg_grid;
    while (gpos < grid.size() && grid[gpos] <= hi + 1e-15 * (1.0 + std::abs(hi))) {
      seg_grid.push_back(grid[gpos]);
      ++gpos;
    }
    // Stage times landing exactly on a segment edge are nudged inside so
    // that abutting pulses never overlap at the shared instant; within a
    // segment every envelope is smooth, so the nudge is harmless.
    const double theta = 1e-12 * (hi - lo);
    auto f = [&drive, lo, hi, theta](double t, const Eigen::VectorXcd& v, Eigen::VectorXcd& dv) {
      const double tt = std::clamp(t, lo + theta, hi - theta);
      dv = cplx{0.0, -1.0} * (drive.hamiltonian(tt) * v);
    };
    const auto st = ode::integrate(f, lo, hi, y, seg_grid,
                                   samples > 0 ? std::function<void(double, const Eigen::VectorXcd&)>(observe)
                                               : nullptr,
                                   opt);
    out.stats.steps += st.steps;
    out.stats.rejected += st.rejected;
    out.stats.evals += st.evals;
  }
  out.amplitudes = y;
  out.norm_drift = std::max(out.norm_drift, std::abs(y.squaredNorm() - norm0));
  return out;
}

/// |difference| of the target-state populations reached by the two mirror
/// forms.
inline double selectivity(double p_plus, double p_minus) { return std::abs(p_plus - p_minus); }

enum class Scheme { sequential, simultaneous };

struct SchemeParams {
  double h = 0.3;           // uniform peak coupling (rad per time unit)
  double loop_phase = 0.0;  // placed on leg 12
  Shape shape = Shape::flat;
};

/// Pulse train of one enantio-selective scheme starting at t = 0; returns
/// the pulses and the total duration.
///
/// sequential: half-area pulse on 13, full on 12, half on 23, back to back;
/// with the loop phase at pi/2 the target population is 1 for one mirror
/// form and 0 for the other.
/// simultaneous: all legs driven together with rotation area 4 pi/(3 sqrt 3)
/// each, the smallest area that fully transfers population at loop phase
/// pi/2 and equal couplings.
inline std::pair<std::vector<Pulse>, double> make_scheme(Scheme s, const SchemeParams& sp) {
  if (sp.h <= 0.0) throw std::invalid_argument("make_scheme: coupling must be positive");
  const double pi = std::numbers::pi;
  std::vector<Pulse> pulses;
  if (s == Scheme::sequential) {
    const double unit = Envelope{sp.shape, 0.0, 1.0}.area();  // area per unit duration
    const double t1 = (pi / 4) / (sp.h * unit);
    const double t2 = (pi / 2) / (sp.h * unit);
    Pulse a = make_pulse(13, sp.shape, 0.0, t1, pi / 4);
    Pulse b = make_pulse(12, sp.shape, t1, t1 + t2, pi / 2, sp.loop_phase);
    Pulse c = make_pulse(23, sp.shape, t1 + t2, t1 + t2 + t1, pi / 4);
    pulses = {a, b, c};
    return {pulses, 2 * t1 + t2};
  }
  const double area = 4.0 * pi / (3.0 * std::sqrt(3.0));
  const double unit = Envelope{sp.shape, 0.0, 1.0}.area();
  const double T = area / (sp.h * unit);
  pulses.push_back(make_pulse(12, sp.shape, 0.0, T, area, sp.loop_phase));
  pulses.push_back(make_pulse(13, sp.shape, 0.0, T, area));
  pulses.push_back(make_pulse(23, sp.shape, 0.0, T, area));
  return {pulses, T};
}

struct ScanPoint {
  double delta = 0.0;       // common one-photon detuning of legs 12 and 23
  double p_plus = 0.0;      // target population, reference form
  double p_minus = 0.0;     // target population, mirror form
  double selectivity = 0.0;
  double norm_drift = 0.0;  // worse of the two propagations
};

/// Sweep a common static detuning on legs 12 and 23 and record the
/// target-state (|2>) population of both mirror forms after the scheme.
inline std::vector<ScanPoint> detuning_scan(Scheme scheme, const SchemeParams& sp,
                                            double dmin, double dmax, int n,
                                            const ode::Options& opt = ode::Options()) {
  if (n < 2) throw std::invalid_argument("detuning_scan: need at least 2 points");
  auto [pulses, T] = make_scheme(scheme, sp);
  std::vector<ScanPoint> out;
  out.reserve(n);
  for (int k = 0; k < n; ++k) {
    ScanPoint pt;
    pt.delta = dmin + (dmax - dmin) * static_cast<double>(k) / (n - 1);
    Drive d;
    d.pulses = pulses;
    d.delta12 = d.delta23 = pt.delta;
    Eigen::Vector3cd psi0;
    psi0 << 1.0, 0.0, 0.0;
    const Propagation plus = propagate(d, 0.0, T, psi0, 0, opt);
    const Propagation minus = propagate(d.mirrored(), 0.0, T, psi0, 0, opt);
    pt.p_plus = std::norm(plus.amplitudes(1));
    pt.p_minus = std::norm(minus.amplitudes(1));
    pt.selectivity = selectivity(pt.p_plus, pt.p_minus);
    pt.norm_drift = std::max(plus.norm_drift, minus.norm_drift);
    out.push_back(pt);
  }
  return out;
}

/// Linear sweep of both one-photon detunings from -delta0 to +delta0 across
/// [0, T], applied on top of the given pulses.
inline Drive chirped_drive(std::vector<Pulse> pulses, double delta0, double T) {
  Drive d;
  d.pulses = std::move(pulses);
  auto sweep = [delta0, T](double t) { return -delta0 + 2.0 * delta0 * t / T; };
  d.delta12_t = sweep;
  d.delta23_t = sweep;
  return d;
}

}  // namespace esmix::threewave

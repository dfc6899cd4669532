#pragma once

// Adaptive Dormand-Prince 5(4) integration for complex state vectors.
// Steps are clipped to requested report times, so observers see exact grid
// points; callers split integration at envelope kinks for full order.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace esmix::ode {

struct Options {
  double rel_tol = 1e-12;
  double abs_tol = 1e-12;
  double first_step = 0.0;  // 0 = choose automatically
  double max_step = 0.0;    // 0 = unlimited
  std::size_t max_steps = 50'000'000;
};

struct Stats {
  std::size_t steps = 0;
  std::size_t rejected = 0;
  std::size_t evals = 0;
};

namespace detail {

// Butcher tableau of the Dormand-Prince 5(4) pair
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                 e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                 e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

}  // namespace detail

/// Integrate dy/dt = f(t, y) from t0 to t1 (t1 > t0). The observer, when
/// given, is called at every time in report_times (ascending, inside
/// [t0, t1]); the state lands on each of them exactly.
template <class F>
Stats integrate(F&& f, double t0, double t1, Eigen::VectorXcd& y,
                const std::vector<double>& report_times = {},
                const std::function<void(double, const Eigen::VectorXcd&)>& observe = nullptr,
                const Options& opt = Options()) {
  using Vec = Eigen::VectorXcd;
  if (!(t1 >= t0)) throw std::invalid_argument("ode::integrate: t1 < t0");
  Stats st;
  const auto n = y.size();
  Vec k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), y5(n), ytmp(n);

  double t = t0;
  std::size_t next_report = 0;
  auto emit_due = [&](double now) {
    while (next_report < report_times.size() && report_times[next_report] <= now + 1e-15 * (1.0 + std::abs(now))) {
      if (observe) observe(report_times[next_report], y);
      ++next_report;
    }
  };
  emit_due(t);
  if (t1 <= t0) return st;

  f(t, y, k1);
  ++st.evals;

  double h = opt.first_step;
  if (h <= 0.0) {
    // modest first guess from the current derivative scale
    double ynorm = y.norm(), fnorm = k1.norm();
    h = (fnorm > 1e-300) ? 0.01 * std::max(ynorm, 1.0) / fnorm : (t1 - t0) * 1e-3;
    h = std::min(h, (t1 - t0) * 0.1);
  }
  if (opt.max_step > 0.0) h = std::min(h, opt.max_step);

  while (t < t1) {
    if (++st.steps > opt.max_steps)
      throw std::runtime_error("ode::integrate: step limit exceeded");
    double target = t1;
    if (next_report < report_times.size()) target = std::min(target, report_times[next_report]);
    double h_try = h;
    bool clipped = false;
    if (t + h_try >= target - 1e-15 * (1.0 + std::abs(target))) {
      h_try = target - t;
      clipped = true;
    }

    using namespace detail;
    ytmp = y + h_try * (a21 * k1);
    f(t + c2 * h_try, ytmp, k2);
    ytmp = y + h_try * (a31 * k1 + a32 * k2);
    f(t + c3 * h_try, ytmp, k3);
    ytmp = y + h_try * (a41 * k1 + a42 * k2 + a43 * k3);
    f(t + c4 * h_try, ytmp, k4);
    ytmp = y + h_try * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    f(t + c5 * h_try, ytmp, k5);
    ytmp = y + h_try * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    f(t + h_try, ytmp, k6);
    y5 = y + h_try * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    f(t + h_try, y5, k7);
    st.evals += 6;

    double err = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double ei = std::abs(h_try * (e1 * k1(i) + e3 * k3(i) + e4 * k4(i) + e5 * k5(i) +
                                          e6 * k6(i) + e7 * k7(i)));
      const double sc = opt.abs_tol + opt.rel_tol * std::max(std::abs(y(i)), std::abs(y5(i)));
      err += (ei / sc) * (ei / sc);
    }
    err = std::sqrt(err / static_cast<double>(n));

    if (err <= 1.0 || h_try <= 1e-14 * (1.0 + std::abs(t))) {
      t = clipped ? target : t + h_try;
      y.swap(y5);
      k1.swap(k7);  // first-same-as-last
      emit_due(t);
      const double grow = (err > 1e-30) ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0) : 5.0;
      const double h_new = h_try * grow;
      // a step shortened only to land on a report time must not depress
      // the working step size
      h = clipped ? std::max(h, h_new) : h_new;
    } else {
      ++st.rejected;
      h = h_try * std::max(0.2, 0.9 * std::pow(err, -0.2));
    }
    if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
  }
  return st;
}

}  // namespace esmix::ode

#pragma once

// Angular momentum primitives: Wigner 3j symbols, matrix elements of the
// rank-1 rotation matrix D^1_{MK} between symmetric-top states, and the
// sign acquired by polarized dipole elements under M -> -M reflection.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace esmix {

/// Laboratory-frame field polarization.
enum class Pol { x, y, z };

inline const char* pol_name(Pol p) {
  switch (p) {
    case Pol::x: return "x";
    case Pol::y: return "y";
    default: return "z";
  }
}

namespace angular {

/// Symmetric-top basis label |J, K, M>.
struct AngularIndex {
  int J, K, M;
  AngularIndex(int J_, int K_, int M_) : J(J_), K(K_), M(M_) {
    if (J < 0) throw std::domain_error("AngularIndex: J must be non-negative");
    if (std::abs(K) > J) throw std::domain_error("AngularIndex: |K| > J");
    if (std::abs(M) > J) throw std::domain_error("AngularIndex: |M| > J");
  }
};

namespace detail {

using bigint = boost::multiprecision::cpp_int;

inline std::vector<int> primes_upto(int n) {
  std::vector<char> composite(static_cast<size_t>(std::max(n, 1)) + 1, 0);
  std::vector<int> p;
  for (int i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    p.push_back(i);
    for (long long k = static_cast<long long>(i) * i; k <= n; k += i) composite[k] = 1;
  }
  return p;
}

/// Exponent of prime p in n! (Legendre's formula).
inline int factorial_prime_exponent(int n, int p) {
  int e = 0;
  while (n > 0) {
    n /= p;
    e += n;
  }
  return e;
}

inline bigint prime_power_product(const std::vector<int>& primes, const std::vector<int>& exp) {
  bigint v = 1;
  for (size_t i = 0; i < exp.size(); ++i)
    for (int k = 0; k < exp[i]; ++k) v *= primes[i];
  return v;
}

inline long double to_ld(const bigint& v) { return v.convert_to<long double>(); }

// Exact evaluation of the Racah single-sum formula. Factorials are kept as
// prime-exponent vectors; the alternating sum runs over a common denominator
// in exact integer arithmetic, and the square-root prefactor is split into an
// exact rational part (even prime exponents) and a small residual radicand.
// Inputs are doubled (two_j, two_m) and must already satisfy the selection
// rules; all derived factorial arguments are then non-negative integers.
inline double racah_exact(int tj1, int tj2, int tj3, int tm1, int tm2, int tm3) {
  const int a1 = (tj1 + tj2 - tj3) / 2;
  const int a2 = (tj1 - tj2 + tj3) / 2;
  const int a3 = (-tj1 + tj2 + tj3) / 2;
  const int Jp1 = (tj1 + tj2 + tj3) / 2 + 1;

  const auto primes = primes_upto(std::max(Jp1, 2));
  const size_t np = primes.size();
  auto fexp = [&](int n) {
    std::vector<int> e(np);
    for (size_t i = 0; i < np; ++i) e[i] = factorial_prime_exponent(n, primes[i]);
    return e;
  };

  // Radicand exponents: Delta(j1 j2 j3) * prod_i (j_i + m_i)! (j_i - m_i)!
  std::vector<int> rad(np, 0);
  auto add = [&](std::vector<int>& dst, const std::vector<int>& src, int sign) {
    for (size_t i = 0; i < np; ++i) dst[i] += sign * src[i];
  };
  add(rad, fexp(a1), +1);
  add(rad, fexp(a2), +1);
  add(rad, fexp(a3), +1);
  add(rad, fexp(Jp1), -1);
  const int jm[6] = {(tj1 + tm1) / 2, (tj1 - tm1) / 2, (tj2 + tm2) / 2,
                     (tj2 - tm2) / 2, (tj3 + tm3) / 2, (tj3 - tm3) / 2};
  for (int v : jm) add(rad, fexp(v), +1);

  // Alternating sum; term t has denominator t! (a1-t)! (j1-m1-t)! (j2+m2-t)!
  // ((tj3-tj2+tm1)/2 + t)! ((tj3-tj1-tm2)/2 + t)!
  const int b1 = (tj3 - tj2 + tm1) / 2;
  const int b2 = (tj3 - tj1 - tm2) / 2;
  const int tmin = std::max({0, -b1, -b2});
  const int tmax = std::min({a1, jm[1], jm[2]});
  if (tmin > tmax) return 0.0;

  std::vector<std::vector<int>> den;
  den.reserve(tmax - tmin + 1);
  std::vector<int> common(np, 0);
  for (int t = tmin; t <= tmax; ++t) {
    std::vector<int> e(np, 0);
    for (int n : {t, a1 - t, jm[1] - t, jm[2] - t, b1 + t, b2 + t}) add(e, fexp(n), +1);
    for (size_t i = 0; i < np; ++i) common[i] = std::max(common[i], e[i]);
    den.push_back(std::move(e));
  }
  bigint sum = 0;
  for (int t = tmin; t <= tmax; ++t) {
    std::vector<int> co(np);
    const auto& e = den[t - tmin];
    for (size_t i = 0; i < np; ++i) co[i] = common[i] - e[i];
    const bigint term = prime_power_product(primes, co);
    sum += (t % 2 != 0) ? -term : term;
  }
  if (sum == 0) return 0.0;

  // value = phase * (sum / D) * prod_p p^{rad_p / 2}
  std::vector<int> half_num(np, 0), half_den(np, 0);
  long double residual = 1.0L;
  for (size_t i = 0; i < np; ++i) {
    const int r = rad[i];
    const int s = ((r % 2) + 2) % 2;
    const int q = (r - s) / 2;
    if (q >= 0)
      half_num[i] = q;
    else
      half_den[i] = -q;
    if (s) residual *= primes[i];
  }
  long double v = to_ld(sum) / to_ld(prime_power_product(primes, common));
  v *= to_ld(prime_power_product(primes, half_num));
  v /= to_ld(prime_power_product(primes, half_den));
  v *= std::sqrt(residual);
  const int phase = (tj1 - tj2 - tm3) / 2;
  if (((phase % 2) + 2) % 2 != 0) v = -v;
  return static_cast<double>(v);
}

// Same sum evaluated with log-Gamma factorials in extended precision; used
// beyond the exact-arithmetic window where cancellation stays manageable.
inline double racah_lgamma(int tj1, int tj2, int tj3, int tm1, int tm2, int tm3) {
  auto lf = [](int n) { return lgammal(static_cast<long double>(n) + 1.0L); };
  const int a1 = (tj1 + tj2 - tj3) / 2;
  const int a2 = (tj1 - tj2 + tj3) / 2;
  const int a3 = (-tj1 + tj2 + tj3) / 2;
  const int Jp1 = (tj1 + tj2 + tj3) / 2 + 1;
  const int jm[6] = {(tj1 + tm1) / 2, (tj1 - tm1) / 2, (tj2 + tm2) / 2,
                     (tj2 - tm2) / 2, (tj3 + tm3) / 2, (tj3 - tm3) / 2};
  long double lpref = 0.5L * (lf(a1) + lf(a2) + lf(a3) - lf(Jp1));
  for (int v : jm) lpref += 0.5L * lf(v);

  const int b1 = (tj3 - tj2 + tm1) / 2;
  const int b2 = (tj3 - tj1 - tm2) / 2;
  const int tmin = std::max({0, -b1, -b2});
  const int tmax = std::min({a1, jm[1], jm[2]});
  long double sum = 0.0L;
  for (int t = tmin; t <= tmax; ++t) {
    const long double lden =
        lf(t) + lf(a1 - t) + lf(jm[1] - t) + lf(jm[2] - t) + lf(b1 + t) + lf(b2 + t);
    const long double term = expl(lpref - lden);
    sum += (t % 2 != 0) ? -term : term;
  }
  const int phase = (tj1 - tj2 - tm3) / 2;
  if (((phase % 2) + 2) % 2 != 0) sum = -sum;
  return static_cast<double>(sum);
}

inline int to_doubled(double x, const char* what) {
  const double t = 2.0 * x;
  const double r = std::nearbyint(t);
  if (std::abs(t - r) > 1e-9)
    throw std::domain_error(std::string("wigner3j: ") + what +
                            " must be an integer or half-integer");
  return static_cast<int>(r);
}

}  // namespace detail

/// Wigner 3j symbol (j1 j2 j3; m1 m2 m3). Integer and half-integer arguments
/// are accepted. Arguments up to j = 20 are evaluated in exact arithmetic;
/// larger ones fall back to an extended-precision log-Gamma evaluation.
inline double wigner3j(double j1, double j2, double j3, double m1, double m2, double m3) {
  const int tj1 = detail::to_doubled(j1, "j1"), tj2 = detail::to_doubled(j2, "j2"),
            tj3 = detail::to_doubled(j3, "j3");
  const int tm1 = detail::to_doubled(m1, "m1"), tm2 = detail::to_doubled(m2, "m2"),
            tm3 = detail::to_doubled(m3, "m3");
  if (tj1 < 0 || tj2 < 0 || tj3 < 0) throw std::domain_error("wigner3j: negative j");
  if (std::abs(tm1) > tj1 || std::abs(tm2) > tj2 || std::abs(tm3) > tj3)
    throw std::domain_error("wigner3j: |m| > j");
  if ((tj1 + tm1) % 2 != 0 || (tj2 + tm2) % 2 != 0 || (tj3 + tm3) % 2 != 0)
    throw std::domain_error("wigner3j: j and m must both be integer or both half-integer");

  if (tm1 + tm2 + tm3 != 0) return 0.0;
  if ((tj1 + tj2 + tj3) % 2 != 0) return 0.0;
  if (tj3 > tj1 + tj2 || tj3 < std::abs(tj1 - tj2)) return 0.0;

  if (std::max({tj1, tj2, tj3}) <= 40)
    return detail::racah_exact(tj1, tj2, tj3, tm1, tm2, tm3);
  return detail::racah_lgamma(tj1, tj2, tj3, tm1, tm2, tm3);
}

/// Matrix element <J'' K'' M''| D^1_{MK} |J' K' M'> between symmetric-top
/// states (bra holds the double-primed labels). Vanishes unless M'' = M' + M,
/// K'' = K' + K and |J'' - J'| <= 1 with J'' + J' >= 1.
inline double symtop_element(const AngularIndex& bra, int M, int K, const AngularIndex& ket) {
  if (std::abs(M) > 1 || std::abs(K) > 1)
    throw std::domain_error("symtop_element: D^1 components require |M|, |K| <= 1");
  const double f = std::sqrt((2.0 * bra.J + 1.0) * (2.0 * ket.J + 1.0));
  const int ph = bra.M + bra.K;
  const double sign = (((ph % 2) + 2) % 2 == 0) ? 1.0 : -1.0;
  return f * sign * wigner3j(ket.J, 1, bra.J, ket.M, M, -bra.M) *
         wigner3j(ket.J, 1, bra.J, ket.K, K, -bra.K);
}

/// Sign relating a polarized dipole matrix element to its M -> -M mirror:
/// element(-M pair) = sigma * element(+M pair). Depends only on the field
/// polarization and |Delta J| of the pair.
inline int sigma_of_m_reflection(int delta_j, Pol p) {
  if (delta_j < -1 || delta_j > 1)
    throw std::domain_error("sigma_of_m_reflection: delta_j must be in {-1, 0, 1}");
  const bool dj0 = (delta_j == 0);
  switch (p) {
    case Pol::z: return dj0 ? -1 : +1;
    case Pol::x: return dj0 ? +1 : -1;
    default: return dj0 ? -1 : +1;  // y
  }
}

}  // namespace angular
}  // namespace esmix

#pragma once

// Independent reference values used by the tests. Nothing here calls into the library.

#include <cmath>
#include <functional>

namespace oracle {

/// I0(x) = sum_k (x/2)^{2k} / (k!)^2, summed until terms stop contributing.
inline double bessel_i0(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 500; ++k) {
    term *= q / (double(k) * k);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

/// I0'(x) = I1(x) = sum_k (x/2)^{2k+1} / (k! (k+1)!).
inline double bessel_i1(double x) {
  const double q = 0.25 * x * x;
  double term = 0.5 * x, sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= q / (double(k) * (k + 1));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

/// I0''(x) = I0(x) - I1(x)/x (Bessel ODE), with the limit 1/2 at 0.
inline double bessel_i0_dd(double x) {
  if (x == 0.0) return 0.5;
  return bessel_i0(x) - bessel_i1(x) / x;
}

/// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 2000) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

/// sinh by its power series.
inline double sinh_series(double x) {
  double term = x, sum = x;
  for (int k = 1; k < 200; ++k) {
    term *= x * x / ((2.0 * k) * (2.0 * k + 1));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

inline double cosh_series(double x) {
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= x * x / ((2.0 * k - 1) * (2.0 * k));
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

/// Paraboloid profile: arc length of z = t^2/2 from 0 to t, by Simpson on sqrt(1 + s^2).
inline double paraboloid_arc(double t) {
  return simpson([](double s) { return std::sqrt(1.0 + s * s); }, 0.0, t, 4000);
}

}  // namespace oracle

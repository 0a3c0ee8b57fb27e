// Normalized Bessel functions, Pochhammer symbols and integer partitions.
#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace meixner {

namespace detail {

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

// sum_m (z/4)^m / (m! (nu+1)_m)
template <typename T>
T bessel_series(double nu, T z) {
  if (!(nu > -1.0)) throw std::invalid_argument("Bessel order must be > -1");
  T term(1.0);
  T sum(1.0);
  for (int m = 0; m < 200; ++m) {
    term *= (z / 4.0) / ((m + 1.0) * (nu + 1.0 + m));
    sum += term;
    if (magnitude(term) <= 1e-17 * magnitude(sum) && magnitude(z / 4.0) < (m + 1.0) * (nu + 1.0 + m))
      break;
  }
  return sum;
}

double bessel_j_large(double nu, double x);

}  // namespace detail

// Gamma(nu+1) (2/x)^nu I_nu(x); entire, value 1 at 0.
template <typename T>
T bessel_i_norm(double nu, T x) {
  return detail::bessel_series(nu, T(x * x));
}

// Gamma(nu+1) (2/x)^nu J_nu(x)
template <typename T>
T bessel_j_norm(double nu, T x) {
  return detail::bessel_series(nu, T(-x * x));
}

template <>
inline double bessel_j_norm<double>(double nu, double x) {
  // past |x| = 12 the alternating series loses too many digits
  if (std::abs(x) > 12.0) return detail::bessel_j_large(nu, std::abs(x));
  return detail::bessel_series(nu, -x * x);
}

// I_nu(sqrt z) as a function of z; for z < 0 this is J_nu(sqrt(-z)).
double bessel_i_norm_z(double nu, double z);

// First positive zero of J_{(beta-1)/2}.
double bessel_first_zero(int beta);
// First count positive zeros of J_{(beta-1)/2}, ascending.
std::vector<double> bessel_zeros(int beta, int count);

double pochhammer(double b, int k);

struct Partition {
  std::vector<int> parts;  // weakly decreasing, positive

  int weight() const;
  int length() const { return static_cast<int>(parts.size()); }
  // nu_j = number of parts equal to j, j = 1..largest part
  std::vector<int> multiplicities() const;
};

double beta_pochhammer(double b, const Partition& lambda, double beta);

// All partitions of k in reverse lexicographic order; k <= 40.
std::vector<Partition> partitions(int k);
// Only partitions whose parts are <= max_part.
std::vector<Partition> partitions(int k, int max_part);

}  // namespace meixner

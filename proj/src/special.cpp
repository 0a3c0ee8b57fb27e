#include "meixner/special.hpp"

#include <algorithm>
#include <string>

#include "meixner/algebra.hpp"

namespace meixner {

namespace detail {

double bessel_j_large(double nu, double x) {
  return std::tgamma(nu + 1.0) * std::pow(2.0 / x, nu) * std::cyl_bessel_j(nu, x);
}

}  // namespace detail

double bessel_i_norm_z(double nu, double z) {
  if (z < -144.0) return detail::bessel_j_large(nu, std::sqrt(-z));
  return detail::bessel_series(nu, z);
}

namespace {

double bisect(double nu, double lo, double hi) {
  double flo = bessel_j_norm(nu, lo);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = bessel_j_norm(nu, mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<double> bessel_zeros(int beta, int count) {
  check_beta(beta);
  const double nu = 0.5 * (beta - 1);
  std::vector<double> zeros;
  double x = 0.5;
  double fx = bessel_j_norm(nu, x);
  while (static_cast<int>(zeros.size()) < count) {
    const double next = x + 0.5;
    const double fn = bessel_j_norm(nu, next);
    if (fn == 0.0) {
      zeros.push_back(next);
    } else if ((fn > 0) != (fx > 0)) {
      zeros.push_back(bisect(nu, x, next));
    }
    x = next;
    fx = fn;
  }
  return zeros;
}

double bessel_first_zero(int beta) { return bessel_zeros(beta, 1).front(); }

double pochhammer(double b, int k) {
  if (k < 0) throw std::invalid_argument("pochhammer needs k >= 0");
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= b + i;
  return r;
}

int Partition::weight() const {
  int w = 0;
  for (int p : parts) w += p;
  return w;
}

std::vector<int> Partition::multiplicities() const {
  std::vector<int> nu(parts.empty() ? 0 : parts.front(), 0);
  for (int p : parts) ++nu[p - 1];
  return nu;
}

double beta_pochhammer(double b, const Partition& lambda, double beta) {
  double r = 1.0;
  for (int j = 0; j < lambda.length(); ++j) r *= pochhammer(b - 0.5 * beta * j, lambda.parts[j]);
  return r;
}

namespace {

void generate(int remaining, int max_part, std::vector<int>& cur, std::vector<Partition>& out) {
  if (remaining == 0) {
    out.push_back({cur});
    return;
  }
  for (int p = std::min(remaining, max_part); p >= 1; --p) {
    cur.push_back(p);
    generate(remaining - p, p, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<Partition> partitions(int k, int max_part) {
  if (k < 0) throw std::invalid_argument("partitions needs k >= 0");
  if (k > 40) throw std::invalid_argument("partitions: k = " + std::to_string(k) + " exceeds 40");
  std::vector<Partition> out;
  std::vector<int> cur;
  generate(k, std::max(0, max_part), cur, out);
  return out;
}

std::vector<Partition> partitions(int k) { return partitions(k, k); }

}  // namespace meixner

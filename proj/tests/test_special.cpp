#include "doctest.h"

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "meixner/special.hpp"

using namespace meixner;
using big = boost::multiprecision::cpp_dec_float_50;

namespace {

// sum_m (z/4)^m / (m! (nu+1)_m) in 50 digits
big reference_series(double nu, double z) {
  big term = 1, sum = 1, q = big(z) / 4;
  for (int m = 0; m < 400; ++m) {
    term *= q / ((m + 1) * (big(nu) + 1 + m));
    sum += term;
    if (abs(term) < big("1e-45")) break;
  }
  return sum;
}

long count_partitions(int k, int max_part) {
  if (k == 0) return 1;
  long c = 0;
  for (int p = std::min(k, max_part); p >= 1; --p) c += count_partitions(k - p, p);
  return c;
}

}  // namespace

TEST_CASE("normalized I") {
  for (double nu : {0.0, 0.5, 1.5}) CHECK(bessel_i_norm(nu, 0.0) == 1.0);
  for (double x : {0.5, 1.0, 2.0}) CHECK(std::abs(bessel_i_norm(0.5, x) - std::sinh(x) / x) < 1e-12);
  for (double x : {0.3, 1.7, 4.0}) CHECK(std::abs(bessel_i_norm(1.5, x) - bessel_i_norm(1.5, -x)) < 1e-14);
  CHECK_THROWS_AS(bessel_i_norm(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("normalized J and first zeros") {
  CHECK(bessel_j_norm(0.0, 0.0) == 1.0);
  CHECK(std::abs(bessel_j_norm(0.5, 1.0) - std::sin(1.0)) < 1e-12);
  CHECK(std::abs(bessel_first_zero(2) - M_PI) < 1e-10);
  CHECK(std::abs(bessel_first_zero(1) - 2.40483) < 1e-4);
  CHECK(std::abs(bessel_first_zero(4) - 4.49341) < 1e-4);
  for (int beta : {1, 2, 4})
    CHECK(std::abs(bessel_j_norm((beta - 1) / 2.0, bessel_first_zero(beta))) < 1e-10);
}

TEST_CASE("series against 50-digit reference") {
  for (double nu : {0.0, 0.5, 1.5, 2.5}) {
    for (double z = -100.0; z <= 100.0; z += 3.7) {
      const double ref = reference_series(nu, z).convert_to<double>();
      const double got = bessel_i_norm_z(nu, z);
      CHECK(std::abs(got - ref) <= 1e-13 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST_CASE("large argument J switches to the library") {
  for (double nu : {0.0, 0.5, 1.5}) {
    auto lib = [nu](double x) { return std::tgamma(nu + 1) * std::pow(2 / x, nu) * std::cyl_bessel_j(nu, x); };
    for (double x : {11.0, 12.0 - 1e-9}) CHECK(std::abs(bessel_j_norm(nu, x) - lib(x)) < 1e-12);
    const double x = 30.0;
    CHECK(std::abs(bessel_j_norm(nu, x) - std::tgamma(nu + 1) * std::pow(2 / x, nu) * std::cyl_bessel_j(nu, x)) <
          1e-15);
  }
}

TEST_CASE("derivative in z") {
  for (double nu : {0.0, 0.5, 1.5}) {
    for (double z : {-3.0, -0.5, 0.0, 0.7, 2.0}) {
      const double h = 1e-5;
      const double fd = (bessel_i_norm_z(nu, z + h) - bessel_i_norm_z(nu, z - h)) / (2 * h);
      CHECK(std::abs(fd - bessel_i_norm_z(nu + 1, z) / (4 * (nu + 1))) < 1e-7);
    }
  }
}

TEST_CASE("product formula over the zeros") {
  for (int beta : {1, 2, 4}) {
    const double nu = (beta - 1) / 2.0;
    const auto zeros = bessel_zeros(beta, 50);
    REQUIRE(zeros.size() == 50);
    CHECK(zeros[0] == doctest::Approx(bessel_first_zero(beta)).epsilon(1e-12));
    for (std::size_t k = 1; k < zeros.size(); ++k) CHECK(zeros[k] > zeros[k - 1]);
    // sum over all zeros of j_k^{-2} is 1/(4(nu+1))
    double partial = 0.0;
    for (double j : zeros) partial += 1.0 / (j * j);
    const double tail = 1.0 / (4.0 * (nu + 1.0)) - partial;
    const double ell = zeros[0];
    for (double z = 0.0; z < ell; z += ell / 40.0) {
      double prod = 1.0;
      for (double j : zeros) prod *= 1.0 - z * z / (j * j);
      const double exact = bessel_j_norm(nu, z);
      // the truncated product overshoots by about exp(-z^2 tail)
      CHECK(std::abs(prod * std::exp(-z * z * tail) - exact) < 1e-4);
      CHECK(std::abs(prod - exact) < 1e-2);
    }
  }
}

TEST_CASE("Pochhammer symbols") {
  CHECK(pochhammer(2.5, 0) == 1.0);
  CHECK(pochhammer(1.0, 5) == 120.0);
  CHECK(pochhammer(1.5, 2) == 3.75);
  CHECK(beta_pochhammer(3.0, Partition{{4}}, 2) == pochhammer(3.0, 4));
  CHECK(beta_pochhammer(3.0, Partition{}, 1) == 1.0);
  CHECK(beta_pochhammer(2.0, Partition{{2, 1}}, 2) == 6.0);
}

TEST_CASE("partitions") {
  CHECK(partitions(0).size() == 1);
  CHECK(partitions(4).size() == 5);
  CHECK(partitions(10).size() == 42);
  for (int k = 0; k <= 25; ++k) {
    const auto ps = partitions(k);
    CHECK(static_cast<long>(ps.size()) == count_partitions(k, k));
    for (std::size_t i = 0; i < ps.size(); ++i) {
      CHECK(ps[i].weight() == k);
      CHECK(std::is_sorted(ps[i].parts.rbegin(), ps[i].parts.rend()));
      if (i > 0) CHECK(std::lexicographical_compare(ps[i].parts.begin(), ps[i].parts.end(), ps[i - 1].parts.begin(),
                                                    ps[i - 1].parts.end()));
    }
    for (int m = 1; m <= 4; ++m) CHECK(static_cast<long>(partitions(k, m).size()) == count_partitions(k, m));
  }
  const auto nu = Partition{{3, 1, 1}}.multiplicities();
  CHECK(nu == std::vector<int>{2, 0, 1});
  CHECK_THROWS(partitions(41));
}

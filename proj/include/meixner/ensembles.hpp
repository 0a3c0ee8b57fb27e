// Ensemble parameter records, moments, regression constants and samplers.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "meixner/algebra.hpp"
#include "meixner/rng.hpp"

namespace meixner {

// q holds q_1..q_n; q_0 = 1 - sum.
struct Bernoulli {
  std::vector<double> q;
};
struct Binomial {
  int N = 1;
  std::vector<double> q;
};
struct Poisson {
  std::vector<double> lambda;
};
struct NegBinomial {
  double r = 1.0;
  std::vector<double> q;
};
// cumulant c1 tr + c2 tr^2/2 + c3 tr(theta^2)/2
struct Gaussian {
  double c1 = 0.0, c2 = 0.0, c3 = 1.0;
};
struct Gamma2 {
  double p = 2.0, c = 2.0;
};
struct GammaN {
  double p = 2.0, c = 10.0;
};
struct Hyperbolic2 {
  double alpha = 1.0, lambda = 0.0, rho = 0.0;
};

using FamilyParams =
    std::variant<Bernoulli, Binomial, Poisson, NegBinomial, Gaussian, Gamma2, GammaN, Hyperbolic2>;

struct EnsembleSpec {
  int n = 2;
  int beta = 1;
  FamilyParams params;

  std::string family() const;
  bool samplable() const;
};

// Throws std::invalid_argument on any constraint violation.
void validate(const EnsembleSpec& spec);
EnsembleSpec make_spec(int n, int beta, FamilyParams params);

struct UnsupportedSampler : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// (q_1 + 2 q_2 + ... + n q_n) / n
double qbar(const std::vector<double>& q);

struct Moments {
  double mean = 0.0;      // E X = mean I
  double variance = 0.0;  // E X^2 - (E X)^2 = variance I
};
Moments theoretical_moments(const EnsembleSpec& spec);

struct MeixnerParams {
  double A = 0.0, B = 0.0, C = 0.0;
  bool has_ab = false;
  double a = 0.0, b = 0.0;
};

// Regression constants of the law and, when non-degenerate, the constants of
// its standardized version.
MeixnerParams meixner_params(const EnsembleSpec& spec);

// a = A/(2(1-A)), b = (B + 4 A mean)/(2 sd (1-A))
void fill_standardized(MeixnerParams& p, double mean, double variance);

MeixnerParams jorgensen_power(const MeixnerParams& p, double alpha);
// constants of alpha X + t
MeixnerParams affine_params(const MeixnerParams& p, double alpha, double t);

// Haar element of O(n), U(n) or Sp(n) in the dense representation.
Dense haar_rotation(int n, int beta, RngStream& rng);
// Uniform rank-m orthogonal projection.
MatrixH sample_projection(int m, int n, int beta, RngStream& rng);
MatrixH sample_ensemble(const EnsembleSpec& spec, RngStream& rng);

// count draws; draw i comes from stream stream_base + i / chunk_size.
inline constexpr long kSampleChunk = 1024;
std::vector<MatrixH> sample_batch(const EnsembleSpec& spec, long count, std::uint64_t seed,
                                  int threads = 0, std::uint64_t stream_base = 0);

}  // namespace meixner

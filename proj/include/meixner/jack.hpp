// One-part Jack polynomials and the series for E exp<theta|P> over uniform
// rank-one projections P.
#pragma once

#include <vector>

#include "meixner/algebra.hpp"

namespace meixner {

struct JackSeriesConfig {
  int max_k = 30;  // at most 40
};

struct SeriesResult {
  double value = 0.0;
  double last_term = 0.0;  // |k = max_k term|, error proxy
  bool converged = false;  // last_term <= 1e-12 |value|
};

// Multiplicity vectors (nu_1..nu_n) with sum j nu_j = k, reverse-lex order of
// the underlying partitions. Cached; safe to call concurrently.
const std::vector<std::vector<int>>& multiplicity_vectors(int k, int n);

// J_(k) with Jack parameter 2/beta, evaluated from the elementary symmetric
// functions of theta.
double jack_one_part(int k, const SigmaPoint& s, double beta);
double jack_one_part(int k, const MatrixH& theta);

SeriesResult lt_rank1_series(const SigmaPoint& s, int beta, JackSeriesConfig cfg = {});
SeriesResult lt_rank1_series(const MatrixH& theta, JackSeriesConfig cfg = {});

// Divided-difference form for n = 3, beta = 2. Throws std::domain_error when
// two eigenvalues are closer than 1e-4.
double lt_rank1_n3_closed(const MatrixH& theta);

// q0 + q1 L3(theta) + q2 e^{tr} L3(-theta) + q3 e^{tr}
double lt_bernoulli_n3(const MatrixH& theta, double q1, double q2, double q3,
                       JackSeriesConfig cfg = {40});

}  // namespace meixner

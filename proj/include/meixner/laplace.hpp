// Closed-form Laplace transforms L(theta) = E exp<theta|X> and Monte Carlo
// estimates of them.
#pragma once

#include <string>
#include <vector>

#include "meixner/algebra.hpp"
#include "meixner/ensembles.hpp"
#include "meixner/fd.hpp"

namespace meixner {

struct LaplaceEval {
  double value = 1.0;  // +inf outside the domain
  bool in_domain = true;
  double k = 0.0;  // log value
};

LaplaceEval laplace_from_log(double k);
LaplaceEval laplace_outside();

// Rank-one projection transform: n = 1, 2 closed forms, otherwise the Jack
// series.
double lt_rank1(const MatrixH& theta);

LaplaceEval lt_closed(const EnsembleSpec& spec, const MatrixH& theta);

// Law of (X - mean I)/sd with the exact moments.
LaplaceEval lt_standardized(const EnsembleSpec& spec, const MatrixH& theta);

// log L as a scalar function; +inf outside the domain
ScalarFn log_laplace(const EnsembleSpec& spec);
ScalarFn log_laplace_standardized(const EnsembleSpec& spec);

struct EmpiricalLt {
  double estimate = 0.0;
  double standard_error = 0.0;
};
EmpiricalLt lt_empirical(const std::vector<MatrixH>& samples, const MatrixH& theta);

// Candidate solutions of the n = 2 system, written in (sigma1, sigma2).
enum class SolutionCase { elliptic, parabolic, hyperbolic, poisson, gaussian };

std::string to_string(SolutionCase c);
SolutionCase solution_case_from_string(const std::string& s);

struct SolutionConstants {
  double a = 0.0, b = 0.0;
  double C = 0.0;                    // parabolic, poisson, gaussian
  double C1 = 0.0, C2 = 0.0, C3 = 0.0;  // elliptic
  double lambda = 0.0;               // hyperbolic
};

class SolutionFamily {
 public:
  // Validates the constants for the case.
  SolutionFamily(SolutionCase c, SolutionConstants k, int beta);

  SolutionCase which() const { return case_; }
  const SolutionConstants& constants() const { return k_; }
  int beta() const { return beta_; }
  double kappa() const { return kappa_; }

  // g(sigma1, sigma2)
  double g(double s1, double s2) const;
  LaplaceEval laplace(const MatrixH& theta) const;

 private:
  SolutionCase case_;
  SolutionConstants k_;
  int beta_;
  double kappa_ = 0.0;
};

LaplaceEval lt_solution_family(SolutionCase c, const SolutionConstants& k, const MatrixH& theta);

}  // namespace meixner

// The second-order operator D(g) in elementary-symmetric coordinates and
// residual checks for the equations satisfied by Meixner Laplace transforms.
#pragma once

#include <functional>
#include <optional>
#include <string>

#include "meixner/algebra.hpp"
#include "meixner/ensembles.hpp"
#include "meixner/fd.hpp"
#include "meixner/laplace.hpp"

namespace meixner {

// I: a != 0, II: a = 0 and b != 0, III: a = b = 0
enum class PdeTag { I, II, III };

struct PdeCase {
  PdeTag tag = PdeTag::III;
  double a = 0.0, b = 0.0;

  static PdeCase from_ab(double a, double b);
};

std::string to_string(PdeTag t);

struct GDerivs {
  double value = 0.0;
  Eigen::VectorXd grad;  // g_i
  Eigen::MatrixXd hess;  // g_ij
  SigmaPoint at;
};

using SigmaFn = std::function<double(const SigmaPoint&)>;

// P_j(r, s): sigma'_r sigma'_s = sum_j P_j(r, s) sigma'_j
double product_coeff(int j, int r, int s, const SigmaPoint& sp);

// Row formulas.
Eigen::VectorXd d_operator(const GDerivs& d, double beta);
// Same operator assembled from product_coeff.
Eigen::VectorXd d_operator_assembled(const GDerivs& d, double beta);

// Central differences with per-component step rel (1 + |sigma_i|).
GDerivs fd_derivs(const SigmaFn& g, const SigmaPoint& at, double rel_step = 1e-4);

Eigen::VectorXd pde_rhs(const PdeCase& c, const GDerivs& d);
Eigen::VectorXd pde_residual(const PdeCase& c, const GDerivs& d, double beta);
// Throws std::domain_error if the point is not in U.
Eigen::VectorXd pde_residual(const PdeCase& c, const SigmaFn& g, const SigmaPoint& at, double beta);

PdeCase pde_case(const SolutionFamily& f);
// Exact derivatives for the polynomial solutions (gaussian, parabolic).
std::optional<GDerivs> exact_derivs(const SolutionFamily& f, const SigmaPoint& at);

// g(sigma(theta)) built from the cumulant k of a standardized law.
double f_to_g_transform(const PdeCase& c, const ScalarFn& k, const MatrixH& theta);

// Psi(k'')(I) - (I + 2b k' + 4a k'^2) by finite differences of k.
MatrixH k_equation_residual(const ScalarFn& k, double a, double b, const MatrixH& theta);
// Standardizes the law with its exact moments and uses its (a, b).
MatrixH k_equation_residual(const EnsembleSpec& spec, const MatrixH& theta);

// 2(1-A) Psi(L'')(I) L - 2(1+A) L'^2 - 2B L L' - C L^2 I
MatrixH pre_L_residual(const ScalarFn& L, double A, double B, double C, const MatrixH& theta);
MatrixH pre_L_residual(const EnsembleSpec& spec, const MatrixH& theta);

double max_abs(const MatrixH& x);
double max_abs(const Eigen::VectorXd& v);

}  // namespace meixner

#include "meixner/pde.hpp"

#include <cmath>

namespace meixner {

PdeCase PdeCase::from_ab(double a, double b) {
  PdeCase c;
  c.a = a;
  c.b = b;
  c.tag = a != 0.0 ? PdeTag::I : (b != 0.0 ? PdeTag::II : PdeTag::III);
  return c;
}

std::string to_string(PdeTag t) {
  switch (t) {
    case PdeTag::I: return "I";
    case PdeTag::II: return "II";
    case PdeTag::III: return "III";
  }
  return "?";
}

double product_coeff(int j, int r, int s, const SigmaPoint& sp) {
  const int n = sp.n();
  if (j < 1 || j > n) return 0.0;
  const int top = r + s - 1;
  if (std::max(r, s) <= j && j <= std::min(top, n)) return sp.at(top - j);
  if (j < std::min(r, s)) return -sp.at(top - j);
  return 0.0;
}

Eigen::VectorXd d_operator(const GDerivs& d, double beta) {
  const SigmaPoint& sp = d.at;
  const int n = sp.n();
  Eigen::VectorXd out(n);
  for (int j = 1; j <= n; ++j) {
    double v = 0.0;
    for (int r = 1; r <= j; ++r)
      for (int s = 1; s <= j; ++s) v += sp.at(r + s - 1 - j) * d.hess(r - 1, s - 1);
    for (int r = j + 1; r <= n; ++r)
      for (int s = j + 1; s <= n; ++s) v -= sp.at(r + s - 1 - j) * d.hess(r - 1, s - 1);
    if (j < n) v -= (n - j) * (beta / 2.0) * d.grad[j];
    out[j - 1] = v;
  }
  return out;
}

Eigen::VectorXd d_operator_assembled(const GDerivs& d, double beta) {
  const SigmaPoint& sp = d.at;
  const int n = sp.n();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (int r = 1; r <= n; ++r)
    for (int s = 1; s <= n; ++s)
      for (int j = 1; j <= n; ++j) out[j - 1] += product_coeff(j, r, s, sp) * d.hess(r - 1, s - 1);
  for (int j = 1; j < n; ++j) out[j - 1] += (beta / 2.0) * (j - n) * d.grad[j];
  return out;
}

GDerivs fd_derivs(const SigmaFn& g, const SigmaPoint& at, double rel_step) {
  const int n = at.n();
  GDerivs d;
  d.at = at;
  d.value = g(at);
  d.grad.resize(n);
  d.hess.resize(n, n);
  Eigen::VectorXd h(n);
  for (int i = 0; i < n; ++i) h[i] = rel_step * (1.0 + std::abs(at.values()[i]));
  SigmaPoint x = at;
  auto& c = x.values();
  const auto& c0 = at.values();
  for (int i = 0; i < n; ++i) {
    c[i] = c0[i] + h[i];
    const double fp = g(x);
    c[i] = c0[i] - h[i];
    const double fm = g(x);
    c[i] = c0[i];
    d.grad[i] = (fp - fm) / (2.0 * h[i]);
    d.hess(i, i) = (fp - 2.0 * d.value + fm) / (h[i] * h[i]);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double acc = 0.0;
      for (int si : {1, -1}) {
        for (int sj : {1, -1}) {
          c[i] = c0[i] + si * h[i];
          c[j] = c0[j] + sj * h[j];
          acc += si * sj * g(x);
        }
      }
      c[i] = c0[i];
      c[j] = c0[j];
      d.hess(i, j) = d.hess(j, i) = acc / (4.0 * h[i] * h[j]);
    }
  }
  return d;
}

Eigen::VectorXd pde_rhs(const PdeCase& c, const GDerivs& d) {
  const int n = d.at.n();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  switch (c.tag) {
    case PdeTag::I: rhs[0] = (c.b * c.b - 4.0 * c.a) * d.value; break;
    case PdeTag::II: rhs = 2.0 * c.b * d.grad; break;
    case PdeTag::III: rhs[0] = 1.0; break;
  }
  return rhs;
}

Eigen::VectorXd pde_residual(const PdeCase& c, const GDerivs& d, double beta) {
  return d_operator(d, beta) - pde_rhs(c, d);
}

Eigen::VectorXd pde_residual(const PdeCase& c, const SigmaFn& g, const SigmaPoint& at, double beta) {
  if (!at.in_U()) throw std::domain_error("sigma point is not in U");
  return pde_residual(c, fd_derivs(g, at), beta);
}

PdeCase pde_case(const SolutionFamily& f) {
  return PdeCase::from_ab(f.constants().a, f.constants().b);
}

std::optional<GDerivs> exact_derivs(const SolutionFamily& f, const SigmaPoint& at) {
  if (at.n() != 2) throw std::invalid_argument("solution families are written for n = 2");
  const auto& k = f.constants();
  const double s1 = at.at(1), beta = f.beta();
  GDerivs d;
  d.at = at;
  d.value = f.g(at.at(1), at.at(2));
  d.grad.resize(2);
  d.hess = Eigen::MatrixXd::Zero(2, 2);
  switch (f.which()) {
    case SolutionCase::gaussian:
      d.grad << k.C * s1, -(1.0 - k.C) * (2.0 / beta);
      d.hess(0, 0) = k.C;
      return d;
    case SolutionCase::parabolic:
      d.grad << -k.b + 2.0 * k.C * beta * s1, 4.0 * k.C;
      d.hess(0, 0) = 2.0 * k.C * beta;
      return d;
    default:
      return std::nullopt;
  }
}

double f_to_g_transform(const PdeCase& c, const ScalarFn& k, const MatrixH& theta) {
  if (!sigma(theta).in_U()) throw std::domain_error("theta has repeated eigenvalues");
  const double kv = k(theta);
  const double tr = trace(theta);
  switch (c.tag) {
    case PdeTag::I: return std::exp(-4.0 * c.a * kv - c.b * tr);
    case PdeTag::II: return kv + tr / (2.0 * c.b);
    case PdeTag::III: return kv;
  }
  return kv;
}

MatrixH k_equation_residual(const ScalarFn& k, double a, double b, const MatrixH& theta) {
  const SymEndo hess = fd_hessian(k, theta, FdOptions{1e-4, false});
  const MatrixH kp = fd_gradient(k, theta, 1e-5);
  const MatrixH rhs = MatrixH::identity(theta.n(), theta.beta()) + 2.0 * b * kp + 4.0 * a * square(kp);
  return psi_apply(hess) - rhs;
}

MatrixH k_equation_residual(const EnsembleSpec& spec, const MatrixH& theta) {
  const MeixnerParams p = meixner_params(spec);
  return k_equation_residual(log_laplace_standardized(spec), p.a, p.b, theta);
}

MatrixH pre_L_residual(const ScalarFn& L, double A, double B, double C, const MatrixH& theta) {
  const double lv = L(theta);
  if (!std::isfinite(lv)) throw StencilOutsideDomain("theta is outside the domain");
  const SymEndo hess = fd_hessian(L, theta, FdOptions{1e-4, false});
  const MatrixH lp = fd_gradient(L, theta, 1e-5);
  const MatrixH lhs = 2.0 * (1.0 - A) * lv * psi_apply(hess);
  const MatrixH rhs = 2.0 * (1.0 + A) * square(lp) + 2.0 * B * lv * lp +
                      C * lv * lv * MatrixH::identity(theta.n(), theta.beta());
  return lhs - rhs;
}

MatrixH pre_L_residual(const EnsembleSpec& spec, const MatrixH& theta) {
  const MeixnerParams p = meixner_params(spec);
  ScalarFn L = [spec](const MatrixH& t) { return lt_closed(spec, t).value; };
  return pre_L_residual(L, p.A, p.B, p.C, theta);
}

double max_abs(const MatrixH& x) { return x.coords().cwiseAbs().maxCoeff(); }
double max_abs(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace meixner

#include "meixner/fd.hpp"

#include <cmath>

namespace meixner {

namespace {

double eval(const ScalarFn& f, const MatrixH& x) {
  const double v = f(x);
  if (!std::isfinite(v)) throw StencilOutsideDomain("finite-difference stencil leaves the domain");
  return v;
}

MatrixH gradient_at_step(const ScalarFn& f, const MatrixH& theta, double h) {
  MatrixH g(theta.n(), theta.beta());
  MatrixH x = theta;
  for (int a = 0; a < theta.dim(); ++a) {
    x.coords()[a] = theta.coords()[a] + h;
    const double fp = eval(f, x);
    x.coords()[a] = theta.coords()[a] - h;
    const double fm = eval(f, x);
    x.coords()[a] = theta.coords()[a];
    g.coords()[a] = (fp - fm) / (2.0 * h);
  }
  return g;
}

Eigen::MatrixXd hessian_at_step(const ScalarFn& f, const MatrixH& theta, double h) {
  const int d = theta.dim();
  Eigen::MatrixXd hs(d, d);
  const double f0 = eval(f, theta);
  MatrixH x = theta;
  const auto& c0 = theta.coords();
  for (int a = 0; a < d; ++a) {
    x.coords()[a] = c0[a] + h;
    const double fp = eval(f, x);
    x.coords()[a] = c0[a] - h;
    const double fm = eval(f, x);
    x.coords()[a] = c0[a];
    hs(a, a) = (fp - 2.0 * f0 + fm) / (h * h);
  }
  for (int a = 0; a < d; ++a) {
    for (int b = a + 1; b < d; ++b) {
      double acc = 0.0;
      for (int sa : {1, -1}) {
        for (int sb : {1, -1}) {
          x.coords()[a] = c0[a] + sa * h;
          x.coords()[b] = c0[b] + sb * h;
          acc += sa * sb * eval(f, x);
        }
      }
      x.coords()[a] = c0[a];
      x.coords()[b] = c0[b];
      hs(a, b) = hs(b, a) = acc / (4.0 * h * h);
    }
  }
  return hs;
}

}  // namespace

double fd_step(const MatrixH& theta, double rel) { return rel * (1.0 + norm(theta)); }

MatrixH fd_gradient(const ScalarFn& f, const MatrixH& theta, double rel_step) {
  return gradient_at_step(f, theta, fd_step(theta, rel_step));
}

SymEndo fd_hessian(const ScalarFn& f, const MatrixH& theta, FdOptions opt) {
  const double h = fd_step(theta, opt.rel_step);
  Eigen::MatrixXd hs = hessian_at_step(f, theta, h);
  if (opt.richardson) {
    const Eigen::MatrixXd half = hessian_at_step(f, theta, 0.5 * h);
    hs = (4.0 * half - hs) / 3.0;
  }
  return {theta.n(), theta.beta(), hs};
}

}  // namespace meixner

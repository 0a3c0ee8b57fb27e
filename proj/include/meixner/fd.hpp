// Central finite differences on H_{n,beta} in canonical coordinates.
#pragma once

#include <functional>
#include <stdexcept>

#include "meixner/algebra.hpp"

namespace meixner {

struct StencilOutsideDomain : std::domain_error {
  using std::domain_error::domain_error;
};

using ScalarFn = std::function<double(const MatrixH&)>;

struct FdOptions {
  double rel_step = 1e-4;
  bool richardson = false;
};

// rel * (1 + |theta|)
double fd_step(const MatrixH& theta, double rel);

// f must return a non-finite value outside its domain; that raises
// StencilOutsideDomain.
MatrixH fd_gradient(const ScalarFn& f, const MatrixH& theta, double rel_step = 1e-5);
SymEndo fd_hessian(const ScalarFn& f, const MatrixH& theta, FdOptions opt = {});

}  // namespace meixner

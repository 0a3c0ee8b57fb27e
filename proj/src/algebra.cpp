#include "meixner/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace meixner {

namespace {

const double kSqrt2 = std::sqrt(2.0);

// index of the first coordinate of pair (i, j), i < j
int pair_offset(int i, int j, int n, int beta) {
  int p = i * n - i * (i + 1) / 2 + (j - i - 1);
  return n + p * beta;
}

}  // namespace

void check_beta(int beta) {
  if (beta != 1 && beta != 2 && beta != 4)
    throw std::invalid_argument("beta must be 1, 2 or 4, got " + std::to_string(beta));
}

void check_order(int n) {
  if (n < 1) throw std::invalid_argument("matrix order must be >= 1");
}

MatrixH::MatrixH(int n, int beta) : n_(n), beta_(beta) {
  check_order(n);
  check_beta(beta);
  coords_ = Eigen::VectorXd::Zero(hdim(n, beta));
}

MatrixH::MatrixH(int n, int beta, Eigen::VectorXd coords)
    : n_(n), beta_(beta), coords_(std::move(coords)) {
  check_order(n);
  check_beta(beta);
  if (coords_.size() != hdim(n, beta))
    throw std::invalid_argument("coordinate count does not match n and beta");
}

MatrixH MatrixH::identity(int n, int beta) {
  MatrixH x(n, beta);
  x.coords_.head(n).setOnes();
  return x;
}

MatrixH MatrixH::diag(const Eigen::VectorXd& d, int beta) {
  MatrixH x(static_cast<int>(d.size()), beta);
  x.coords_.head(d.size()) = d;
  return x;
}

MatrixH MatrixH::from_entries(const std::vector<std::vector<Scalar>>& e, int beta) {
  const int n = static_cast<int>(e.size());
  MatrixH x(n, beta);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(e[i].size()) != n) throw std::invalid_argument("entries must be square");
    x.coords_[i] = e[i][i].real();
    for (int j = i + 1; j < n; ++j) {
      const int off = pair_offset(i, j, n, beta);
      for (int u = 0; u < beta; ++u) x.coords_[off + u] = kSqrt2 * e[i][j].c[u];
    }
  }
  return x;
}

Scalar MatrixH::entry(int i, int j) const {
  if (i < 0 || j < 0 || i >= n_ || j >= n_) throw std::out_of_range("entry index");
  Scalar s(beta_);
  if (i == j) {
    s.c[0] = coords_[i];
    return s;
  }
  const int lo = std::min(i, j), hi = std::max(i, j);
  const int off = pair_offset(lo, hi, n_, beta_);
  for (int u = 0; u < beta_; ++u) s.c[u] = coords_[off + u] / kSqrt2;
  return i < j ? s : s.conj();
}

std::vector<std::vector<Scalar>> MatrixH::entries() const {
  std::vector<std::vector<Scalar>> e(n_, std::vector<Scalar>(n_));
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) e[i][j] = entry(i, j);
  return e;
}

void check_same_space(const MatrixH& x, const MatrixH& y) {
  if (x.n() != y.n() || x.beta() != y.beta())
    throw std::invalid_argument("matrices live in different spaces");
}

MatrixH& MatrixH::operator+=(const MatrixH& o) {
  check_same_space(*this, o);
  coords_ += o.coords_;
  return *this;
}

MatrixH& MatrixH::operator-=(const MatrixH& o) {
  check_same_space(*this, o);
  coords_ -= o.coords_;
  return *this;
}

MatrixH operator+(MatrixH a, const MatrixH& b) { return a += b; }
MatrixH operator-(MatrixH a, const MatrixH& b) { return a -= b; }
MatrixH operator-(MatrixH a) { return a *= -1.0; }
MatrixH operator*(double s, MatrixH a) { return a *= s; }
MatrixH operator*(MatrixH a, double s) { return a *= s; }

std::vector<MatrixH> canonical_basis(int n, int beta) {
  const int d = hdim(n, beta);
  std::vector<MatrixH> basis;
  basis.reserve(d);
  for (int a = 0; a < d; ++a) {
    MatrixH e(n, beta);
    e.coords()[a] = 1.0;
    basis.push_back(std::move(e));
  }
  return basis;
}

double inner(const MatrixH& x, const MatrixH& y) {
  check_same_space(x, y);
  return x.coords().dot(y.coords());
}

double trace(const MatrixH& x) { return x.coords().head(x.n()).sum(); }

double norm(const MatrixH& x) { return x.coords().norm(); }

Dense to_dense(const MatrixH& x) {
  const int n = x.n(), beta = x.beta(), e = embed_factor(beta);
  const auto& c = x.coords();
  Dense m = Dense::Zero(n * e, n * e);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < e; ++k) m(i * e + k, i * e + k) = c[i];
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const int off = pair_offset(i, j, n, beta);
      if (beta == 1) {
        m(i, j) = m(j, i) = c[off] / kSqrt2;
      } else if (beta == 2) {
        std::complex<double> z(c[off] / kSqrt2, c[off + 1] / kSqrt2);
        m(i, j) = z;
        m(j, i) = std::conj(z);
      } else {
        const double a = c[off] / kSqrt2, b = c[off + 1] / kSqrt2;
        const double cc = c[off + 2] / kSqrt2, d = c[off + 3] / kSqrt2;
        Eigen::Matrix2cd blk;
        blk << std::complex<double>(a, b), std::complex<double>(cc, d),
            std::complex<double>(-cc, d), std::complex<double>(a, -b);
        m.block<2, 2>(2 * i, 2 * j) = blk;
        m.block<2, 2>(2 * j, 2 * i) = blk.adjoint();
      }
    }
  }
  return m;
}

MatrixH from_dense(const Dense& m, int n, int beta) {
  const int e = embed_factor(beta);
  if (m.rows() != n * e || m.cols() != n * e)
    throw std::invalid_argument("dense matrix has the wrong size");
  MatrixH x(n, beta);
  auto& c = x.coords();
  if (beta != 4) {
    for (int i = 0; i < n; ++i) c[i] = m(i, i).real();
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const std::complex<double> h = 0.5 * (m(i, j) + std::conj(m(j, i)));
        const int off = pair_offset(i, j, n, beta);
        c[off] = kSqrt2 * h.real();
        if (beta == 2) c[off + 1] = kSqrt2 * h.imag();
      }
    }
    return x;
  }
  for (int i = 0; i < n; ++i)
    c[i] = 0.5 * (m(2 * i, 2 * i).real() + m(2 * i + 1, 2 * i + 1).real());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Eigen::Matrix2cd h =
          0.5 * (m.block<2, 2>(2 * i, 2 * j) + m.block<2, 2>(2 * j, 2 * i).adjoint());
      // projection of a complex 2x2 block onto the quaternion subalgebra
      const double a = 0.5 * (h(0, 0).real() + h(1, 1).real());
      const double b = 0.5 * (h(0, 0).imag() - h(1, 1).imag());
      const double cc = 0.5 * (h(0, 1).real() - h(1, 0).real());
      const double d = 0.5 * (h(0, 1).imag() + h(1, 0).imag());
      const int off = pair_offset(i, j, n, beta);
      c[off] = kSqrt2 * a;
      c[off + 1] = kSqrt2 * b;
      c[off + 2] = kSqrt2 * cc;
      c[off + 3] = kSqrt2 * d;
    }
  }
  return x;
}

double real_trace(const Dense& m, int beta) {
  return m.trace().real() / embed_factor(beta);
}

MatrixH square(const MatrixH& x) {
  const Dense d = to_dense(x);
  return from_dense(d * d, x.n(), x.beta());
}

MatrixH jordan(const MatrixH& x, const MatrixH& y) {
  check_same_space(x, y);
  // the Hermitian part of xy is (xy + yx)/2
  return from_dense(to_dense(x) * to_dense(y), x.n(), x.beta());
}

MatrixH power(const MatrixH& x, int k) {
  if (k < 0) throw std::invalid_argument("negative power");
  const Dense d = to_dense(x);
  Dense r = Dense::Identity(d.rows(), d.cols());
  for (int i = 0; i < k; ++i) r = r * d;
  return from_dense(r, x.n(), x.beta());
}

MatrixH conjugate(const Dense& u, const MatrixH& x) {
  return from_dense(u * to_dense(x) * u.adjoint(), x.n(), x.beta());
}

Eigen::VectorXd eigenvalues(const MatrixH& x) {
  const int n = x.n();
  if (x.beta() == 1) {
    Eigen::MatrixXd d = to_dense(x).real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(d, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver did not converge");
    return es.eigenvalues();
  }
  Eigen::SelfAdjointEigenSolver<Dense> es(to_dense(x), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver did not converge");
  const Eigen::VectorXd ev = es.eigenvalues();
  if (x.beta() == 2) return ev;
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) out[i] = 0.5 * (ev[2 * i] + ev[2 * i + 1]);
  return out;
}

SigmaPoint SigmaPoint::from_roots(const Eigen::VectorXd& roots) {
  return SigmaPoint(elementary_symmetric(roots));
}

Eigen::VectorXcd SigmaPoint::roots() const {
  const int n = this->n();
  if (n == 0) return {};
  // monic x^n + a_{n-1} x^{n-1} + ... + a_0 with a_{n-k} = (-1)^k sigma_k
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int k = 1; k <= n; ++k) {
    const double a = ((k % 2) ? -1.0 : 1.0) * at(k);
    comp(n - k, n - 1) = -a;
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  if (es.info() != Eigen::Success) throw std::runtime_error("companion eigensolver failed");
  return es.eigenvalues();
}

bool SigmaPoint::in_U(double rel_floor) const {
  const Eigen::VectorXcd r = roots();
  if (r.size() <= 1) return true;
  double radius = 0.0;
  for (int i = 0; i < r.size(); ++i) radius = std::max(radius, std::abs(r[i]));
  const double floor = rel_floor * (1.0 + radius);
  std::vector<double> re;
  for (int i = 0; i < r.size(); ++i) {
    if (std::abs(r[i].imag()) > floor) return false;
    re.push_back(r[i].real());
  }
  std::sort(re.begin(), re.end());
  for (size_t i = 1; i < re.size(); ++i)
    if (re[i] - re[i - 1] <= floor) return false;
  return true;
}

Eigen::VectorXd elementary_symmetric(const Eigen::VectorXd& lambda) {
  const int n = static_cast<int>(lambda.size());
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n + 1);
  e[0] = 1.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j >= 1; --j) e[j] += lambda[i] * e[j - 1];
  return e.tail(n);
}

SigmaPoint sigma(const MatrixH& theta) {
  return SigmaPoint(elementary_symmetric(eigenvalues(theta)));
}

MatrixH sigma_grad(const MatrixH& theta, int m) {
  if (m < 1) throw std::invalid_argument("sigma_grad needs m >= 1");
  const SigmaPoint s = sigma(theta);
  const Dense t = to_dense(theta);
  // Horner in -t: sum_i sigma_i (-t)^{m-1-i}
  Dense acc = Dense::Zero(t.rows(), t.cols());
  const Dense id = Dense::Identity(t.rows(), t.cols());
  for (int i = 0; i < m; ++i) acc = -(acc * t) + s.at(i) * id;
  return from_dense(acc, theta.n(), theta.beta());
}

MatrixH SymEndo::apply(const MatrixH& h) const {
  if (h.n() != n || h.beta() != beta) throw std::invalid_argument("endomorphism space mismatch");
  return MatrixH(n, beta, coeff * h.coords());
}

SymEndo SymEndo::rank_one(const MatrixH& y) {
  return {y.n(), y.beta(), y.coords() * y.coords().transpose()};
}

SymEndo SymEndo::quadratic(const MatrixH& y) {
  const int n = y.n(), beta = y.beta(), d = hdim(n, beta);
  const Dense yd = to_dense(y);
  SymEndo phi{n, beta, Eigen::MatrixXd(d, d)};
  MatrixH e(n, beta);
  for (int b = 0; b < d; ++b) {
    e.coords().setZero();
    e.coords()[b] = 1.0;
    phi.coeff.col(b) = from_dense(yd * to_dense(e) * yd, n, beta).coords();
  }
  return phi;
}

SymEndo SymEndo::identity(int n, int beta) {
  const int d = hdim(n, beta);
  return {n, beta, Eigen::MatrixXd::Identity(d, d)};
}

MatrixH psi_apply(const SymEndo& phi) {
  const int n = phi.n, beta = phi.beta, d = hdim(n, beta);
  if (phi.coeff.rows() != d || phi.coeff.cols() != d)
    throw std::invalid_argument("coefficient matrix has the wrong size");
  const double scale = std::max(1.0, phi.coeff.cwiseAbs().maxCoeff());
  if ((phi.coeff - phi.coeff.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("psi_apply: coefficient matrix is not symmetric");
  // Psi(phi)(I) = Hermitian part of sum_b e_b phi(e_b)
  const int e = embed_factor(beta);
  Dense acc = Dense::Zero(n * e, n * e);
  MatrixH eb(n, beta);
  for (int b = 0; b < d; ++b) {
    eb.coords().setZero();
    eb.coords()[b] = 1.0;
    acc += to_dense(eb) * to_dense(MatrixH(n, beta, phi.coeff.col(b)));
  }
  return from_dense(acc, n, beta);
}

}  // namespace meixner

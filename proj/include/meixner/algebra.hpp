// Hermitian matrices over the reals, complexes and quaternions, stored as
// coordinates in a fixed orthonormal basis.
#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <stdexcept>
#include <vector>

namespace meixner {

using Dense = Eigen::MatrixXcd;

void check_beta(int beta);
void check_order(int n);

// dim of H_{n,beta}
inline int hdim(int n, int beta) { return n + beta * n * (n - 1) / 2; }

// 1 for real/complex, 2 for quaternions (complex 2x2 blocks)
inline int embed_factor(int beta) { return beta == 4 ? 2 : 1; }

// Element of R, C or H. Components are coefficients of 1, i, j, k; only the
// first beta are meaningful.
template <typename T>
struct DivisionScalar {
  int beta = 1;
  std::array<T, 4> c{};

  DivisionScalar() = default;
  explicit DivisionScalar(int b) : beta(b) {}
  DivisionScalar(int b, T a0, T a1 = T(0), T a2 = T(0), T a3 = T(0))
      : beta(b), c{a0, a1, a2, a3} {}

  T real() const { return c[0]; }
  T norm2() const { return c[0] * c[0] + c[1] * c[1] + c[2] * c[2] + c[3] * c[3]; }

  DivisionScalar conj() const { return {beta, c[0], -c[1], -c[2], -c[3]}; }

  DivisionScalar operator+(const DivisionScalar& o) const {
    return {beta, c[0] + o.c[0], c[1] + o.c[1], c[2] + o.c[2], c[3] + o.c[3]};
  }
  DivisionScalar operator-(const DivisionScalar& o) const {
    return {beta, c[0] - o.c[0], c[1] - o.c[1], c[2] - o.c[2], c[3] - o.c[3]};
  }
  DivisionScalar operator*(T s) const {
    return {beta, c[0] * s, c[1] * s, c[2] * s, c[3] * s};
  }
  // Hamilton product; reduces to the complex/real product for beta < 4.
  DivisionScalar operator*(const DivisionScalar& o) const {
    const auto& p = c;
    const auto& q = o.c;
    return {beta,
            p[0] * q[0] - p[1] * q[1] - p[2] * q[2] - p[3] * q[3],
            p[0] * q[1] + p[1] * q[0] + p[2] * q[3] - p[3] * q[2],
            p[0] * q[2] - p[1] * q[3] + p[2] * q[0] + p[3] * q[1],
            p[0] * q[3] + p[1] * q[2] - p[2] * q[1] + p[3] * q[0]};
  }
  bool operator==(const DivisionScalar& o) const { return c == o.c; }
};

using Scalar = DivisionScalar<double>;

class MatrixH {
 public:
  MatrixH() = default;
  MatrixH(int n, int beta);
  MatrixH(int n, int beta, Eigen::VectorXd coords);

  static MatrixH zero(int n, int beta) { return MatrixH(n, beta); }
  static MatrixH identity(int n, int beta);
  static MatrixH diag(const Eigen::VectorXd& d, int beta);
  // entries must be Hermitian; only the upper triangle is read
  static MatrixH from_entries(const std::vector<std::vector<Scalar>>& e, int beta);

  int n() const { return n_; }
  int beta() const { return beta_; }
  int dim() const { return static_cast<int>(coords_.size()); }
  const Eigen::VectorXd& coords() const { return coords_; }
  Eigen::VectorXd& coords() { return coords_; }

  Scalar entry(int i, int j) const;
  std::vector<std::vector<Scalar>> entries() const;

  MatrixH& operator+=(const MatrixH& o);
  MatrixH& operator-=(const MatrixH& o);
  MatrixH& operator*=(double s) {
    coords_ *= s;
    return *this;
  }

 private:
  int n_ = 0;
  int beta_ = 1;
  Eigen::VectorXd coords_;
};

MatrixH operator+(MatrixH a, const MatrixH& b);
MatrixH operator-(MatrixH a, const MatrixH& b);
MatrixH operator-(MatrixH a);
MatrixH operator*(double s, MatrixH a);
MatrixH operator*(MatrixH a, double s);

void check_same_space(const MatrixH& x, const MatrixH& y);

std::vector<MatrixH> canonical_basis(int n, int beta);

double inner(const MatrixH& x, const MatrixH& y);
double trace(const MatrixH& x);
double norm(const MatrixH& x);

// Complex representation: n x n for beta 1,2 and 2n x 2n for beta 4.
Dense to_dense(const MatrixH& x);
// Coordinates of the Hermitian part of a dense matrix.
MatrixH from_dense(const Dense& m, int n, int beta);
// Re tr of the represented matrix
double real_trace(const Dense& m, int beta);

MatrixH square(const MatrixH& x);
MatrixH jordan(const MatrixH& x, const MatrixH& y);  // (xy + yx)/2
MatrixH power(const MatrixH& x, int k);
// u x u* for a dense unitary u in the same representation
MatrixH conjugate(const Dense& u, const MatrixH& x);

// Ascending, length n.
Eigen::VectorXd eigenvalues(const MatrixH& x);

// Elementary symmetric functions sigma_1..sigma_n.
class SigmaPoint {
 public:
  SigmaPoint() = default;
  explicit SigmaPoint(Eigen::VectorXd s) : s_(std::move(s)) {}
  static SigmaPoint from_roots(const Eigen::VectorXd& roots);

  int n() const { return static_cast<int>(s_.size()); }
  const Eigen::VectorXd& values() const { return s_; }
  Eigen::VectorXd& values() { return s_; }
  // sigma_0 = 1, sigma_j = 0 outside 0..n
  double at(int j) const {
    if (j == 0) return 1.0;
    if (j < 0 || j > n()) return 0.0;
    return s_[j - 1];
  }

  // Roots of sum (-1)^{n-i} sigma_i x^{n-i}, from the companion matrix.
  Eigen::VectorXcd roots() const;
  bool in_U(double rel_floor = 1e-9) const;

 private:
  Eigen::VectorXd s_;
};

Eigen::VectorXd elementary_symmetric(const Eigen::VectorXd& lambda);
SigmaPoint sigma(const MatrixH& theta);
MatrixH sigma_grad(const MatrixH& theta, int m);

// Symmetric endomorphism by its coefficients in the canonical basis.
struct SymEndo {
  int n = 0;
  int beta = 1;
  Eigen::MatrixXd coeff;

  MatrixH apply(const MatrixH& h) const;

  static SymEndo rank_one(const MatrixH& y);   // h -> y <y|h>
  static SymEndo quadratic(const MatrixH& y);  // h -> y h y
  static SymEndo identity(int n, int beta);
};

// Psi(phi)(I_n)
MatrixH psi_apply(const SymEndo& phi);

}  // namespace meixner

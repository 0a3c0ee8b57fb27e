#pragma once

#include <random>
#include <vector>

#include "meixner/algebra.hpp"

namespace testutil {

inline meixner::MatrixH random_h(int n, int beta, std::mt19937_64& g, double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, scale / std::sqrt(double(meixner::hdim(n, beta))));
  Eigen::VectorXd c(meixner::hdim(n, beta));
  for (int i = 0; i < c.size(); ++i) c[i] = nd(g);
  return meixner::MatrixH(n, beta, c);
}

inline double max_diff(const meixner::MatrixH& a, const meixner::MatrixH& b) {
  return (a.coords() - b.coords()).cwiseAbs().maxCoeff();
}

inline std::vector<std::pair<int, int>> spaces(int nmax = 4) {
  std::vector<std::pair<int, int>> out;
  for (int n = 1; n <= nmax; ++n)
    for (int beta : {1, 2, 4}) out.emplace_back(n, beta);
  return out;
}

}  // namespace testutil

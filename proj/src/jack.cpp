#include "meixner/jack.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "meixner/special.hpp"

namespace meixner {

const std::vector<std::vector<int>>& multiplicity_vectors(int k, int n) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::vector<std::vector<int>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({k, n});
  if (it != cache.end()) return it->second;
  std::vector<std::vector<int>> out;
  for (const Partition& p : partitions(k, n)) {
    std::vector<int> nu = p.multiplicities();
    nu.resize(n, 0);
    out.push_back(std::move(nu));
  }
  return cache.emplace(std::make_pair(k, n), std::move(out)).first->second;
}

namespace {

void check_k(int k) {
  if (k < 0) throw std::invalid_argument("Jack degree must be >= 0");
  if (k > 40) throw std::overflow_error("Jack degree above 40 is not supported");
}

// (-1)^{|nu|} (beta/2)_{|nu|} / prod nu_j! for every multiplicity vector of k
struct InnerTerms {
  std::vector<std::vector<int>> nu;
  std::vector<double> coef;
};

const InnerTerms& inner_terms(int k, int n, double beta) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, double>, InnerTerms> cache;
  const auto& nus = multiplicity_vectors(k, n);
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({k, n, beta});
  if (it != cache.end()) return it->second;
  const double h = beta / 2.0;
  InnerTerms t;
  t.nu = nus;
  for (const auto& nu : nus) {
    int len = 0;
    double lc = -std::lgamma(h);
    for (int v : nu) {
      len += v;
      lc -= std::lgamma(v + 1.0);
    }
    lc += std::lgamma(h + len);
    t.coef.push_back(((len % 2) ? -1.0 : 1.0) * std::exp(lc));
  }
  return cache.emplace(std::make_tuple(k, n, beta), std::move(t)).first->second;
}

// pw[j][m] = sigma_{j+1}^m
std::vector<std::vector<double>> power_table(const SigmaPoint& s, int kmax) {
  std::vector<std::vector<double>> pw(s.n(), std::vector<double>(kmax + 1, 1.0));
  for (int j = 0; j < s.n(); ++j)
    for (int m = 1; m <= kmax; ++m) pw[j][m] = pw[j][m - 1] * s.at(j + 1);
  return pw;
}

double inner_sum(const InnerTerms& t, const std::vector<std::vector<double>>& pw) {
  double acc = 0.0;
  for (std::size_t i = 0; i < t.nu.size(); ++i) {
    double mono = t.coef[i];
    const auto& nu = t.nu[i];
    for (std::size_t j = 0; j < nu.size(); ++j)
      if (nu[j]) mono *= pw[j][nu[j]];
    acc += mono;
  }
  return acc;
}

}  // namespace

double jack_one_part(int k, const SigmaPoint& s, double beta) {
  check_k(k);
  if (k == 0) return 1.0;
  const double h = beta / 2.0;
  const double scale = std::exp(std::lgamma(k + 1.0) + std::lgamma(h) - std::lgamma(h + k));
  return ((k % 2) ? -1.0 : 1.0) * scale * inner_sum(inner_terms(k, s.n(), beta), power_table(s, k));
}

double jack_one_part(int k, const MatrixH& theta) {
  return jack_one_part(k, sigma(theta), theta.beta());
}

SeriesResult lt_rank1_series(const SigmaPoint& s, int beta, JackSeriesConfig cfg) {
  check_beta(beta);
  check_k(cfg.max_k);
  const double nh = s.n() * beta / 2.0;
  const auto pw = power_table(s, cfg.max_k);
  SeriesResult r;
  double sum = 0.0, term = 0.0, inv = 1.0;
  for (int k = 0; k <= cfg.max_k; ++k) {
    if (k > 0) inv /= nh + k - 1;
    term = ((k % 2) ? -1.0 : 1.0) * inv * inner_sum(inner_terms(k, s.n(), beta), pw);
    sum += term;
  }
  r.value = sum;
  r.last_term = std::abs(term);
  r.converged = r.last_term <= 1e-12 * std::abs(sum);
  return r;
}

SeriesResult lt_rank1_series(const MatrixH& theta, JackSeriesConfig cfg) {
  return lt_rank1_series(sigma(theta), theta.beta(), cfg);
}

double lt_rank1_n3_closed(const MatrixH& theta) {
  if (theta.n() != 3 || theta.beta() != 2)
    throw std::invalid_argument("closed form needs n = 3, beta = 2");
  const Eigen::VectorXd t = eigenvalues(theta);
  const double t1 = t[0], t2 = t[1], t3 = t[2];
  if (std::min(t2 - t1, t3 - t2) <= 1e-4)
    throw std::domain_error("eigenvalue gap below 1e-4; use the series");
  const double e1 = std::exp(t1), e2 = std::exp(t2), e3 = std::exp(t3);
  return 2.0 * (e1 - e2) / ((t1 - t2) * (t2 - t3)) + 2.0 * (e1 - e3) / ((t1 - t3) * (t3 - t2));
}

double lt_bernoulli_n3(const MatrixH& theta, double q1, double q2, double q3, JackSeriesConfig cfg) {
  if (theta.n() != 3) throw std::invalid_argument("lt_bernoulli_n3 needs n = 3");
  for (double q : {q1, q2, q3})
    if (!(q >= 0.0)) throw std::invalid_argument("weights must be nonnegative");
  const double q0 = 1.0 - q1 - q2 - q3;
  if (q0 < -1e-12) throw std::invalid_argument("weights must sum to at most 1");
  const SigmaPoint s = sigma(theta);
  const double e = std::exp(s.at(1));
  double v = q0 + q3 * e;
  if (q1 != 0.0) v += q1 * lt_rank1_series(s, theta.beta(), cfg).value;
  if (q2 != 0.0) v += q2 * e * lt_rank1_series(sigma(-theta), theta.beta(), cfg).value;
  return v;
}

}  // namespace meixner

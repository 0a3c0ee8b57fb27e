#include "meixner/laplace.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "meixner/jack.hpp"
#include "meixner/special.hpp"

namespace meixner {

namespace {

const double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double nu_of(int beta) { return 0.5 * (beta - 1); }

double rank1_n2(const SigmaPoint& s, int beta) {
  const double s1 = s.at(1), s2 = s.at(2);
  return std::exp(s1 / 2.0) * bessel_i_norm_z(nu_of(beta), s1 * s1 / 4.0 - s2);
}

// L of a uniform rank-m projection; only ranks 0, 1, n-1, n are available.
double projection_lt(int m, const MatrixH& theta) {
  const int n = theta.n();
  if (m == 0) return 1.0;
  const double tr = trace(theta);
  if (m == n) return std::exp(tr);
  if (m == 1) return lt_rank1(theta);
  if (m == n - 1) return std::exp(tr) * lt_rank1(-theta);
  throw std::invalid_argument("closed form for rank " + std::to_string(m) + " projections at n = " +
                              std::to_string(n) + " is not available");
}

// sum_m w_m L_{P_m}(theta)
double weighted_projection_lt(const std::vector<double>& w, const MatrixH& theta) {
  double s = 0.0;
  for (size_t m = 0; m < w.size(); ++m)
    if (w[m] != 0.0) s += w[m] * projection_lt(static_cast<int>(m) + 1, theta);
  return s;
}

double bernoulli_lt(const std::vector<double>& q, const MatrixH& theta) {
  const double q0 = 1.0 - std::accumulate(q.begin(), q.end(), 0.0);
  return q0 + weighted_projection_lt(q, theta);
}

}  // namespace

LaplaceEval laplace_from_log(double k) {
  if (!std::isfinite(k)) return laplace_outside();
  return {std::exp(k), true, k};
}

LaplaceEval laplace_outside() { return {kInf, false, kInf}; }

double lt_rank1(const MatrixH& theta) {
  const int n = theta.n();
  if (n == 1) return std::exp(theta.coords()[0]);
  if (n == 2) return rank1_n2(sigma(theta), theta.beta());
  const SeriesResult r = lt_rank1_series(theta, JackSeriesConfig{40});
  if (!r.converged) throw std::domain_error("rank-one series did not converge at this theta");
  return r.value;
}

LaplaceEval lt_closed(const EnsembleSpec& spec, const MatrixH& theta) {
  validate(spec);
  if (theta.n() != spec.n || theta.beta() != spec.beta)
    throw std::invalid_argument("theta does not match the ensemble's n and beta");
  const int n = spec.n, beta = spec.beta;
  return std::visit(
      overloaded{
          [&](const Bernoulli& f) { return laplace_from_log(std::log(bernoulli_lt(f.q, theta))); },
          [&](const Binomial& f) {
            return laplace_from_log(f.N * std::log(bernoulli_lt(f.q, theta)));
          },
          [&](const Poisson& f) {
            double k = 0.0;
            for (int m = 0; m < n; ++m)
              if (f.lambda[m] != 0.0) k += f.lambda[m] * (projection_lt(m + 1, theta) - 1.0);
            return laplace_from_log(k);
          },
          [&](const NegBinomial& f) {
            const double p = 1.0 - std::accumulate(f.q.begin(), f.q.end(), 0.0);
            const double s = weighted_projection_lt(f.q, theta);
            if (!(s < 1.0)) return laplace_outside();
            return laplace_from_log(f.r * std::log(p) - f.r * std::log1p(-s));
          },
          [&](const Gaussian& f) {
            const double s1 = trace(theta), t2 = theta.coords().squaredNorm();
            return laplace_from_log(f.c1 * s1 + f.c2 * s1 * s1 / 2.0 + f.c3 * t2 / 2.0);
          },
          [&](const Gamma2& f) {
            const SigmaPoint s = sigma(theta);
            const double s1 = s.at(1), s2 = s.at(2), r = std::sqrt(1.0 + beta);
            const double q = 1.0 - 2.0 * f.c * r * s1 + beta * s1 * s1 + 4.0 * s2;
            // the component of {q > 0} that contains 0
            if (!(q > 0.0) || !(r * s1 < f.c)) return laplace_outside();
            return laplace_from_log(-f.p * std::log(q));
          },
          [&](const GammaN& f) {
            const SigmaPoint s = sigma(theta);
            const double s1 = s.at(1), s2 = s.at(2);
            const double kk = beta * (n - 1.0) + 2.0;
            // 1 - c tr + K tr^2 - 2 tr(theta^2), tr(theta^2) = s1^2 - 2 s2
            const double q = 1.0 - f.c * s1 + (kk - 2.0) * s1 * s1 + 4.0 * s2;
            if (!(q > 0.0) || !(s1 < f.c / (2.0 * (kk - 2.0 / n)))) return laplace_outside();
            return laplace_from_log(-f.p * std::log(q));
          },
          [&](const Hyperbolic2& f) {
            const Eigen::VectorXd t = eigenvalues(theta);
            const double phi = std::atan2(f.rho, 1.0 - f.lambda);
            const double ell = bessel_first_zero(beta);
            if (!(std::abs(t[0] + t[1] + phi) < std::numbers::pi / 2.0) || !(t[1] - t[0] < ell))
              return laplace_outside();
            const SigmaPoint s = sigma(theta);
            const double s1 = s.at(1), s2 = s.at(2);
            const double base = (1.0 - f.lambda) * std::cos(s1) - f.rho * std::sin(s1) +
                                f.lambda * bessel_i_norm_z(nu_of(beta), -(s1 * s1 - 4.0 * s2));
            if (!(base > 0.0)) return laplace_outside();
            return laplace_from_log(-f.alpha * std::log(base));
          }},
      spec.params);
}

LaplaceEval lt_standardized(const EnsembleSpec& spec, const MatrixH& theta) {
  const Moments m = theoretical_moments(spec);
  if (!(m.variance > 0.0)) throw std::invalid_argument("cannot standardize a degenerate law");
  const double sd = std::sqrt(m.variance);
  const LaplaceEval e = lt_closed(spec, theta * (1.0 / sd));
  if (!e.in_domain) return e;
  return laplace_from_log(e.k - m.mean * trace(theta) / sd);
}

ScalarFn log_laplace(const EnsembleSpec& spec) {
  return [spec](const MatrixH& t) { return lt_closed(spec, t).k; };
}

ScalarFn log_laplace_standardized(const EnsembleSpec& spec) {
  return [spec](const MatrixH& t) { return lt_standardized(spec, t).k; };
}

EmpiricalLt lt_empirical(const std::vector<MatrixH>& samples, const MatrixH& theta) {
  if (samples.empty()) throw std::invalid_argument("lt_empirical: empty batch");
  const double n = static_cast<double>(samples.size());
  double mean = 0.0, m2 = 0.0;
  long i = 0;
  for (const MatrixH& x : samples) {
    const double v = std::exp(inner(theta, x));
    ++i;
    const double d = v - mean;
    mean += d / i;
    m2 += d * (v - mean);
  }
  EmpiricalLt r;
  r.estimate = mean;
  r.standard_error = samples.size() > 1 ? std::sqrt(m2 / (n - 1.0) / n) : 0.0;
  return r;
}

std::string to_string(SolutionCase c) {
  switch (c) {
    case SolutionCase::elliptic: return "elliptic";
    case SolutionCase::parabolic: return "parabolic";
    case SolutionCase::hyperbolic: return "hyperbolic";
    case SolutionCase::poisson: return "poisson";
    case SolutionCase::gaussian: return "gaussian";
  }
  return "?";
}

SolutionCase solution_case_from_string(const std::string& s) {
  for (SolutionCase c : {SolutionCase::elliptic, SolutionCase::parabolic, SolutionCase::hyperbolic,
                         SolutionCase::poisson, SolutionCase::gaussian})
    if (to_string(c) == s) return c;
  throw std::invalid_argument("unknown solution case '" + s + "'");
}

SolutionFamily::SolutionFamily(SolutionCase c, SolutionConstants k, int beta)
    : case_(c), k_(k), beta_(beta) {
  check_beta(beta);
  auto require = [](bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
  };
  switch (c) {
    case SolutionCase::elliptic: {
      require(k.a != 0.0, "elliptic case needs a != 0");
      require(k.b * k.b > 4.0 * k.a, "elliptic case needs b^2 > 4a");
      kappa_ = std::sqrt(k.b * k.b - 4.0 * k.a);
      require(std::abs(k.C1 + k.C2 + k.C3 - 1.0) <= 1e-12, "elliptic case needs C1 + C2 + C3 = 1");
      require(std::abs(k.C2 - k.C1 - k.b / kappa_) <= 1e-12 * (1.0 + std::abs(k.b / kappa_)),
              "elliptic case needs C2 - C1 = b/kappa");
      break;
    }
    case SolutionCase::parabolic:
      require(k.b != 0.0, "parabolic case needs b != 0");
      k_.a = k.b * k.b / 4.0;
      break;
    case SolutionCase::hyperbolic:
      require(k.b * k.b < 4.0 * k.a, "hyperbolic case needs b^2 < 4a");
      kappa_ = std::sqrt(4.0 * k.a - k.b * k.b);
      break;
    case SolutionCase::poisson:
      require(k.b != 0.0, "poisson case needs b != 0");
      k_.a = 0.0;
      break;
    case SolutionCase::gaussian:
      k_.a = k_.b = 0.0;
      break;
  }
}

double SolutionFamily::g(double s1, double s2) const {
  const double nu = nu_of(beta_);
  const double d = s1 * s1 - 4.0 * s2;
  switch (case_) {
    case SolutionCase::elliptic:
      return k_.C1 * std::exp(kappa_ * s1) + k_.C2 * std::exp(-kappa_ * s1) +
             k_.C3 * bessel_i_norm_z(nu, kappa_ * kappa_ * d);
    case SolutionCase::parabolic:
      return 1.0 - k_.b * s1 + k_.C * (beta_ * s1 * s1 + 4.0 * s2);
    case SolutionCase::hyperbolic:
      return (1.0 - k_.lambda) * std::cos(kappa_ * s1) - (k_.b / kappa_) * std::sin(kappa_ * s1) +
             k_.lambda * bessel_i_norm_z(nu, -kappa_ * kappa_ * d);
    case SolutionCase::poisson: {
      const double b = k_.b;
      return ((1.0 - k_.C) * std::exp(2.0 * b * s1) +
              (2.0 * k_.C - 1.0) * std::exp(b * s1) * bessel_i_norm_z(nu, b * b * d) - k_.C) /
             (2.0 * b * b);
    }
    case SolutionCase::gaussian:
      return k_.C * s1 * s1 / 2.0 - (1.0 - k_.C) * (2.0 / beta_) * s2;
  }
  return 0.0;
}

LaplaceEval SolutionFamily::laplace(const MatrixH& theta) const {
  if (theta.n() != 2 || theta.beta() != beta_)
    throw std::invalid_argument("solution families live on H_{2,beta}");
  const SigmaPoint s = sigma(theta);
  const double s1 = s.at(1), s2 = s.at(2);
  const double gv = g(s1, s2);
  switch (case_) {
    case SolutionCase::elliptic:
    case SolutionCase::hyperbolic:
      if (!(gv > 0.0)) return laplace_outside();
      return laplace_from_log(-k_.b * s1 / (4.0 * k_.a) - std::log(gv) / (4.0 * k_.a));
    case SolutionCase::parabolic:
      if (!(gv > 0.0)) return laplace_outside();
      return laplace_from_log(-s1 / k_.b - std::log(gv) / (k_.b * k_.b));
    case SolutionCase::poisson:
      return laplace_from_log(-s1 / (2.0 * k_.b) + gv);
    case SolutionCase::gaussian:
      return laplace_from_log(gv);
  }
  return laplace_outside();
}

LaplaceEval lt_solution_family(SolutionCase c, const SolutionConstants& k, const MatrixH& theta) {
  return SolutionFamily(c, k, theta.beta()).laplace(theta);
}

}  // namespace meixner

#include "meixner/ensembles.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace meixner {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void check_weights(const std::vector<double>& q, int n, const std::string& what) {
  require(static_cast<int>(q.size()) == n, what + ": expected " + std::to_string(n) + " weights");
  double s = 0.0;
  for (double v : q) {
    require(std::isfinite(v) && v >= 0.0, what + ": weights must be nonnegative");
    s += v;
  }
  require(s <= 1.0 + 1e-12, what + ": weights must sum to at most 1");
}

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

std::string EnsembleSpec::family() const {
  return std::visit(overloaded{[](const Bernoulli&) { return "bernoulli"; },
                               [](const Binomial&) { return "binomial"; },
                               [](const Poisson&) { return "poisson"; },
                               [](const NegBinomial&) { return "negbinomial"; },
                               [](const Gaussian&) { return "gaussian"; },
                               [](const Gamma2&) { return "gamma2"; },
                               [](const GammaN&) { return "gamma_n"; },
                               [](const Hyperbolic2&) { return "hyperbolic2"; }},
                    params);
}

bool EnsembleSpec::samplable() const {
  return !std::holds_alternative<Gamma2>(params) && !std::holds_alternative<GammaN>(params) &&
         !std::holds_alternative<Hyperbolic2>(params);
}

double qbar(const std::vector<double>& q) {
  double s = 0.0;
  for (size_t j = 0; j < q.size(); ++j) s += (j + 1.0) * q[j];
  return s / static_cast<double>(q.size());
}

void validate(const EnsembleSpec& spec) {
  check_order(spec.n);
  check_beta(spec.beta);
  const int n = spec.n;
  const double beta = spec.beta;
  std::visit(
      overloaded{
          [&](const Bernoulli& f) { check_weights(f.q, n, "bernoulli"); },
          [&](const Binomial& f) {
            require(f.N >= 1, "binomial: N must be a positive integer");
            check_weights(f.q, n, "binomial");
          },
          [&](const Poisson& f) {
            require(static_cast<int>(f.lambda.size()) == n,
                    "poisson: expected " + std::to_string(n) + " rates");
            for (double v : f.lambda) require(std::isfinite(v) && v >= 0.0, "poisson: rates must be >= 0");
            require(sum(f.lambda) > 0.0, "poisson: total rate must be positive");
          },
          [&](const NegBinomial& f) {
            require(std::isfinite(f.r) && f.r > 0.0, "negbinomial: r must be > 0");
            check_weights(f.q, n, "negbinomial");
            require(sum(f.q) < 1.0, "negbinomial: weights must sum to less than 1");
          },
          [&](const Gaussian& f) {
            require(std::isfinite(f.c1) && std::isfinite(f.c2) && std::isfinite(f.c3),
                    "gaussian: parameters must be finite");
            require(f.c3 >= 0.0, "gaussian: c3 must be >= 0");
            require(n * f.c2 + f.c3 >= 0.0, "gaussian: n c2 + c3 must be >= 0");
          },
          [&](const Gamma2& f) {
            require(n == 2, "gamma2: n must be 2");
            require(f.p > beta / 2.0, "gamma2: p must exceed beta/2");
            require(f.c > 1.0, "gamma2: c must exceed 1");
          },
          [&](const GammaN& f) {
            const double k = beta * (n - 1) + 2.0;
            require(f.p > 0.0, "gamma_n: p must be > 0");
            require(f.c > 0.0 && f.c * f.c > 4.0 * (k - 2.0 / n),
                    "gamma_n: c must exceed 2 sqrt(beta(n-1) + 2 - 2/n)");
          },
          [&](const Hyperbolic2& f) {
            require(n == 2, "hyperbolic2: n must be 2");
            require(f.alpha > 0.0, "hyperbolic2: alpha must be > 0");
            const bool regular = f.lambda >= 0.0 && f.lambda < 1.0 && std::isfinite(f.rho);
            const bool exceptional = f.lambda == 1.0 && f.rho == 0.0;
            require(regular || exceptional,
                    "hyperbolic2: need 0 <= lambda < 1, or lambda = 1 with rho = 0");
          }},
      spec.params);
}

EnsembleSpec make_spec(int n, int beta, FamilyParams params) {
  EnsembleSpec s{n, beta, std::move(params)};
  validate(s);
  return s;
}

Moments theoretical_moments(const EnsembleSpec& spec) {
  const double n = spec.n, beta = spec.beta;
  return std::visit(
      overloaded{
          [&](const Bernoulli& f) {
            const double m = qbar(f.q);
            return Moments{m, m * (1.0 - m)};
          },
          [&](const Binomial& f) {
            const double m = qbar(f.q);
            return Moments{f.N * m, f.N * m * (1.0 - m)};
          },
          [&](const Poisson& f) {
            const double m = qbar(f.lambda);
            return Moments{m, m};
          },
          [&](const NegBinomial& f) {
            const double m = qbar(f.q), p = 1.0 - sum(f.q);
            return Moments{f.r * m / p, f.r * m * (p + m) / (p * p)};
          },
          [&](const Gaussian& f) {
            // Psi of the Hessian c2 I(x)I + c3 id at I
            return Moments{f.c1, f.c2 + f.c3 * (1.0 + beta * (n - 1.0) / 2.0)};
          },
          [&](const Gamma2& f) {
            const double s = std::sqrt(1.0 + beta);
            return Moments{2.0 * f.p * f.c * s, 4.0 * f.p * f.c * f.c * (1.0 + beta)};
          },
          [&](const GammaN& f) { return Moments{f.p * f.c, f.p * f.c * f.c}; },
          [&](const Hyperbolic2& f) {
            return Moments{f.rho * f.alpha, f.alpha * (1.0 + f.rho * f.rho)};
          }},
      spec.params);
}

void fill_standardized(MeixnerParams& p, double mean, double variance) {
  p.has_ab = false;
  if (!(variance > 0.0) || p.A == 1.0) return;
  const double sd = std::sqrt(variance);
  p.a = p.A / (2.0 * (1.0 - p.A));
  p.b = (p.B + 4.0 * p.A * mean) / (2.0 * sd * (1.0 - p.A));
  p.has_ab = true;
}

MeixnerParams meixner_params(const EnsembleSpec& spec) {
  validate(spec);
  const Moments m = theoretical_moments(spec);
  MeixnerParams p;
  std::visit(overloaded{[&](const Bernoulli&) {
                          p.A = -1.0;
                          p.B = 2.0;
                        },
                        [&](const Binomial& f) {
                          p.A = -1.0 / (2.0 * f.N - 1.0);
                          p.B = 2.0 * f.N / (2.0 * f.N - 1.0);
                        },
                        [&](const Poisson&) {
                          p.A = 0.0;
                          p.B = 1.0;
                        },
                        [&](const NegBinomial& f) {
                          p.A = 1.0 / (2.0 * f.r + 1.0);
                          p.B = 2.0 * f.r / (2.0 * f.r + 1.0);
                        },
                        [&](const Gaussian&) { p.C = 2.0 * m.variance; },
                        [&](const Gamma2& f) { p.A = 1.0 / (1.0 + 2.0 * f.p); },
                        [&](const GammaN& f) { p.A = 1.0 / (1.0 + 2.0 * f.p); },
                        [&](const Hyperbolic2& f) {
                          p.A = 1.0 / (1.0 + 2.0 * f.alpha);
                          // from 2v = A(2v + 4 mean^2) + 2 B mean + C; does not depend on rho
                          p.C = 4.0 * f.alpha * f.alpha / (2.0 * f.alpha + 1.0);
                        }},
             spec.params);
  fill_standardized(p, m.mean, m.variance);
  if (!p.has_ab) throw std::invalid_argument("meixner_params: degenerate law (zero variance)");
  return p;
}

MeixnerParams jorgensen_power(const MeixnerParams& p, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("jorgensen_power: alpha must be > 0");
  if (p.A == 1.0) throw std::invalid_argument("jorgensen_power: A must differ from 1");
  const double den = p.A + alpha * (1.0 - p.A);
  if (den == 0.0) throw std::invalid_argument("jorgensen_power: A + alpha(1-A) = 0");
  MeixnerParams r;
  r.A = p.A / den;
  r.B = alpha * p.B / den;
  r.C = alpha * alpha * p.C / den;
  return r;
}

MeixnerParams affine_params(const MeixnerParams& p, double alpha, double t) {
  MeixnerParams r;
  r.A = p.A;
  r.B = alpha * p.B - 4.0 * p.A * t;
  r.C = alpha * alpha * p.C + 4.0 * p.A * t * t - 2.0 * p.B * alpha * t;
  return r;
}

namespace {

// n*e x m*e Gaussian matrix with the division-algebra block structure
Dense ginibre(int rows, int cols, int beta, RngStream& rng) {
  const int e = embed_factor(beta);
  Dense g(rows * e, cols * e);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      if (beta == 1) {
        g(i, j) = rng.normal();
      } else if (beta == 2) {
        const double re = rng.normal();
        g(i, j) = std::complex<double>(re, rng.normal());
      } else {
        const double a = rng.normal(), b = rng.normal(), c = rng.normal(), d = rng.normal();
        g(2 * i, 2 * j) = {a, b};
        g(2 * i, 2 * j + 1) = {c, d};
        g(2 * i + 1, 2 * j) = {-c, d};
        g(2 * i + 1, 2 * j + 1) = {a, -b};
      }
    }
  }
  return g;
}

// Gram-Schmidt over block columns, twice for stability; the triangular factor
// gets a positive real diagonal, which makes the result Haar.
void orthonormalize(Dense& g, int beta) {
  const int e = embed_factor(beta);
  const int cols = static_cast<int>(g.cols()) / e;
  for (int k = 0; k < cols; ++k) {
    auto w = g.middleCols(k * e, e);
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < k; ++j) {
        const auto v = g.middleCols(j * e, e);
        const Dense coef = v.adjoint() * w;
        w -= v * coef;
      }
    }
    const double nrm = std::sqrt((w.adjoint() * w)(0, 0).real());
    w /= nrm;
  }
}

MatrixH bernoulli_draw(const std::vector<double>& q, int n, int beta, RngStream& rng) {
  const double u = rng.uniform();
  double acc = 1.0 - sum(q);
  int m = 0;
  while (m < n && u >= acc) {
    acc += q[m];
    ++m;
  }
  // rounding can leave u above the total; the last positive weight wins
  if (m == n && u >= acc) {
    while (m > 0 && q[m - 1] == 0.0) --m;
  }
  return sample_projection(m, n, beta, rng);
}

std::vector<double> normalized(const std::vector<double>& w) {
  const double s = sum(w);
  std::vector<double> out(w);
  for (double& v : out) v /= s;
  return out;
}

MatrixH compound(long count, const std::vector<double>& q, int n, int beta, RngStream& rng) {
  MatrixH x(n, beta);
  for (long k = 0; k < count; ++k) x += bernoulli_draw(q, n, beta, rng);
  return x;
}

}  // namespace

Dense haar_rotation(int n, int beta, RngStream& rng) {
  check_order(n);
  check_beta(beta);
  Dense g = ginibre(n, n, beta, rng);
  orthonormalize(g, beta);
  return g;
}

MatrixH sample_projection(int m, int n, int beta, RngStream& rng) {
  check_order(n);
  check_beta(beta);
  if (m < 0 || m > n) throw std::invalid_argument("sample_projection: rank out of range");
  if (m == 0) return MatrixH(n, beta);
  if (m == n) return MatrixH::identity(n, beta);
  Dense g = ginibre(n, m, beta, rng);
  orthonormalize(g, beta);
  return from_dense(g * g.adjoint(), n, beta);
}

MatrixH sample_ensemble(const EnsembleSpec& spec, RngStream& rng) {
  const int n = spec.n, beta = spec.beta;
  return std::visit(
      overloaded{
          [&](const Bernoulli& f) { return bernoulli_draw(f.q, n, beta, rng); },
          [&](const Binomial& f) { return compound(f.N, f.q, n, beta, rng); },
          [&](const Poisson& f) {
            const double lam = sum(f.lambda);
            std::poisson_distribution<long> pd(lam);
            const long count = pd(rng.engine());
            return compound(count, normalized(f.lambda), n, beta, rng);
          },
          [&](const NegBinomial& f) {
            const double q = sum(f.q), p = 1.0 - q;
            if (q == 0.0) return MatrixH(n, beta);
            std::gamma_distribution<double> gd(f.r, q / p);
            const double rate = gd(rng.engine());
            std::poisson_distribution<long> pd(rate);
            const long count = rate > 0.0 ? pd(rng.engine()) : 0;
            return compound(count, normalized(f.q), n, beta, rng);
          },
          [&](const Gaussian& f) {
            MatrixH z(n, beta);
            for (int a = 0; a < z.dim(); ++a) z.coords()[a] = rng.normal();
            const double zeta = rng.normal();
            const MatrixH id = MatrixH::identity(n, beta);
            MatrixH x = std::sqrt(f.c3) * (z - (trace(z) / n) * id);
            x += (std::sqrt(f.c2 + f.c3 / n) * zeta + f.c1) * id;
            return x;
          },
          [&](const auto&) -> MatrixH {
            throw UnsupportedSampler(spec.family() + " is an analytic-only family; no sampler");
          }},
      spec.params);
}

std::vector<MatrixH> sample_batch(const EnsembleSpec& spec, long count, std::uint64_t seed,
                                  int threads, std::uint64_t stream_base) {
  validate(spec);
  if (!spec.samplable())
    throw UnsupportedSampler(spec.family() + " is an analytic-only family; no sampler");
  std::vector<MatrixH> out(count > 0 ? count : 0);
  for_each_chunk(count, kSampleChunk, resolve_threads(threads), [&](long c, long lo, long hi) {
    RngStream rng(seed, stream_base + static_cast<std::uint64_t>(c));
    for (long i = lo; i < hi; ++i) out[i] = sample_ensemble(spec, rng);
  });
  return out;
}

}  // namespace meixner

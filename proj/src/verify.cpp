#include "meixner/verify.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "meixner/fd.hpp"
#include "meixner/laplace.hpp"

namespace meixner {

void Welford::add(double x) {
  ++count;
  const double d = x - mean;
  mean += d / count;
  m2 += d * (x - mean);
}

void Welford::merge(const Welford& o) {
  if (o.count == 0) return;
  if (count == 0) {
    *this = o;
    return;
  }
  const long total = count + o.count;
  const double d = o.mean - mean;
  mean += d * o.count / total;
  m2 += o.m2 + d * d * (static_cast<double>(count) * o.count / total);
  count = total;
}

double Welford::standard_error() const {
  return count > 0 ? std::sqrt(variance() / count) : 0.0;
}

bool TestReport::pass() const {
  for (const auto& r : rows)
    if (!r.pass) return false;
  return true;
}

double TestReport::max_abs_z() const {
  double m = 0.0;
  for (const auto& r : rows) m = std::max(m, std::abs(r.z));
  return m;
}

json TestReport::to_json() const {
  json j;
  j["schema"] = kReportSchema;
  j["version"] = MEIXNER_VERSION;
  j["test"] = test;
  json cfg;
  cfg["spec"] = meixner::to_json(spec);
  cfg["seed"] = seed;
  cfg["N"] = N;
  cfg["z_max"] = z_max;
  json th = json::array();
  for (const auto& t : thetas) th.push_back(meixner::to_json(t));
  cfg["thetas"] = th;
  j["config"] = cfg;
  json rs = json::array();
  for (const auto& r : rows) {
    json x;
    x["name"] = r.name;
    x["theta_index"] = r.theta_index;
    x["coordinate"] = r.coordinate;
    x["statistic"] = r.statistic;
    x["standard_error"] = r.standard_error;
    x["z"] = r.z;
    x["floor"] = r.floor;
    x["pass"] = r.pass;
    rs.push_back(x);
  }
  j["rows"] = rs;
  j["pass"] = pass();
  return j;
}

namespace {

TestRow make_row(std::string name, int ti, int coord, double stat, double se, double floor, double z_max) {
  TestRow r;
  r.name = std::move(name);
  r.theta_index = ti;
  r.coordinate = coord;
  r.statistic = stat;
  r.standard_error = se;
  r.floor = floor;
  if (se > 0.0)
    r.z = stat / se;
  else
    r.z = std::abs(stat) <= floor ? 0.0 : std::numeric_limits<double>::infinity();
  r.pass = std::abs(r.z) <= z_max || std::abs(stat) <= floor;
  return r;
}

// K statistics per draw, accumulated per chunk and merged in chunk order.
std::vector<Welford> chunked_means(long N, std::uint64_t seed, int threads, int K,
                                   const std::function<void(RngStream&, double*)>& draw) {
  const long chunks = (N + kSampleChunk - 1) / kSampleChunk;
  std::vector<std::vector<Welford>> acc(chunks, std::vector<Welford>(K));
  for_each_chunk(N, kSampleChunk, resolve_threads(threads), [&](long c, long lo, long hi) {
    RngStream rng(seed, static_cast<std::uint64_t>(c));
    std::vector<double> buf(K);
    auto& a = acc[c];
    for (long i = lo; i < hi; ++i) {
      draw(rng, buf.data());
      for (int k = 0; k < K; ++k) a[k].add(buf[k]);
    }
  });
  std::vector<Welford> out(K);
  for (const auto& a : acc)
    for (int k = 0; k < K; ++k) out[k].merge(a[k]);
  return out;
}

void require_samples(const EnsembleSpec& spec, long N) {
  validate(spec);
  if (N <= 0) throw std::invalid_argument("sample count must be positive");
  if (!spec.samplable()) throw UnsupportedSampler(spec.family() + " is an analytic-only family; no sampler");
}

void check_grid(const EnsembleSpec& spec, const std::vector<MatrixH>& thetas) {
  for (const auto& t : thetas) {
    if (t.n() != spec.n || t.beta() != spec.beta) throw std::invalid_argument("theta grid has wrong (n, beta)");
  }
}

TestReport header(const char* name, const EnsembleSpec& spec, std::uint64_t seed, long N,
                  const std::vector<MatrixH>& thetas, const VerifyOptions& opt) {
  TestReport rep;
  rep.test = name;
  rep.spec = spec;
  rep.seed = seed;
  rep.N = N;
  rep.thetas = thetas;
  rep.z_max = opt.z_max;
  return rep;
}

}  // namespace

TestReport regression_weak_test(const EnsembleSpec& spec, const std::vector<MatrixH>& thetas, long N,
                                std::uint64_t seed, const VerifyOptions& opt) {
  require_samples(spec, N);
  check_grid(spec, thetas);
  const MeixnerParams p = meixner_params(spec);
  const double A = p.A, B = p.B, C = p.C + opt.inject_C;
  const int T = static_cast<int>(thetas.size());
  const int dim = hdim(spec.n, spec.beta);
  const MatrixH id = MatrixH::identity(spec.n, spec.beta);
  auto acc = chunked_means(N, seed, opt.threads, T * dim, [&](RngStream& rng, double* out) {
    const MatrixH x = sample_ensemble(spec, rng);
    const MatrixH y = sample_ensemble(spec, rng);
    const MatrixH s = x + y;
    const MatrixH m = square(x - y) - A * square(s) - B * s - C * id;
    for (int t = 0; t < T; ++t) {
      const double w = std::exp(inner(thetas[t], s));
      for (int k = 0; k < dim; ++k) out[t * dim + k] = m.coords()[k] * w;
    }
  });
  TestReport rep = header("regression_weak", spec, seed, N, thetas, opt);
  for (int t = 0; t < T; ++t)
    for (int k = 0; k < dim; ++k) {
      const Welford& w = acc[t * dim + k];
      rep.rows.push_back(make_row("weak_residual", t, k, w.mean, w.standard_error(), opt.floor, opt.z_max));
    }
  return rep;
}

TestReport moment_test(const EnsembleSpec& spec, long N, std::uint64_t seed, const VerifyOptions& opt) {
  validate(spec);
  const Moments mo = theoretical_moments(spec);
  const int n = spec.n;
  if (spec.samplable()) {
    if (N <= 0) throw std::invalid_argument("sample count must be positive");
    const double mu = mo.mean, v = mo.variance;
    // With the exact mean plugged in, tr(X^2)/n - 2 mu tr(X)/n + mu^2 - v has
    // expectation zero.
    auto acc = chunked_means(N, seed, opt.threads, 2, [&](RngStream& rng, double* out) {
      const MatrixH x = sample_ensemble(spec, rng);
      const double a = trace(x) / n;
      const double b = x.coords().squaredNorm() / n;
      out[0] = a - mu;
      out[1] = b - 2.0 * mu * a + mu * mu - v;
    });
    TestReport rep = header("moments", spec, seed, N, {}, opt);
    rep.rows.push_back(make_row("mean", -1, -1, acc[0].mean, acc[0].standard_error(), opt.floor, opt.z_max));
    rep.rows.push_back(make_row("variance", -1, -1, acc[1].mean, acc[1].standard_error(), opt.floor, opt.z_max));
    return rep;
  }
  const ScalarFn k = log_laplace(spec);
  const MatrixH zero = MatrixH::zero(n, spec.beta);
  const MatrixH grad = fd_gradient(k, zero, 1e-5);
  const SymEndo hess = fd_hessian(k, zero, FdOptions{1e-4, false});
  TestReport rep = header("moments_fd", spec, seed, 0, {}, opt);
  const double scale_m = std::max(1.0, std::abs(mo.mean));
  for (int i = 0; i < n; ++i)
    rep.rows.push_back(make_row("mean", -1, i, (grad.coords()[i] - mo.mean) / scale_m, 0.0, 1e-6, opt.z_max));
  const double var = hess.coeff.trace() / n;
  rep.rows.push_back(make_row("variance", -1, -1, (var - mo.variance) / std::max(1.0, std::abs(mo.variance)), 0.0,
                              1e-5, opt.z_max));
  return rep;
}

TestReport lt_match_test(const EnsembleSpec& spec, const std::vector<MatrixH>& thetas, long N,
                         std::uint64_t seed, const VerifyOptions& opt) {
  require_samples(spec, N);
  check_grid(spec, thetas);
  const int T = static_cast<int>(thetas.size());
  std::vector<double> closed(T);
  for (int t = 0; t < T; ++t) {
    const LaplaceEval e = lt_closed(spec, thetas[t]);
    if (!e.in_domain) throw std::invalid_argument("theta " + std::to_string(t) + " is outside the Laplace domain");
    closed[t] = e.value;
  }
  auto acc = chunked_means(N, seed, opt.threads, T, [&](RngStream& rng, double* out) {
    const MatrixH x = sample_ensemble(spec, rng);
    for (int t = 0; t < T; ++t) out[t] = std::exp(inner(thetas[t], x));
  });
  TestReport rep = header("laplace_match", spec, seed, N, thetas, opt);
  for (int t = 0; t < T; ++t)
    rep.rows.push_back(
        make_row("laplace", t, -1, acc[t].mean - closed[t], acc[t].standard_error(), opt.floor, opt.z_max));
  return rep;
}

bool SuiteResult::pass() const {
  if (attempts.empty()) return false;
  for (const auto& r : attempts.back())
    if (!r.pass()) return false;
  return true;
}

json SuiteResult::to_json() const {
  json j;
  j["schema"] = "meixner.verify_suite/1";
  j["version"] = MEIXNER_VERSION;
  json at = json::array();
  for (std::size_t i = 0; i < attempts.size(); ++i) {
    json a;
    a["seed"] = seeds[i];
    json rs = json::array();
    bool ok = true;
    for (const auto& r : attempts[i]) {
      rs.push_back(r.to_json());
      ok = ok && r.pass();
    }
    a["pass"] = ok;
    a["reports"] = rs;
    at.push_back(a);
  }
  j["attempts"] = at;
  j["pass"] = pass();
  return j;
}

SuiteResult run_suite(const EnsembleSpec& spec, const std::vector<MatrixH>& thetas, long N,
                      std::uint64_t seed, const VerifyOptions& opt) {
  validate(spec);
  if (spec.samplable() && N <= 0) throw std::invalid_argument("sample count must be positive");
  SuiteResult out;
  std::uint64_t s = seed;
  for (int attempt = 0; attempt < 2; ++attempt) {
    std::vector<TestReport> reps;
    if (spec.samplable()) {
      reps.push_back(regression_weak_test(spec, thetas, N, derive_seed(s, 1), opt));
      reps.push_back(moment_test(spec, N, derive_seed(s, 2), opt));
      reps.push_back(lt_match_test(spec, thetas, N, derive_seed(s, 3), opt));
    } else {
      reps.push_back(moment_test(spec, N, s, opt));
    }
    out.seeds.push_back(s);
    out.attempts.push_back(std::move(reps));
    if (out.pass() || !spec.samplable()) break;
    s = derive_seed(seed, 1);
  }
  return out;
}

}  // namespace meixner

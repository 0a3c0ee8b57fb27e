#include "cli.hpp"

#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "meixner/ensembles.hpp"
#include "meixner/jack.hpp"
#include "meixner/json_io.hpp"
#include "meixner/laplace.hpp"
#include "meixner/pde.hpp"
#include "meixner/verify.hpp"

namespace meixner::cli {
namespace {

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct FamilyArgs {
  std::string family;
  int n = 0;  // 0: infer
  int beta = 1;
  std::vector<double> q, lambda;
  int N = 1;
  double r = 1.0;
  double c1 = 0.0, c2 = 0.0, c3 = 1.0;
  std::optional<double> p, c;
  double alpha = 1.0, rho = 0.0;
};

void add_family_options(CLI::App* cmd, FamilyArgs& f, bool family_required) {
  auto* fam = cmd->add_option("--family", f.family,
                              "bernoulli, binomial, poisson, negbinomial (nb, nb2), gaussian, gamma2, gamma_n, "
                              "hyperbolic2");
  if (family_required) fam->required();
  cmd->add_option("--n", f.n, "matrix order; inferred from --q or --lambda when omitted");
  cmd->add_option("--beta", f.beta, "1, 2 or 4")->default_val(1);
  cmd->add_option("--q", f.q, "weights q_1..q_n")->delimiter(',');
  cmd->add_option("--lambda", f.lambda, "Poisson rates, or the hyperbolic lambda")->delimiter(',');
  cmd->add_option("--N", f.N, "binomial trials");
  cmd->add_option("--r", f.r, "negative binomial shape");
  cmd->add_option("--c1", f.c1, "gaussian: coefficient of tr(theta)");
  cmd->add_option("--c2", f.c2, "gaussian: coefficient of tr(theta)^2 / 2");
  cmd->add_option("--c3", f.c3, "gaussian: coefficient of tr(theta^2) / 2");
  cmd->add_option("--p", f.p, "gamma shape");
  cmd->add_option("--c", f.c, "gamma scale parameter");
  cmd->add_option("--alpha", f.alpha, "hyperbolic shape");
  cmd->add_option("--rho", f.rho, "hyperbolic skew");
}

int infer_n(const FamilyArgs& f, std::size_t len) {
  if (f.n > 0) return f.n;
  if (len == 0) throw ConfigError("--n is required");
  return static_cast<int>(len);
}

EnsembleSpec build_spec(const FamilyArgs& f) {
  const std::string& name = f.family;
  EnsembleSpec s;
  s.beta = f.beta;
  if (name == "bernoulli") {
    s.n = infer_n(f, f.q.size());
    s.params = Bernoulli{f.q};
  } else if (name == "binomial") {
    s.n = infer_n(f, f.q.size());
    s.params = Binomial{f.N, f.q};
  } else if (name == "poisson") {
    s.n = infer_n(f, f.lambda.size());
    s.params = Poisson{f.lambda};
  } else if (name == "negbinomial" || name == "nb" || name == "nb2") {
    s.n = infer_n(f, f.q.size());
    if (name == "nb2" && s.n != 2) throw ConfigError("nb2 needs n = 2");
    s.params = NegBinomial{f.r, f.q};
  } else if (name == "gaussian") {
    s.n = f.n > 0 ? f.n : 2;
    s.params = Gaussian{f.c1, f.c2, f.c3};
  } else if (name == "gamma2") {
    s.n = f.n > 0 ? f.n : 2;
    Gamma2 g;
    if (f.p) g.p = *f.p;
    if (f.c) g.c = *f.c;
    s.params = g;
  } else if (name == "gamma_n") {
    s.n = f.n > 0 ? f.n : 2;
    GammaN g;
    if (f.p) g.p = *f.p;
    if (f.c) g.c = *f.c;
    s.params = g;
  } else if (name == "hyperbolic2") {
    s.n = f.n > 0 ? f.n : 2;
    if (f.lambda.size() > 1) throw ConfigError("hyperbolic2 takes a scalar --lambda");
    s.params = Hyperbolic2{f.alpha, f.lambda.empty() ? 0.0 : f.lambda[0], f.rho};
  } else {
    throw ConfigError("unknown family '" + name + "'");
  }
  validate(s);
  return s;
}

// Writes to --out when given, otherwise to the command's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw ConfigError("cannot open output file " + path);
    }
    os_ = file_ ? file_.get() : &fallback;
  }
  std::ostream& os() { return *os_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_;
};

json header(const std::string& command, const json& config) {
  json h;
  h["tool"] = "meixner_cli";
  h["version"] = MEIXNER_VERSION;
  h["command"] = command;
  h["config"] = config;
  return h;
}

json sigma_json(const SigmaPoint& s) {
  return std::vector<double>(s.values().data(), s.values().data() + s.n());
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Meixner matrix ensembles: sampling, Laplace transforms and verification"};
  app.set_version_flag("--version", std::string(MEIXNER_VERSION));
  app.require_subcommand(1);
  app.fallthrough();
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (default MEIXNER_THREADS or all cores)");

  FamilyArgs fa;
  std::uint64_t seed = 1;
  long count = 0;
  std::string out_path, format = "json", grid;
  double inject = 0.0;
  int max_k = 30;

  auto* sample = app.add_subcommand("sample", "draw matrices from a samplable family");
  add_family_options(sample, fa, true);
  sample->add_option("--count", count)->required();
  sample->add_option("--seed", seed);
  sample->add_option("--format", format, "json lines or csv")->check(CLI::IsMember({"json", "csv"}));
  sample->add_option("--out", out_path);

  auto* verify = app.add_subcommand("verify", "regression, moment and Laplace checks");
  add_family_options(verify, fa, true);
  verify->add_option("--count", count)->default_val(200000);
  verify->add_option("--seed", seed);
  verify->add_option("--grid", grid, "theta grid (default: five points of size <= 0.3)");
  verify->add_option("--inject-wrong-C", inject, "offset added to C in the regression test");
  verify->add_option("--out", out_path);

  auto* pde = app.add_subcommand("pde", "residual scans for a family or an n = 2 solution");
  add_family_options(pde, fa, false);
  std::string case_name;
  SolutionConstants k;
  bool exact = false;
  pde->add_option("--case", case_name)->check(CLI::IsMember({"elliptic", "parabolic", "hyperbolic", "poisson", "gaussian"}));
  pde->add_option("--a", k.a);
  pde->add_option("--b", k.b);
  pde->add_option("--C", k.C);
  pde->add_option("--C1", k.C1);
  pde->add_option("--C2", k.C2);
  pde->add_option("--C3", k.C3);
  pde->add_option("--grid", grid, "theta grid; 'default' picks one per mode")->default_val("default");
  pde->add_option("--seed", seed);
  pde->add_flag("--exact", exact, "also use exact derivatives where known");
  pde->add_option("--out", out_path);

  auto* laplace = app.add_subcommand("laplace", "tabulate closed-form Laplace transforms");
  add_family_options(laplace, fa, true);
  laplace->add_option("--theta,--grid", grid)->required();
  laplace->add_option("--out", out_path);

  auto* jack = app.add_subcommand("jack", "Jack series for rank-one projections");
  int jn = 2, jbeta = 1;
  jack->add_option("--n", jn)->required();
  jack->add_option("--beta", jbeta)->default_val(1);
  jack->add_option("--theta,--grid", grid)->required();
  jack->add_option("--max-k", max_k, "last series term, at most 40")->default_val(30);
  jack->add_option("--out", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (*sample) {
      const EnsembleSpec spec = build_spec(fa);
      if (!spec.samplable()) throw ConfigError(spec.family() + " is an analytic-only family; no sampler");
      if (count <= 0) throw ConfigError("--count must be positive");
      const auto xs = sample_batch(spec, count, seed, threads);
      Sink sink(out_path, out);
      json cfg;
      cfg["spec"] = to_json(spec);
      cfg["seed"] = seed;
      cfg["count"] = count;
      cfg["format"] = format;
      if (format == "json") {
        sink.os() << dump17(header("sample", cfg)) << '\n';
        for (long i = 0; i < count; ++i) {
          json row;
          row["i"] = i;
          row["coords"] = std::vector<double>(xs[i].coords().data(), xs[i].coords().data() + xs[i].dim());
          sink.os() << dump17(row) << '\n';
        }
      } else {
        sink.os() << "# " << dump17(header("sample", cfg)) << '\n';
        sink.os() << "i";
        for (int c = 0; c < hdim(spec.n, spec.beta); ++c) sink.os() << ",x" << c;
        sink.os() << '\n';
        for (long i = 0; i < count; ++i) {
          sink.os() << i;
          for (int c = 0; c < xs[i].dim(); ++c) sink.os() << ',' << format17(xs[i].coords()[c]);
          sink.os() << '\n';
        }
      }
      return 0;
    }

    if (*verify) {
      const EnsembleSpec spec = build_spec(fa);
      if (spec.samplable() && count <= 0) throw ConfigError("--count must be positive");
      const auto thetas = grid.empty() ? default_weak_grid(spec.n, spec.beta) : parse_grid(grid, spec.n, spec.beta);
      VerifyOptions opt;
      opt.threads = threads;
      opt.inject_C = inject;
      const SuiteResult res = run_suite(spec, thetas, count, seed, opt);
      json cfg;
      cfg["spec"] = to_json(spec);
      cfg["seed"] = seed;
      cfg["count"] = count;
      cfg["grid"] = grid.empty() ? "default" : grid;
      cfg["inject_wrong_C"] = inject;
      json doc = header("verify", cfg);
      doc["result"] = res.to_json();
      Sink sink(out_path, out);
      sink.os() << dump17(doc) << '\n';
      return res.pass() ? 0 : 1;
    }

    if (*pde) {
      Sink sink(out_path, out);
      double worst = 0.0;
      long flagged = 0, used = 0;
      json cfg;
      cfg["grid"] = grid;
      cfg["seed"] = seed;
      if (!case_name.empty()) {
        const SolutionCase sc = solution_case_from_string(case_name);
        if (sc == SolutionCase::hyperbolic) k.lambda = fa.lambda.empty() ? 0.0 : fa.lambda.at(0);
        const SolutionFamily sol(sc, k, fa.beta);
        const PdeCase pc = pde_case(sol);
        cfg["case"] = case_name;
        cfg["beta"] = fa.beta;
        json params;
        const auto& kk = sol.constants();
        params["a"] = kk.a;
        params["b"] = kk.b;
        params["C"] = kk.C;
        params["C1"] = kk.C1;
        params["C2"] = kk.C2;
        params["C3"] = kk.C3;
        params["lambda"] = kk.lambda;
        cfg["params"] = params;
        sink.os() << dump17(header("pde", cfg)) << '\n';
        const std::string g = grid == "default" ? "rand:100:0.5:" + std::to_string(seed) : grid;
        const SigmaFn fn = [&sol](const SigmaPoint& s) { return sol.g(s.at(1), s.at(2)); };
        for (const MatrixH& th : parse_grid(g, 2, fa.beta)) {
          const SigmaPoint sp = sigma(th);
          json row;
          row["theta"] = to_json(th);
          row["sigma"] = sigma_json(sp);
          row["case"] = to_string(pc.tag);
          if (!sp.in_U()) {
            row["in_domain"] = false;
            ++flagged;
          } else {
            const double r = max_abs(pde_residual(pc, fn, sp, fa.beta));
            row["in_domain"] = true;
            row["residual_max_abs"] = r;
            worst = std::max(worst, r);
            ++used;
            if (exact) {
              if (auto d = exact_derivs(sol, sp)) row["residual_exact"] = max_abs(pde_residual(pc, *d, fa.beta));
            }
          }
          sink.os() << dump17(row) << '\n';
        }
      } else {
        if (fa.family.empty()) throw ConfigError("pde needs --family or --case");
        const EnsembleSpec spec = build_spec(fa);
        const MeixnerParams mp = meixner_params(spec);
        if (!mp.has_ab) throw ConfigError(spec.family() + " has no standardized (a, b)");
        cfg["spec"] = to_json(spec);
        json params;
        params["a"] = mp.a;
        params["b"] = mp.b;
        cfg["params"] = params;
        sink.os() << dump17(header("pde", cfg)) << '\n';
        const std::string g = grid == "default" ? "rand:20:0.3:" + std::to_string(seed) : grid;
        const ScalarFn kfn = log_laplace_standardized(spec);
        const std::string tag = to_string(PdeCase::from_ab(mp.a, mp.b).tag);
        for (const MatrixH& th : parse_grid(g, spec.n, spec.beta)) {
          json row;
          row["theta"] = to_json(th);
          row["case"] = tag;
          try {
            const double r = max_abs(k_equation_residual(kfn, mp.a, mp.b, th));
            row["in_domain"] = true;
            row["residual_max_abs"] = r;
            worst = std::max(worst, r);
            ++used;
          } catch (const StencilOutsideDomain&) {
            row["in_domain"] = false;
            ++flagged;
          }
          sink.os() << dump17(row) << '\n';
        }
      }
      json summary;
      summary["points"] = used;
      summary["flagged"] = flagged;
      summary["max_residual"] = worst;
      json s;
      s["summary"] = summary;
      sink.os() << dump17(s) << '\n';
      return 0;
    }

    if (*laplace) {
      const EnsembleSpec spec = build_spec(fa);
      const auto thetas = parse_grid(grid, spec.n, spec.beta);
      Sink sink(out_path, out);
      json cfg;
      cfg["spec"] = to_json(spec);
      cfg["grid"] = grid;
      sink.os() << dump17(header("laplace", cfg)) << '\n';
      for (const auto& th : thetas) {
        const LaplaceEval e = lt_closed(spec, th);
        json row;
        row["theta"] = to_json(th);
        row["value"] = e.value;
        row["in_domain"] = e.in_domain;
        sink.os() << dump17(row) << '\n';
      }
      return 0;
    }

    if (*jack) {
      check_order(jn);
      check_beta(jbeta);
      if (max_k < 0 || max_k > 40) throw ConfigError("--max-k must be in 0..40");
      const auto thetas = parse_grid(grid, jn, jbeta);
      Sink sink(out_path, out);
      json cfg;
      cfg["n"] = jn;
      cfg["beta"] = jbeta;
      cfg["grid"] = grid;
      cfg["max_k"] = max_k;
      sink.os() << dump17(header("jack", cfg)) << '\n';
      for (const auto& th : thetas) {
        const SeriesResult r = lt_rank1_series(th, JackSeriesConfig{max_k});
        json row;
        row["theta"] = to_json(th);
        row["value"] = r.value;
        row["last_term"] = r.last_term;
        row["converged"] = r.converged;
        if (jn <= 2) {
          row["closed"] = lt_rank1(th);
        } else if (jn == 3 && jbeta == 2) {
          try {
            row["closed"] = lt_rank1_n3_closed(th);
          } catch (const std::domain_error&) {
            row["closed"] = nullptr;
          }
        }
        sink.os() << dump17(row) << '\n';
      }
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace meixner::cli

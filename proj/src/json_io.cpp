#include "meixner/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "meixner/rng.hpp"

namespace meixner {

json to_json(const MatrixH& x) {
  json j;
  j["n"] = x.n();
  j["beta"] = x.beta();
  j["coords"] = std::vector<double>(x.coords().data(), x.coords().data() + x.dim());
  return j;
}

MatrixH matrix_from_json(const json& j) {
  const int n = j.at("n").get<int>();
  const int beta = j.at("beta").get<int>();
  const auto c = j.at("coords").get<std::vector<double>>();
  return MatrixH(n, beta, Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<long>(c.size())));
}

namespace {

struct SpecParams {
  json& j;
  void operator()(const Bernoulli& p) const { j["q"] = p.q; }
  void operator()(const Binomial& p) const {
    j["N"] = p.N;
    j["q"] = p.q;
  }
  void operator()(const Poisson& p) const { j["lambda"] = p.lambda; }
  void operator()(const NegBinomial& p) const {
    j["r"] = p.r;
    j["q"] = p.q;
  }
  void operator()(const Gaussian& p) const {
    j["c1"] = p.c1;
    j["c2"] = p.c2;
    j["c3"] = p.c3;
  }
  void operator()(const Gamma2& p) const {
    j["p"] = p.p;
    j["c"] = p.c;
  }
  void operator()(const GammaN& p) const {
    j["p"] = p.p;
    j["c"] = p.c;
  }
  void operator()(const Hyperbolic2& p) const {
    j["alpha"] = p.alpha;
    j["lambda"] = p.lambda;
    j["rho"] = p.rho;
  }
};

void write(std::string& out, const json& j) {
  switch (j.type()) {
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += json(it.key()).dump();
        out += ':';
        write(out, it.value());
      }
      out += '}';
      break;
    }
    case json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        write(out, j[i]);
      }
      out += ']';
      break;
    }
    case json::value_t::number_float: out += format17(j.get<double>()); break;
    default: out += j.dump(); break;
  }
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    const double x = std::stod(item, &pos);
    if (pos != item.size()) throw std::invalid_argument("bad number '" + item + "'");
    v.push_back(x);
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

}  // namespace

json to_json(const EnsembleSpec& spec) {
  json j;
  j["family"] = spec.family();
  j["n"] = spec.n;
  j["beta"] = spec.beta;
  json params = json::object();
  std::visit(SpecParams{params}, spec.params);
  j["params"] = params;
  return j;
}

EnsembleSpec spec_from_json(const json& j) {
  EnsembleSpec s;
  s.n = j.at("n").get<int>();
  s.beta = j.at("beta").get<int>();
  const std::string f = j.at("family").get<std::string>();
  const json& p = j.at("params");
  if (f == "bernoulli") {
    s.params = Bernoulli{p.at("q").get<std::vector<double>>()};
  } else if (f == "binomial") {
    s.params = Binomial{p.at("N").get<int>(), p.at("q").get<std::vector<double>>()};
  } else if (f == "poisson") {
    s.params = Poisson{p.at("lambda").get<std::vector<double>>()};
  } else if (f == "negbinomial") {
    s.params = NegBinomial{p.at("r").get<double>(), p.at("q").get<std::vector<double>>()};
  } else if (f == "gaussian") {
    s.params = Gaussian{p.at("c1").get<double>(), p.at("c2").get<double>(), p.at("c3").get<double>()};
  } else if (f == "gamma2") {
    s.params = Gamma2{p.at("p").get<double>(), p.at("c").get<double>()};
  } else if (f == "gamma_n") {
    s.params = GammaN{p.at("p").get<double>(), p.at("c").get<double>()};
  } else if (f == "hyperbolic2") {
    s.params = Hyperbolic2{p.at("alpha").get<double>(), p.at("lambda").get<double>(), p.at("rho").get<double>()};
  } else {
    throw std::invalid_argument("unknown family '" + f + "'");
  }
  validate(s);
  return s;
}

std::string format17(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string dump17(const json& j) {
  std::string out;
  write(out, j);
  return out;
}

std::vector<MatrixH> parse_grid(const std::string& dsl, int n, int beta) {
  check_order(n);
  check_beta(beta);
  std::vector<MatrixH> out;
  for (const std::string& item : split(dsl, ';')) {
    if (item.empty()) continue;
    if (item == "0") {
      out.push_back(MatrixH::zero(n, beta));
    } else if (item == "default") {
      for (auto& t : default_weak_grid(n, beta)) out.push_back(t);
    } else if (item.rfind("diag:", 0) == 0) {
      const auto d = parse_list(item.substr(5));
      if (static_cast<int>(d.size()) != n)
        throw std::invalid_argument("diag grid item needs " + std::to_string(n) + " entries");
      out.push_back(MatrixH::diag(Eigen::Map<const Eigen::VectorXd>(d.data(), n), beta));
    } else if (item.rfind("coords:", 0) == 0) {
      const auto c = parse_list(item.substr(7));
      if (static_cast<int>(c.size()) != hdim(n, beta))
        throw std::invalid_argument("coords grid item needs " + std::to_string(hdim(n, beta)) + " entries");
      out.emplace_back(n, beta, Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<long>(c.size())));
    } else if (item.rfind("rand:", 0) == 0) {
      const auto f = split(item.substr(5), ':');
      if (f.size() != 3) throw std::invalid_argument("rand grid item is rand:N:scale:seed");
      const long count = std::stol(f[0]);
      const double scale = std::stod(f[1]);
      const std::uint64_t seed = std::stoull(f[2]);
      if (count < 0) throw std::invalid_argument("rand grid count must be >= 0");
      RngStream rng(seed, 0x67726964);
      const int dim = hdim(n, beta);
      for (long i = 0; i < count; ++i) {
        Eigen::VectorXd c(dim);
        for (int k = 0; k < dim; ++k) c[k] = rng.normal() * scale / std::sqrt(double(dim));
        out.emplace_back(n, beta, c);
      }
    } else if (item.rfind("file:", 0) == 0) {
      std::ifstream in(item.substr(5));
      if (!in) throw std::invalid_argument("cannot open grid file " + item.substr(5));
      const json j = json::parse(in);
      for (const auto& t : j.at("thetas")) {
        MatrixH m = matrix_from_json(t);
        if (m.n() != n || m.beta() != beta) throw std::invalid_argument("grid file matrix has wrong (n, beta)");
        out.push_back(std::move(m));
      }
    } else {
      throw std::invalid_argument("unknown grid item '" + item + "'");
    }
  }
  return out;
}

std::vector<MatrixH> default_weak_grid(int n, int beta) {
  std::vector<MatrixH> g;
  g.push_back(MatrixH::zero(n, beta));
  Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
  d[0] = 0.3;
  g.push_back(MatrixH::diag(d, beta));
  d.setZero();
  d[0] = -0.2;
  d[n - 1] += 0.1;
  g.push_back(MatrixH::diag(d, beta));
  g.push_back(MatrixH::diag(Eigen::VectorXd::Constant(n, 0.15), beta));
  if (n > 1) {
    MatrixH off(n, beta);
    off.coords()[n] = 0.3;
    g.push_back(off);
  } else {
    g.push_back(MatrixH::diag(Eigen::VectorXd::Constant(1, -0.3), beta));
  }
  return g;
}

}  // namespace meixner

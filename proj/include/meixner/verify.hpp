// Monte Carlo and finite-difference checks of ensembles against their
// closed forms, reported as z-tests.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "meixner/algebra.hpp"
#include "meixner/ensembles.hpp"
#include "meixner/json_io.hpp"

namespace meixner {

inline constexpr const char* kReportSchema = "meixner.test_report/1";

struct VerifyOptions {
  double z_max = 4.0;
  double floor = 1e-12;
  int threads = 0;
  double inject_C = 0.0;  // added to C in the regression test
};

struct TestRow {
  std::string name;
  int theta_index = -1;
  int coordinate = -1;
  double statistic = 0.0;
  double standard_error = 0.0;
  double z = 0.0;
  double floor = 0.0;
  bool pass = true;
};

struct TestReport {
  std::string test;
  EnsembleSpec spec;
  std::uint64_t seed = 0;
  long N = 0;
  std::vector<MatrixH> thetas;
  double z_max = 4.0;
  std::vector<TestRow> rows;

  bool pass() const;
  double max_abs_z() const;
  json to_json() const;
};

// Running mean / second moment, merged in a fixed order.
struct Welford {
  long count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x);
  void merge(const Welford& o);
  double variance() const { return count > 1 ? m2 / (count - 1) : 0.0; }
  double standard_error() const;
};

// E[((X - Y)^2 - A S^2 - B S - C I) exp<theta|S>] = 0 with S = X + Y,
// one row per theta and coordinate.
TestReport regression_weak_test(const EnsembleSpec& spec, const std::vector<MatrixH>& thetas, long N,
                                std::uint64_t seed, const VerifyOptions& opt = {});

// Mean and variance scalars; sampled when possible, otherwise finite
// differences of log L at 0.
TestReport moment_test(const EnsembleSpec& spec, long N, std::uint64_t seed, const VerifyOptions& opt = {});

TestReport lt_match_test(const EnsembleSpec& spec, const std::vector<MatrixH>& thetas, long N,
                         std::uint64_t seed, const VerifyOptions& opt = {});

struct SuiteResult {
  std::vector<std::uint64_t> seeds;            // one per attempt
  std::vector<std::vector<TestReport>> attempts;
  bool pass() const;
  json to_json() const;
};

// All three tests; one retry with derive_seed(seed, 1) if anything fails.
SuiteResult run_suite(const EnsembleSpec& spec, const std::vector<MatrixH>& thetas, long N,
                      std::uint64_t seed, const VerifyOptions& opt = {});

}  // namespace meixner

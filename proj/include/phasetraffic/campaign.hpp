#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "phasetraffic/analysis.hpp"

namespace phasetraffic::campaign {

// ratio gap / perturbation size accepted by the continuity probes
constexpr double kContinuityC = 100.0;

struct Options {
  std::vector<std::string> suites{"admissibility", "consistency", "tv", "invariant_domains", "continuity"};
  std::size_t samples = 1000;
  std::size_t probe_pairs = 100;
  std::vector<double> radii{1e-3, 1e-4, 1e-5};
  std::uint64_t seed = 1;
};

struct Row {
  std::string suite, check;
  std::size_t index = 0;
  State u_l, u_r;
  std::string class_l, class_r;
  double a = 0.0, b = 0.0;  // check-specific measurements
  bool pass = true;
};

struct Summary {
  std::string suite, check;
  std::size_t n = 0, passed = 0;
  bool negative = false;  // the expected outcome is a failure of the property
  std::string note;
  bool ok() const { return passed == n; }
};

struct Result {
  std::vector<Row> rows;
  std::vector<Summary> summaries;
  bool all_pass() const;
  std::string csv() const;
  std::string text() const;
};

// throws UsageError for an unknown suite name
Result run(const Model& m, double F, const Options& opt);

}  // namespace phasetraffic::campaign

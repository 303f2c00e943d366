#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "codec/oracle.hpp"
#include "codec/simgen.hpp"

namespace codec::bench {

/// Empirical summary; quantiles use linear interpolation between order
/// statistics (type 7).
struct Summary {
  double q025 = 0.0;
  double median = 0.0;
  double q975 = 0.0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;
};

Summary summarize(std::vector<double> values);
double quantile(std::vector<double> values, double prob);

/// Per-replication data and estimator seed.
std::uint64_t rep_seed(std::uint64_t seed, std::size_t rep);

// Conditional and unconditional T_n per replication.
struct IntervalRun {
  std::vector<double> conditional;
  std::vector<double> unconditional;
};

/// Y = X1 + X2 mod 1: T_n(Y, X2 | X1) and T_n(Y, X2).
IntervalRun run_mod1(std::size_t reps, std::uint64_t seed, std::size_t n = 1000);
/// Y = X1^2 + X2^2, Z = arctan(X1 / X2): T_n(Y, Z | X1) and T_n(Y, Z).
IntervalRun run_polar(std::size_t reps, std::uint64_t seed, std::size_t n = 1000);

struct RecoveryRun {
  std::size_t reps = 0;
  std::size_t exact_hits = 0;
  std::vector<std::vector<std::string>> selections;
  double rate() const { return reps ? static_cast<double>(exact_hits) / static_cast<double>(reps) : 0.0; }
};

/// FOCI on a simulated model; a hit is selected == {x1, x2, x3}.
RecoveryRun run_recovery(sim::ModelKind kind, std::size_t reps, std::uint64_t seed, std::size_t n,
                         std::size_t p, std::size_t threads);

struct ScalingRow {
  std::size_t n = 0;
  std::vector<double> times_ms;
  double median_ms = 0.0;
};

/// Wall time of estimate_conditional with p = q = 1 at each size.
std::vector<ScalingRow> run_scaling(const std::vector<std::size_t>& sizes, std::size_t runs,
                                    std::uint64_t seed);

struct NamedJoint {
  std::string name;
  oracle::DiscreteJoint joint;
};

/// Three reference tables: Y independent of Z given X (T = 0), Y = X xor Z
/// (T = 1), and XOR flipped with probability 0.1 (T = 0.64).
std::vector<NamedJoint> reference_joints();

struct ConsistencyRow {
  std::size_t n = 0;
  std::vector<double> abs_errors;
  double mean_abs_error = 0.0;
  double median_abs_error = 0.0;
};

struct ConsistencyRun {
  std::string name;
  double exact_t = 0.0;
  std::vector<ConsistencyRow> rows;
};

/// |T_n - T| over seeds at each n, with T from the enumeration oracle.
/// Uses the conditional estimator when the joint has p >= 1.
ConsistencyRun run_consistency(const NamedJoint& joint, const std::vector<std::size_t>& sizes,
                               std::size_t seeds, std::uint64_t seed);

nlohmann::json to_json(const Summary& s);

}  // namespace codec::bench

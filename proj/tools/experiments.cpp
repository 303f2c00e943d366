#include "experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "codec/estimator.hpp"
#include "codec/foci.hpp"
#include "codec/random.hpp"

namespace codec::bench {

double quantile(std::vector<double> values, double prob) {
  if (values.empty()) return 0.0;
  std::ranges::sort(values);
  const double h = prob * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

Summary summarize(std::vector<double> values) {
  Summary s;
  s.count = values.size();
  if (values.empty()) return s;
  std::ranges::sort(values);
  s.q025 = quantile(values, 0.025);
  s.median = quantile(values, 0.5);
  s.q975 = quantile(values, 0.975);
  s.min = values.front();
  s.max = values.back();
  double total = 0.0;
  for (double v : values) total += v;
  s.mean = total / static_cast<double>(values.size());
  return s;
}

std::uint64_t rep_seed(std::uint64_t seed, std::size_t rep) {
  return derive_key(derive_key(0x42454e4348ULL, seed), rep);
}

namespace {

IntervalRun run_pair(sim::ModelKind kind, std::size_t reps, std::uint64_t seed, std::size_t n,
                     const char* x_name, const char* z_name) {
  IntervalRun out;
  for (std::size_t r = 0; r < reps; ++r) {
    const std::uint64_t s = rep_seed(seed, r);
    // Covariates standardized, as in the reference experiments.
    const Dataset d = standardize(sim::generate({kind, n, 2, s, {}}), true);
    const Matrix x = Matrix::from_column(d.values(x_name));
    const Matrix z = Matrix::from_column(d.values(z_name));
    out.conditional.push_back(estimate_conditional(d.y(), z, x, s).t_n);
    out.unconditional.push_back(estimate_unconditional(d.y(), z, s).t_n);
  }
  return out;
}

}  // namespace

IntervalRun run_mod1(std::size_t reps, std::uint64_t seed, std::size_t n) {
  return run_pair(sim::ModelKind::mod1_sum, reps, seed, n, "x1", "x2");
}

IntervalRun run_polar(std::size_t reps, std::uint64_t seed, std::size_t n) {
  return run_pair(sim::ModelKind::polar, reps, seed, n, "x1", "z");
}

RecoveryRun run_recovery(sim::ModelKind kind, std::size_t reps, std::uint64_t seed, std::size_t n,
                         std::size_t p, std::size_t threads) {
  RecoveryRun out;
  out.reps = reps;
  for (std::size_t r = 0; r < reps; ++r) {
    const std::uint64_t s = rep_seed(seed, r);
    const Dataset d = sim::generate({kind, n, p, s, {}});
    foci::FociConfig cfg;
    cfg.seed = s;
    cfg.threads = threads;
    const auto res = foci::select(d, cfg);
    std::vector<std::string> names;
    for (auto c : res.selected) names.push_back(d.column(c).name);
    std::vector<std::string> sorted = names;
    std::ranges::sort(sorted);
    if (sorted == std::vector<std::string>{"x1", "x2", "x3"}) ++out.exact_hits;
    out.selections.push_back(std::move(names));
  }
  return out;
}

std::vector<ScalingRow> run_scaling(const std::vector<std::size_t>& sizes, std::size_t runs,
                                    std::uint64_t seed) {
  std::vector<ScalingRow> rows;
  for (std::size_t n : sizes) {
    ScalingRow row;
    row.n = n;
    const Dataset d = sim::generate({sim::ModelKind::linear_gaussian, n, 2, rep_seed(seed, n), {1.0, {1.0, 1.0}}});
    const Matrix x = Matrix::from_column(d.values("x1"));
    const Matrix z = Matrix::from_column(d.values("x2"));
    for (std::size_t r = 0; r < runs; ++r) {
      const auto start = std::chrono::steady_clock::now();
      const auto res = estimate_conditional(d.y(), z, x, seed + r);
      const auto stop = std::chrono::steady_clock::now();
      (void)res;
      row.times_ms.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
    }
    row.median_ms = quantile(row.times_ms, 0.5);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<NamedJoint> reference_joints() {
  using oracle::Atom;
  std::vector<NamedJoint> out;

  // Y | X and Z | X drawn independently; every weight is dyadic, so the
  // products are exact.
  {
    const double px[2] = {0.5, 0.5};
    const double py[2][3] = {{0.5, 0.25, 0.25}, {0.25, 0.25, 0.5}};
    const double pz[2][2] = {{0.25, 0.75}, {0.5, 0.5}};
    std::vector<Atom> atoms;
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 3; ++y)
        for (int z = 0; z < 2; ++z)
          atoms.push_back({double(y), {double(x)}, {double(z)}, px[x] * py[x][y] * pz[x][z]});
    out.push_back({"independent", oracle::DiscreteJoint(std::move(atoms))});
  }
  {
    std::vector<Atom> atoms;
    for (int x = 0; x < 2; ++x)
      for (int z = 0; z < 2; ++z) atoms.push_back({double(x ^ z), {double(x)}, {double(z)}, 0.25});
    out.push_back({"deterministic", oracle::DiscreteJoint(std::move(atoms))});
  }
  {
    std::vector<Atom> atoms;
    for (int x = 0; x < 2; ++x)
      for (int z = 0; z < 2; ++z) {
        atoms.push_back({double(x ^ z), {double(x)}, {double(z)}, 0.25 * 0.9});
        atoms.push_back({double(1 - (x ^ z)), {double(x)}, {double(z)}, 0.25 * 0.1});
      }
    out.push_back({"noisy_xor", oracle::DiscreteJoint(std::move(atoms))});
  }
  return out;
}

ConsistencyRun run_consistency(const NamedJoint& nj, const std::vector<std::size_t>& sizes,
                               std::size_t seeds, std::uint64_t seed) {
  ConsistencyRun out;
  out.name = nj.name;
  out.exact_t = oracle::exact_t(nj.joint).t;
  const std::size_t p = nj.joint.p();
  const std::size_t q = nj.joint.q();
  for (std::size_t n : sizes) {
    ConsistencyRow row;
    row.n = n;
    for (std::size_t s = 0; s < seeds; ++s) {
      const std::uint64_t k = rep_seed(derive_key(seed, n), s);
      const Dataset d = sim::sample_joint(nj.joint, n, k);
      std::vector<std::size_t> xcols, zcols;
      for (std::size_t j = 0; j < p; ++j) xcols.push_back(1 + j);
      for (std::size_t j = 0; j < q; ++j) zcols.push_back(1 + p + j);
      const Matrix z = d.matrix(zcols);
      const double t = p > 0 ? estimate_conditional(d.y(), z, d.matrix(xcols), k).t_n
                             : estimate_unconditional(d.y(), z, k).t_n;
      row.abs_errors.push_back(std::abs(t - out.exact_t));
    }
    const Summary sm = summarize(row.abs_errors);
    row.mean_abs_error = sm.mean;
    row.median_abs_error = sm.median;
    out.rows.push_back(std::move(row));
  }
  return out;
}

nlohmann::json to_json(const Summary& s) {
  return {{"q025", s.q025}, {"median", s.median}, {"q975", s.q975}, {"mean", s.mean},
          {"min", s.min},   {"max", s.max},       {"count", s.count}};
}

}  // namespace codec::bench

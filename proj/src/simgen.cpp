#include "codec/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "codec/errors.hpp"

namespace codec::sim {

ModelKind parse_model_kind(std::string_view name) {
  if (name == "mod1" || name == "mod1_sum" || name == "mod1-sum") return ModelKind::mod1_sum;
  if (name == "polar") return ModelKind::polar;
  if (name == "interaction") return ModelKind::interaction;
  if (name == "interaction-noise" || name == "interaction_noise") return ModelKind::interaction_noise;
  if (name == "linear-gaussian" || name == "linear_gaussian") return ModelKind::linear_gaussian;
  throw Error(ErrorKind::argument, "unknown model '" + std::string(name) + "'");
}

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::mod1_sum: return "mod1_sum";
    case ModelKind::polar: return "polar";
    case ModelKind::interaction: return "interaction";
    case ModelKind::interaction_noise: return "interaction_noise";
    case ModelKind::linear_gaussian: return "linear_gaussian";
  }
  return "unknown";
}

std::size_t min_predictors(ModelKind kind) {
  switch (kind) {
    case ModelKind::mod1_sum:
    case ModelKind::polar: return 2;
    case ModelKind::interaction:
    case ModelKind::interaction_noise: return 3;
    case ModelKind::linear_gaussian: return 1;
  }
  return 1;
}

double SimRng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double SimRng::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

Dataset generate(const SimModel& m) {
  if (m.n < 2) throw Error(ErrorKind::argument, "simulation needs n >= 2");
  if (m.p < min_predictors(m.kind)) {
    throw Error(ErrorKind::argument, std::string(to_string(m.kind)) + " needs p >= " +
                                         std::to_string(min_predictors(m.kind)));
  }
  if (!(m.params.noise_sd >= 0.0) || !std::isfinite(m.params.noise_sd)) {
    throw Error(ErrorKind::argument, "noise sd must be finite and nonnegative");
  }
  if (m.kind == ModelKind::linear_gaussian && m.params.coefficients.size() > m.p) {
    throw Error(ErrorKind::argument, "more coefficients than predictors");
  }

  SimRng rng(m.seed);
  std::vector<std::vector<double>> x(m.p, std::vector<double>(m.n));
  const bool uniform_inputs = m.kind == ModelKind::mod1_sum;
  for (std::size_t j = 0; j < m.p; ++j) {
    const bool active_uniform = uniform_inputs && j < 2;
    for (auto& v : x[j]) v = active_uniform ? rng.uniform() : rng.normal();
  }
  if (m.kind == ModelKind::polar) {
    // x1 / x2 is undefined on x2 == 0; redraw those entries.
    for (auto& v : x[1]) {
      while (v == 0.0) v = rng.normal();
    }
  }

  std::vector<double> y(m.n);
  std::vector<double> z;
  for (std::size_t i = 0; i < m.n; ++i) {
    switch (m.kind) {
      case ModelKind::mod1_sum:
        y[i] = std::fmod(x[0][i] + x[1][i], 1.0);
        break;
      case ModelKind::polar:
        y[i] = x[0][i] * x[0][i] + x[1][i] * x[1][i];
        break;
      case ModelKind::interaction:
        y[i] = x[0][i] * x[1][i] + std::sin(x[0][i] * x[2][i]);
        break;
      case ModelKind::interaction_noise:
      case ModelKind::linear_gaussian:
        break;
    }
  }
  if (m.kind == ModelKind::polar) {
    z.resize(m.n);
    for (std::size_t i = 0; i < m.n; ++i) z[i] = std::atan(x[0][i] / x[1][i]);
  }
  if (m.kind == ModelKind::interaction_noise) {
    for (std::size_t i = 0; i < m.n; ++i) {
      y[i] = x[0][i] * x[1][i] + x[0][i] - x[2][i] + m.params.noise_sd * rng.normal();
    }
  }
  if (m.kind == ModelKind::linear_gaussian) {
    for (std::size_t i = 0; i < m.n; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < m.params.coefficients.size(); ++k) s += m.params.coefficients[k] * x[k][i];
      y[i] = s + m.params.noise_sd * rng.normal();
    }
  }

  std::vector<Column> cols;
  cols.reserve(m.p + 2);
  cols.push_back(Column{"y", std::move(y), false});
  for (std::size_t j = 0; j < m.p; ++j) cols.push_back(Column{"x" + std::to_string(j + 1), std::move(x[j]), false});
  if (!z.empty()) cols.push_back(Column{"z", std::move(z), false});
  return Dataset(std::move(cols), "y");
}

Dataset sample_joint(const oracle::DiscreteJoint& joint, std::size_t n, std::uint64_t seed) {
  if (n < 2) throw Error(ErrorKind::argument, "sample size must be >= 2");
  const auto& atoms = joint.atoms();
  std::vector<double> cumulative;
  double acc = 0.0;
  for (const auto& a : atoms) cumulative.push_back(acc += a.p);

  SimRng rng(seed);
  std::vector<Column> cols;
  cols.push_back(Column{"y", std::vector<double>(n), false});
  for (std::size_t j = 0; j < joint.p(); ++j) cols.push_back(Column{"x" + std::to_string(j + 1), std::vector<double>(n), false});
  for (std::size_t j = 0; j < joint.q(); ++j) cols.push_back(Column{"z" + std::to_string(j + 1), std::vector<double>(n), false});
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform() * acc;
    auto it = std::ranges::upper_bound(cumulative, u);
    if (it == cumulative.end()) --it;
    const auto& a = atoms[static_cast<std::size_t>(it - cumulative.begin())];
    cols[0].values[i] = a.y;
    for (std::size_t j = 0; j < joint.p(); ++j) cols[1 + j].values[i] = a.x[j];
    for (std::size_t j = 0; j < joint.q(); ++j) cols[1 + joint.p() + j].values[i] = a.z[j];
  }
  return Dataset(std::move(cols), "y");
}

}  // namespace codec::sim

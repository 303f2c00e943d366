#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "codec/data.hpp"
#include "codec/oracle.hpp"

namespace codec::sim {

enum class ModelKind { mod1_sum, polar, interaction, interaction_noise, linear_gaussian };

struct SimParams {
  double noise_sd = 1.0;
  /// linear_gaussian only: y = sum_k coefficients[k] * x_{k+1} + noise.
  std::vector<double> coefficients{1.0};
};

struct SimModel {
  ModelKind kind = ModelKind::mod1_sum;
  std::size_t n = 0;
  std::size_t p = 0;
  std::uint64_t seed = 0;
  SimParams params{};
};

/// Accepts "mod1", "polar", "interaction", "interaction-noise",
/// "linear-gaussian" and the underscore spellings of the enum names.
ModelKind parse_model_kind(std::string_view name);
std::string_view to_string(ModelKind kind);
std::size_t min_predictors(ModelKind kind);

/// Generator stream, fixed as version 1: std::mt19937_64 seeded with the model
/// seed; uniforms take the top 53 bits; normals come from Box-Muller with the
/// cosine branch first and the sine branch cached for the next call.
class SimRng {
 public:
  explicit SimRng(std::uint64_t seed) : engine_(seed) {}

  double uniform();  // [0, 1)
  double normal();   // N(0, 1)

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

/// Columns "y", "x1".."xp" (and "z" for polar). Uniform[0,1] inputs for
/// mod1_sum, standard normal otherwise; predictors beyond the active set are
/// independent N(0,1) noise. Predictors are drawn column by column.
Dataset generate(const SimModel& model);

/// n draws from a discrete joint; columns "y", "x1".."xp", "z1".."zq".
Dataset sample_joint(const oracle::DiscreteJoint& joint, std::size_t n, std::uint64_t seed);

}  // namespace codec::sim

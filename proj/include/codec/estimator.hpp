#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "codec/data.hpp"
#include "codec/matrix.hpp"

namespace codec {

/// Largest n for which every rank sum below fits in int64 (n^3 < 2^63).
inline constexpr std::size_t kMaxObservations = 2'000'000;

/// T_n together with its integer decomposition.
///
/// Conditional (p >= 1):
///   numerator_sum   = sum_i min(R_i, R_M(i)) - min(R_i, R_N(i))
///   denominator_sum = sum_i R_i - min(R_i, R_N(i))
///   numerator = Q_n(Y,Z|X) = numerator_sum / n^2, denominator = S_n(Y,X).
/// Unconditional (p = 0):
///   numerator_sum   = sum_i n min(R_i, R_M(i)) - L_i^2
///   denominator_sum = sum_i L_i (n - L_i)
///   numerator = Q_n(Y,Z) = numerator_sum / n^3, denominator = S_n(Y).
struct CodecResult {
  double t_n = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;
  std::size_t n = 0;
  std::size_t p = 0;
  std::size_t q = 0;
  std::uint64_t seed = 0;
  std::int64_t numerator_sum = 0;
  std::int64_t denominator_sum = 0;
};

/// Keys for the tie-break streams of N(i) (X space) and M(i) ((X,Z) space).
/// Observation i draws from CounterStream(derive_key(key, i)).
struct TieBreakKeys {
  std::uint64_t seed = 0;
  std::uint64_t x = 0;
  std::uint64_t xz = 0;

  static TieBreakKeys from_seed(std::uint64_t seed);
};

/// T_n(Y, Z | X). Throws a degenerate error when the denominator is zero,
/// i.e. when Y behaves as a function of X in the sample.
CodecResult estimate_conditional(std::span<const double> y, const Matrix& z, const Matrix& x,
                                 std::uint64_t seed);
CodecResult estimate_conditional(std::span<const double> y, const Matrix& z, const Matrix& x,
                                 const TieBreakKeys& keys);

/// T_n(Y, Z). Throws constant_response when Y is constant.
CodecResult estimate_unconditional(std::span<const double> y, const Matrix& z, std::uint64_t seed);
CodecResult estimate_unconditional(std::span<const double> y, const Matrix& z,
                                   const TieBreakKeys& keys);

/// The two unconditional statistics whose difference is the conditional
/// numerator: Q_n(Y, (X,Z)) over M and Q_n(Y, X) over N, using the same
/// neighbor draws as estimate_conditional. Integer forms are scaled by n^3,
/// so joint_sum - base_sum == n * numerator_sum exactly.
struct QnParts {
  double q_joint = 0.0;
  double q_base = 0.0;
  std::int64_t joint_sum = 0;
  std::int64_t base_sum = 0;
};

QnParts q_n_parts(std::span<const double> y, const Matrix& z, const Matrix& x, std::uint64_t seed);
QnParts q_n_parts(std::span<const double> y, const Matrix& z, const Matrix& x,
                  const TieBreakKeys& keys);

// Building blocks, shared with the FOCI scan.

/// sum_i min(R_i, R_nb(i)).
std::int64_t sum_min_ranks(const RankVector& rk, std::span<const std::size_t> neighbors);
/// sum_i R_i.
std::int64_t sum_ranks(const RankVector& rk);
/// sum_i L_i^2.
std::int64_t sum_sq_coranks(const RankVector& rk);
/// sum_i L_i (n - L_i), the unconditional denominator; for distinct values it
/// equals n (n^2 - 1) / 6.
std::int64_t unconditional_denominator_sum(const RankVector& rk);

/// Neighbor draws over the rows of `points`, one per observation.
std::vector<std::size_t> draw_neighbors(const Matrix& points, std::uint64_t key);

}  // namespace codec

#include "codec/estimator.hpp"

#include <cmath>
#include <string>

#include "codec/errors.hpp"
#include "codec/nn_index.hpp"
#include "codec/random.hpp"

namespace codec {

namespace {

void check_response(std::span<const double> y) {
  if (y.size() < 2) throw Error(ErrorKind::size, "need at least 2 observations, got " + std::to_string(y.size()));
  if (y.size() > kMaxObservations) {
    throw Error(ErrorKind::size, "at most " + std::to_string(kMaxObservations) + " observations supported");
  }
  for (double v : y) {
    if (!std::isfinite(v)) throw Error(ErrorKind::argument, "response values must be finite");
  }
}

void check_block(const Matrix& m, std::size_t n, const char* name) {
  if (m.cols() == 0) throw Error(ErrorKind::dimension, std::string(name) + " has no columns");
  if (m.rows() != n) {
    throw Error(ErrorKind::dimension, std::string(name) + " has " + std::to_string(m.rows()) +
                                          " rows, response has " + std::to_string(n));
  }
}

struct ConditionalSums {
  std::int64_t min_m = 0;  // sum min(R_i, R_M(i))
  std::int64_t min_n = 0;  // sum min(R_i, R_N(i))
  RankVector rk;
};

ConditionalSums conditional_sums(std::span<const double> y, const Matrix& z, const Matrix& x,
                                 const TieBreakKeys& keys) {
  check_response(y);
  check_block(x, y.size(), "X");
  check_block(z, y.size(), "Z");
  ConditionalSums s;
  s.rk = ranks(y);
  s.min_n = sum_min_ranks(s.rk, draw_neighbors(x, keys.x));
  s.min_m = sum_min_ranks(s.rk, draw_neighbors(hconcat(x, z), keys.xz));
  return s;
}

}  // namespace

TieBreakKeys TieBreakKeys::from_seed(std::uint64_t seed) {
  const std::uint64_t root = derive_key(0x434f444543ULL, seed);
  return {seed, derive_key(root, static_cast<std::uint64_t>(SpaceTag::x)),
          derive_key(root, static_cast<std::uint64_t>(SpaceTag::xz))};
}

std::int64_t sum_min_ranks(const RankVector& rk, std::span<const std::size_t> neighbors) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < neighbors.size(); ++i) s += std::min(rk.r[i], rk.r[neighbors[i]]);
  return s;
}

std::int64_t sum_ranks(const RankVector& rk) {
  std::int64_t s = 0;
  for (auto r : rk.r) s += r;
  return s;
}

std::int64_t sum_sq_coranks(const RankVector& rk) {
  std::int64_t s = 0;
  for (auto l : rk.l) s += l * l;
  return s;
}

std::int64_t unconditional_denominator_sum(const RankVector& rk) {
  const auto n = static_cast<std::int64_t>(rk.size());
  std::int64_t s = 0;
  for (auto l : rk.l) s += l * (n - l);
  return s;
}

std::vector<std::size_t> draw_neighbors(const Matrix& points, std::uint64_t key) {
  return NeighborIndex(points).pick_all(key);
}

CodecResult estimate_conditional(std::span<const double> y, const Matrix& z, const Matrix& x,
                                 std::uint64_t seed) {
  return estimate_conditional(y, z, x, TieBreakKeys::from_seed(seed));
}

CodecResult estimate_conditional(std::span<const double> y, const Matrix& z, const Matrix& x,
                                 const TieBreakKeys& keys) {
  const ConditionalSums s = conditional_sums(y, z, x, keys);
  CodecResult out;
  out.n = y.size();
  out.p = x.cols();
  out.q = z.cols();
  out.seed = keys.seed;
  out.numerator_sum = s.min_m - s.min_n;
  out.denominator_sum = sum_ranks(s.rk) - s.min_n;
  if (out.denominator_sum == 0) {
    throw Error(ErrorKind::degenerate,
                "conditional denominator is zero: the response is a function of X in this sample");
  }
  const double n2 = static_cast<double>(out.n) * static_cast<double>(out.n);
  out.numerator = static_cast<double>(out.numerator_sum) / n2;
  out.denominator = static_cast<double>(out.denominator_sum) / n2;
  out.t_n = static_cast<double>(out.numerator_sum) / static_cast<double>(out.denominator_sum);
  return out;
}

CodecResult estimate_unconditional(std::span<const double> y, const Matrix& z, std::uint64_t seed) {
  return estimate_unconditional(y, z, TieBreakKeys::from_seed(seed));
}

CodecResult estimate_unconditional(std::span<const double> y, const Matrix& z,
                                   const TieBreakKeys& keys) {
  check_response(y);
  check_block(z, y.size(), "Z");
  const RankVector rk = ranks(y);
  const auto n = static_cast<std::int64_t>(y.size());
  CodecResult out;
  out.n = y.size();
  out.p = 0;
  out.q = z.cols();
  out.seed = keys.seed;
  out.denominator_sum = unconditional_denominator_sum(rk);
  if (out.denominator_sum == 0) throw Error(ErrorKind::constant_response, "response is constant");
  out.numerator_sum = n * sum_min_ranks(rk, draw_neighbors(z, keys.xz)) - sum_sq_coranks(rk);
  const double n3 = static_cast<double>(n) * static_cast<double>(n) * static_cast<double>(n);
  out.numerator = static_cast<double>(out.numerator_sum) / n3;
  out.denominator = static_cast<double>(out.denominator_sum) / n3;
  out.t_n = static_cast<double>(out.numerator_sum) / static_cast<double>(out.denominator_sum);
  return out;
}

QnParts q_n_parts(std::span<const double> y, const Matrix& z, const Matrix& x, std::uint64_t seed) {
  return q_n_parts(y, z, x, TieBreakKeys::from_seed(seed));
}

QnParts q_n_parts(std::span<const double> y, const Matrix& z, const Matrix& x,
                  const TieBreakKeys& keys) {
  const ConditionalSums s = conditional_sums(y, z, x, keys);
  const auto n = static_cast<std::int64_t>(y.size());
  const std::int64_t l2 = sum_sq_coranks(s.rk);
  QnParts out;
  out.joint_sum = n * s.min_m - l2;
  out.base_sum = n * s.min_n - l2;
  const double n3 = static_cast<double>(n) * static_cast<double>(n) * static_cast<double>(n);
  out.q_joint = static_cast<double>(out.joint_sum) / n3;
  out.q_base = static_cast<double>(out.base_sum) / n3;
  return out;
}

}  // namespace codec

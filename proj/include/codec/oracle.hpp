#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace codec::oracle {

using Rational = boost::multiprecision::cpp_rational;

struct Atom {
  double y = 0.0;
  std::vector<double> x;
  std::vector<double> z;
  double p = 0.0;
};

/// Finite-support joint law of (Y, X, Z). Validated on construction: at least
/// one atom, consistent x and z widths, nonnegative finite weights summing to 1
/// within 1e-12, and no repeated (y, x, z) tuple.
class DiscreteJoint {
 public:
  explicit DiscreteJoint(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  std::size_t p() const noexcept { return p_; }
  std::size_t q() const noexcept { return q_; }

 private:
  std::vector<Atom> atoms_;
  std::size_t p_ = 0;
  std::size_t q_ = 0;
};

/// a and b are the integrated conditional variances in the numerator and
/// denominator of T (c and d when p = 0); t = a / b.
template <class Scalar>
struct BasicPopulationResult {
  Scalar t{};
  Scalar a{};
  Scalar b{};
  bool unconditional = false;
};

using PopulationResult = BasicPopulationResult<double>;
using RationalPopulationResult = BasicPopulationResult<Rational>;

/// T(Y, Z | X) by summation over the support; with p = 0, T(Y, Z).
/// Throws a degenerate error when b = 0 (Y a function of X on the support).
/// Requires q >= 1.
PopulationResult exact_t(const DiscreteJoint& joint);

/// Same computation in exact rational arithmetic. Atom weights are read as
/// the exact binary values of their doubles and renormalized exactly.
RationalPopulationResult exact_t_rational(const DiscreteJoint& joint);

/// Q(S) = integral of Var(P(Y >= t | X_S)) dmu(t) over the x coordinates,
/// with 0-based indices into x. Q of the empty set is 0.
double exact_q(const DiscreteJoint& joint, const std::vector<std::size_t>& subset);
Rational exact_q_rational(const DiscreteJoint& joint, const std::vector<std::size_t>& subset);

/// Q(S) == Q(all predictors) within 1e-12.
bool is_sufficient(const DiscreteJoint& joint, const std::vector<std::size_t>& subset);

inline constexpr std::size_t kMaxDeltaPredictors = 15;

/// min over insufficient S of max over j not in S of Q(S + j) - Q(S).
/// std::nullopt stands for "unconstrained": every subset is sufficient.
std::optional<double> exact_delta(const DiscreteJoint& joint);

}  // namespace codec::oracle

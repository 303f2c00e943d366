#include "codec/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>

#include "codec/errors.hpp"

namespace codec::oracle {

namespace {

// Exact binary value of a finite double.
Rational exact_rational(double v) {
  if (v == 0.0) return Rational(0);
  int exp = 0;
  const double frac = std::frexp(v, &exp);  // v = frac * 2^exp, 0.5 <= |frac| < 1
  const auto mantissa = static_cast<std::int64_t>(std::ldexp(frac, 53));
  exp -= 53;
  boost::multiprecision::cpp_int num = mantissa;
  boost::multiprecision::cpp_int den = 1;
  if (exp > 0) num <<= exp;
  else den <<= -exp;
  return Rational(num, den);
}

template <class S>
S from_double(double v) {
  if constexpr (std::is_same_v<S, double>) return v;
  else return exact_rational(v);
}

// Weights normalized to sum to one, plus the distinct y levels and their mass.
template <class S>
struct Law {
  std::vector<S> prob;           // per atom
  std::vector<double> levels;    // distinct y values, ascending
  std::vector<S> level_mass;     // mu({t})
  std::vector<std::size_t> level_of;  // atom -> level index
};

template <class S>
Law<S> make_law(const DiscreteJoint& joint) {
  const auto& atoms = joint.atoms();
  Law<S> law;
  S total = 0;
  for (const auto& a : atoms) {
    law.prob.push_back(from_double<S>(a.p));
    total += law.prob.back();
  }
  for (auto& pr : law.prob) pr /= total;
  for (const auto& a : atoms) law.levels.push_back(a.y);
  std::ranges::sort(law.levels);
  law.levels.erase(std::unique(law.levels.begin(), law.levels.end()), law.levels.end());
  law.level_mass.assign(law.levels.size(), S(0));
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    const auto it = std::ranges::lower_bound(law.levels, atoms[k].y);
    law.level_of.push_back(static_cast<std::size_t>(it - law.levels.begin()));
    law.level_mass[law.level_of.back()] += law.prob[k];
  }
  return law;
}

// Partition of the atoms by a key vector (exact equality of doubles).
struct Cells {
  std::vector<std::size_t> cell_of;  // atom -> cell
  std::size_t count = 0;
};

template <class KeyFn>
Cells make_cells(const DiscreteJoint& joint, KeyFn key) {
  std::map<std::vector<double>, std::size_t> ids;
  Cells cells;
  for (const auto& a : joint.atoms()) {
    auto [it, inserted] = ids.try_emplace(key(a), ids.size());
    cells.cell_of.push_back(it->second);
  }
  cells.count = ids.size();
  return cells;
}

// Per-level conditional tail probabilities G_c(t) = P(Y >= t | cell c) and
// the cell masses.
template <class S>
struct Tails {
  std::vector<S> mass;
  std::vector<std::vector<S>> tail;  // [level][cell]
};

template <class S>
Tails<S> make_tails(const Law<S>& law, const Cells& cells) {
  Tails<S> out;
  out.mass.assign(cells.count, S(0));
  for (std::size_t k = 0; k < law.prob.size(); ++k) out.mass[cells.cell_of[k]] += law.prob[k];
  out.tail.assign(law.levels.size(), std::vector<S>(cells.count, S(0)));
  for (std::size_t t = 0; t < law.levels.size(); ++t) {
    for (std::size_t k = 0; k < law.prob.size(); ++k) {
      if (law.level_of[k] >= t) out.tail[t][cells.cell_of[k]] += law.prob[k];
    }
    for (std::size_t c = 0; c < cells.count; ++c) out.tail[t][c] /= out.mass[c];
  }
  return out;
}

// sum_t mu(t) sum_f P(f) (G_f(t) - G_parent(f)(t))^2 for a fine partition
// refining a coarse one: the integrated E Var(G_fine | coarse).
template <class S>
S integrated_variance(const Law<S>& law, const Cells& fine, const Cells& coarse) {
  std::vector<std::size_t> parent(fine.count);
  for (std::size_t k = 0; k < fine.cell_of.size(); ++k) parent[fine.cell_of[k]] = coarse.cell_of[k];
  const Tails<S> tf = make_tails(law, fine);
  const Tails<S> tc = make_tails(law, coarse);
  S total = 0;
  for (std::size_t t = 0; t < law.levels.size(); ++t) {
    S inner = 0;
    for (std::size_t f = 0; f < fine.count; ++f) {
      const S dev = tf.tail[t][f] - tc.tail[t][parent[f]];
      inner += tf.mass[f] * dev * dev;
    }
    total += law.level_mass[t] * inner;
  }
  return total;
}

// sum_t mu(t) sum_c P(c) G_c(t) (1 - G_c(t)): integrated E Var(1{Y >= t} | cell).
template <class S>
S integrated_indicator_variance(const Law<S>& law, const Cells& cells) {
  const Tails<S> tc = make_tails(law, cells);
  S total = 0;
  for (std::size_t t = 0; t < law.levels.size(); ++t) {
    S inner = 0;
    for (std::size_t c = 0; c < cells.count; ++c) {
      inner += tc.mass[c] * tc.tail[t][c] * (S(1) - tc.tail[t][c]);
    }
    total += law.level_mass[t] * inner;
  }
  return total;
}

template <class S>
BasicPopulationResult<S> exact_t_impl(const DiscreteJoint& joint) {
  if (joint.q() == 0) throw Error(ErrorKind::dimension, "exact_t needs at least one z coordinate");
  const Law<S> law = make_law<S>(joint);
  const Cells by_x = make_cells(joint, [](const Atom& a) { return a.x; });
  const Cells by_xz = make_cells(joint, [](const Atom& a) {
    std::vector<double> k = a.x;
    k.insert(k.end(), a.z.begin(), a.z.end());
    return k;
  });
  BasicPopulationResult<S> out;
  out.unconditional = joint.p() == 0;
  out.a = integrated_variance(law, by_xz, by_x);
  out.b = integrated_indicator_variance(law, by_x);
  if (out.b == S(0)) {
    throw Error(ErrorKind::degenerate, "population denominator is zero: Y is a function of X");
  }
  out.t = out.a / out.b;
  return out;
}

template <class S>
S exact_q_impl(const DiscreteJoint& joint, const std::vector<std::size_t>& subset) {
  for (auto j : subset) {
    if (j >= joint.p()) {
      throw Error(ErrorKind::argument, "predictor index " + std::to_string(j) + " out of range [0, " +
                                           std::to_string(joint.p()) + ")");
    }
  }
  if (subset.empty()) return S(0);
  const Law<S> law = make_law<S>(joint);
  const Cells fine = make_cells(joint, [&](const Atom& a) {
    std::vector<double> k;
    for (auto j : subset) k.push_back(a.x[j]);
    return k;
  });
  const Cells whole = make_cells(joint, [](const Atom&) { return std::vector<double>{}; });
  return integrated_variance(law, fine, whole);
}

std::vector<std::size_t> members(std::uint32_t mask) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < 32; ++j) {
    if (mask & (1u << j)) out.push_back(j);
  }
  return out;
}

constexpr double kSufficiencySlack = 1e-12;

}  // namespace

DiscreteJoint::DiscreteJoint(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw Error(ErrorKind::argument, "joint distribution has no atoms");
  p_ = atoms_.front().x.size();
  q_ = atoms_.front().z.size();
  double total = 0.0;
  std::map<std::vector<double>, std::size_t> seen;
  for (std::size_t k = 0; k < atoms_.size(); ++k) {
    const auto& a = atoms_[k];
    if (a.x.size() != p_ || a.z.size() != q_) {
      throw Error(ErrorKind::dimension, "atom " + std::to_string(k) + " has inconsistent x/z width");
    }
    if (!std::isfinite(a.p) || a.p < 0.0) {
      throw Error(ErrorKind::argument, "atom " + std::to_string(k) + " has invalid probability");
    }
    std::vector<double> key{a.y};
    key.insert(key.end(), a.x.begin(), a.x.end());
    key.insert(key.end(), a.z.begin(), a.z.end());
    for (double v : key) {
      if (!std::isfinite(v)) throw Error(ErrorKind::argument, "atom " + std::to_string(k) + " has a non-finite value");
    }
    if (!seen.emplace(std::move(key), k).second) {
      throw Error(ErrorKind::argument, "atom " + std::to_string(k) + " repeats an earlier (y, x, z) tuple");
    }
    total += a.p;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw Error(ErrorKind::argument, "atom probabilities sum to " + std::to_string(total) + ", not 1");
  }
}

PopulationResult exact_t(const DiscreteJoint& joint) { return exact_t_impl<double>(joint); }

RationalPopulationResult exact_t_rational(const DiscreteJoint& joint) {
  return exact_t_impl<Rational>(joint);
}

double exact_q(const DiscreteJoint& joint, const std::vector<std::size_t>& subset) {
  return exact_q_impl<double>(joint, subset);
}

Rational exact_q_rational(const DiscreteJoint& joint, const std::vector<std::size_t>& subset) {
  return exact_q_impl<Rational>(joint, subset);
}

bool is_sufficient(const DiscreteJoint& joint, const std::vector<std::size_t>& subset) {
  std::vector<std::size_t> all(joint.p());
  for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
  return std::abs(exact_q(joint, subset) - exact_q(joint, all)) <= kSufficiencySlack;
}

std::optional<double> exact_delta(const DiscreteJoint& joint) {
  const std::size_t p = joint.p();
  if (p > kMaxDeltaPredictors) {
    throw Error(ErrorKind::enumeration_guard, "delta enumeration limited to " +
                                                  std::to_string(kMaxDeltaPredictors) +
                                                  " predictors, got " + std::to_string(p));
  }
  const std::uint32_t full = (1u << p) - 1;
  std::vector<double> q(std::size_t{full} + 1);
  for (std::uint32_t mask = 0; mask <= full; ++mask) q[mask] = exact_q(joint, members(mask));

  std::optional<double> delta;
  for (std::uint32_t mask = 0; mask <= full; ++mask) {
    if (std::abs(q[mask] - q[full]) <= kSufficiencySlack) continue;  // sufficient
    double best_gain = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < p; ++j) {
      if (mask & (1u << j)) continue;
      best_gain = std::max(best_gain, q[mask | (1u << j)] - q[mask]);
    }
    delta = delta ? std::min(*delta, best_gain) : best_gain;
  }
  return delta;
}

}  // namespace codec::oracle

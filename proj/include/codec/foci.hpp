#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "codec/data.hpp"
#include "codec/estimator.hpp"

namespace codec::foci {

struct FociConfig {
  bool standardize = true;
  std::optional<std::size_t> max_steps;  // cap on the selected set size
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

enum class StopCause { nonpositive_gain, exhausted_all, max_steps };

std::string_view to_string(StopCause cause);

/// Column indices refer to the Dataset's columns. `ordering` ends with the
/// first candidate whose gain was <= 0, if any; `selected` never includes it.
struct FociResult {
  std::vector<std::size_t> ordering;
  std::vector<double> gains;
  std::vector<std::size_t> selected;
  StopCause stop_cause = StopCause::exhausted_all;
};

/// Forward stepwise selection. Step one maximizes T_n(Y, X_j); step k + 1
/// maximizes T_n(Y, X_j | X_{j_1..j_k}). Every candidate at a step shares the
/// denominator, so candidates are compared on exact integer numerators and
/// equal numerators resolve to the lowest column index.
///
/// Predictors are standardized once up front when cfg.standardize is set. If
/// the conditional denominator vanishes (Y is an in-sample function of the
/// selected columns) the scan stops with nonpositive_gain.
FociResult select(const Dataset& d, const FociConfig& cfg);

/// T_n of every column not yet chosen, computed exactly as select() would at
/// step chosen.size().
std::map<std::size_t, double> step_scores(const Dataset& d, const std::vector<std::size_t>& chosen,
                                          const FociConfig& cfg);

/// Tie-break keys of candidate `candidate` (a column index) at `step`. The X
/// key depends only on (seed, step), so N(i) is shared across candidates.
TieBreakKeys step_keys(std::uint64_t seed, std::size_t step, std::size_t candidate);

}  // namespace codec::foci

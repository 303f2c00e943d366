#include "codec/foci.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <set>
#include <string>
#include <thread>

#include "codec/errors.hpp"
#include "codec/random.hpp"

namespace codec::foci {

std::string_view to_string(StopCause cause) {
  switch (cause) {
    case StopCause::nonpositive_gain: return "nonpositive_gain";
    case StopCause::exhausted_all: return "exhausted_all";
    case StopCause::max_steps: return "max_steps";
  }
  return "unknown";
}

TieBreakKeys step_keys(std::uint64_t seed, std::size_t step, std::size_t candidate) {
  const std::uint64_t step_root = derive_key(derive_key(0x464f4349ULL, seed), step);
  return {seed, derive_key(step_root, static_cast<std::uint64_t>(SpaceTag::x)),
          derive_key(derive_key(step_root, static_cast<std::uint64_t>(SpaceTag::xz)), candidate)};
}

namespace {

struct Prepared {
  Dataset data;
  RankVector rk;
  std::vector<std::size_t> predictors;
};

Prepared prepare(const Dataset& d, const FociConfig& cfg) {
  if (cfg.threads < 1) throw Error(ErrorKind::argument, "threads must be >= 1");
  if (cfg.max_steps && *cfg.max_steps < 1) throw Error(ErrorKind::argument, "max_steps must be >= 1");
  if (d.n() > kMaxObservations) throw Error(ErrorKind::size, "too many observations");
  Prepared p{cfg.standardize ? standardize(d, true) : d, {}, d.predictor_indices()};
  if (p.predictors.empty()) throw Error(ErrorKind::argument, "dataset has no predictor columns");
  p.rk = ranks(p.data.y());
  return p;
}

// Integer numerators for every open candidate at one step, over a shared
// denominator. `degenerate` means the conditional denominator is zero.
struct StepEval {
  std::vector<std::size_t> candidates;
  std::vector<std::int64_t> numerators;
  std::int64_t denominator = 0;
  bool degenerate = false;
};

template <class Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn fn) {
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t k = 0; k < count; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < count; k = next++) {
        try {
          fn(k);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

StepEval evaluate_step(const Prepared& prep, const std::vector<std::size_t>& chosen, const FociConfig& cfg) {
  StepEval ev;
  const std::set<std::size_t> taken(chosen.begin(), chosen.end());
  for (auto j : prep.predictors) {
    if (!taken.contains(j)) ev.candidates.push_back(j);
  }
  ev.numerators.resize(ev.candidates.size());
  if (ev.candidates.empty()) return ev;

  const auto n = static_cast<std::int64_t>(prep.data.n());
  const std::size_t step = chosen.size();
  if (step == 0) {
    ev.denominator = unconditional_denominator_sum(prep.rk);
    if (ev.denominator == 0) throw Error(ErrorKind::constant_response, "response is constant");
    const std::int64_t l2 = sum_sq_coranks(prep.rk);
    parallel_for(ev.candidates.size(), cfg.threads, [&](std::size_t k) {
      const std::size_t j = ev.candidates[k];
      const Matrix xj = Matrix::from_column(prep.data.column(j).values);
      const auto m = draw_neighbors(xj, step_keys(cfg.seed, step, j).xz);
      ev.numerators[k] = n * sum_min_ranks(prep.rk, m) - l2;
    });
    return ev;
  }

  const Matrix base = prep.data.matrix(chosen);
  const auto nb = draw_neighbors(base, step_keys(cfg.seed, step, 0).x);
  const std::int64_t min_n = sum_min_ranks(prep.rk, nb);
  ev.denominator = sum_ranks(prep.rk) - min_n;
  if (ev.denominator == 0) {
    ev.degenerate = true;
    return ev;
  }
  parallel_for(ev.candidates.size(), cfg.threads, [&](std::size_t k) {
    const std::size_t j = ev.candidates[k];
    const Matrix w = hconcat(base, Matrix::from_column(prep.data.column(j).values));
    const auto m = draw_neighbors(w, step_keys(cfg.seed, step, j).xz);
    ev.numerators[k] = sum_min_ranks(prep.rk, m) - min_n;
  });
  return ev;
}

void check_chosen(const Prepared& prep, const std::vector<std::size_t>& chosen) {
  std::set<std::size_t> seen;
  const std::set<std::size_t> valid(prep.predictors.begin(), prep.predictors.end());
  for (auto j : chosen) {
    if (!valid.contains(j)) throw Error(ErrorKind::argument, "column " + std::to_string(j) + " is not a predictor");
    if (!seen.insert(j).second) throw Error(ErrorKind::argument, "column " + std::to_string(j) + " chosen twice");
  }
}

}  // namespace

std::map<std::size_t, double> step_scores(const Dataset& d, const std::vector<std::size_t>& chosen,
                                          const FociConfig& cfg) {
  const Prepared prep = prepare(d, cfg);
  check_chosen(prep, chosen);
  std::map<std::size_t, double> out;
  if (chosen.size() == prep.predictors.size()) return out;
  const StepEval ev = evaluate_step(prep, chosen, cfg);
  if (ev.degenerate) {
    throw Error(ErrorKind::degenerate, "conditional denominator is zero for the chosen columns");
  }
  for (std::size_t k = 0; k < ev.candidates.size(); ++k) {
    out[ev.candidates[k]] = static_cast<double>(ev.numerators[k]) / static_cast<double>(ev.denominator);
  }
  return out;
}

FociResult select(const Dataset& d, const FociConfig& cfg) {
  const Prepared prep = prepare(d, cfg);
  FociResult res;
  std::vector<std::size_t> chosen;
  while (true) {
    if (chosen.size() == prep.predictors.size()) {
      res.stop_cause = StopCause::exhausted_all;
      break;
    }
    if (cfg.max_steps && chosen.size() >= *cfg.max_steps) {
      res.stop_cause = StopCause::max_steps;
      break;
    }
    const StepEval ev = evaluate_step(prep, chosen, cfg);
    if (ev.degenerate) {
      res.stop_cause = StopCause::nonpositive_gain;
      break;
    }
    // Candidates are in ascending column order, so the first maximum is the
    // lowest index.
    std::size_t best = 0;
    for (std::size_t k = 1; k < ev.candidates.size(); ++k) {
      if (ev.numerators[k] > ev.numerators[best]) best = k;
    }
    res.ordering.push_back(ev.candidates[best]);
    res.gains.push_back(static_cast<double>(ev.numerators[best]) / static_cast<double>(ev.denominator));
    if (ev.numerators[best] <= 0) {
      res.stop_cause = StopCause::nonpositive_gain;
      break;
    }
    chosen.push_back(ev.candidates[best]);
  }
  res.selected = chosen;
  return res;
}

}  // namespace codec::foci

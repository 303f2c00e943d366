#include "report.hpp"

#include <algorithm>

namespace codec::cli {

nlohmann::json to_json(const CodecResult& r) {
  return {{"t_n", r.t_n},
          {"numerator", r.numerator},
          {"denominator", r.denominator},
          {"numerator_sum", r.numerator_sum},
          {"denominator_sum", r.denominator_sum},
          {"n", r.n},
          {"p", r.p},
          {"q", r.q},
          {"seed", r.seed}};
}

nlohmann::json to_json(const foci::FociResult& r, const Dataset& d) {
  const auto predictors = d.predictor_indices();
  auto position = [&](std::size_t col) {
    return static_cast<std::size_t>(std::ranges::find(predictors, col) - predictors.begin()) + 1;
  };
  auto names = [&](const std::vector<std::size_t>& cols) {
    nlohmann::json out = nlohmann::json::array();
    for (auto c : cols) out.push_back(d.column(c).name);
    return out;
  };
  auto positions = [&](const std::vector<std::size_t>& cols) {
    nlohmann::json out = nlohmann::json::array();
    for (auto c : cols) out.push_back(position(c));
    return out;
  };
  return {{"ordering", names(r.ordering)},
          {"ordering_index", positions(r.ordering)},
          {"gains", r.gains},
          {"selected", names(r.selected)},
          {"selected_index", positions(r.selected)},
          {"stop_cause", foci::to_string(r.stop_cause)}};
}

}  // namespace codec::cli

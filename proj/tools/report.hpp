#pragma once

#include <json.hpp>

#include "codec/data.hpp"
#include "codec/estimator.hpp"
#include "codec/foci.hpp"

namespace codec::cli {

nlohmann::json to_json(const CodecResult& r);

/// Column indices are rendered as names plus 1-based positions among the
/// predictor columns (x1 -> 1 for simulated data).
nlohmann::json to_json(const foci::FociResult& r, const Dataset& d);

}  // namespace codec::cli

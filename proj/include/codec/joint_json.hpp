#pragma once

#include <filesystem>

#include <json.hpp>

#include "codec/oracle.hpp"

namespace codec::oracle {

/// {"atoms":[{"y":..,"x":[..],"z":[..],"p":..}, ...]}
nlohmann::json to_json(const DiscreteJoint& joint);
DiscreteJoint joint_from_json(const nlohmann::json& doc);
DiscreteJoint load_joint(const std::filesystem::path& path);

}  // namespace codec::oracle

#include "codec/joint_json.hpp"

#include <fstream>

#include "codec/errors.hpp"

namespace codec::oracle {

nlohmann::json to_json(const DiscreteJoint& joint) {
  nlohmann::json atoms = nlohmann::json::array();
  for (const auto& a : joint.atoms()) {
    atoms.push_back({{"y", a.y}, {"x", a.x}, {"z", a.z}, {"p", a.p}});
  }
  return {{"atoms", std::move(atoms)}};
}

DiscreteJoint joint_from_json(const nlohmann::json& doc) {
  try {
    std::vector<Atom> atoms;
    for (const auto& item : doc.at("atoms")) {
      Atom a;
      a.y = item.at("y").get<double>();
      a.x = item.value("x", std::vector<double>{});
      a.z = item.value("z", std::vector<double>{});
      a.p = item.at("p").get<double>();
      atoms.push_back(std::move(a));
    }
    return DiscreteJoint(std::move(atoms));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::schema, std::string("malformed joint distribution JSON: ") + e.what());
  }
}

DiscreteJoint load_joint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ingestion, "cannot open '" + path.string() + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ingestion, "cannot parse '" + path.string() + "': " + e.what());
  }
  return joint_from_json(doc);
}

}  // namespace codec::oracle

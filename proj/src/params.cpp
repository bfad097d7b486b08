#include "mx/params.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace mx {

const char* prob_model_name(ProbModel m) {
  return m == ProbModel::Uniform ? "uniform" : "network";
}

ProbModel parse_prob_model(const std::string& s) {
  if (s == "uniform") return ProbModel::Uniform;
  if (s == "network") return ProbModel::Network;
  throw std::invalid_argument("unknown probability model: " + s);
}

std::string to_json(const ParameterSet& p) {
  nlohmann::json j;
  j["fan"] = std::vector<double>(p.fan.data(), p.fan.data() + p.fan.size());
  j["held"] = std::vector<double>(p.held.data(), p.held.data() + p.held.size());
  j["tile"] = std::vector<double>(p.tile.data(), p.tile.data() + p.tile.size());
  if (p.discard_model == ProbModel::Network) {
    j["held_discard"] = std::vector<double>(p.held_discard.data(),
                                            p.held_discard.data() + p.held_discard.size());
  }
  j["meta"] = {{"p_draw_model", prob_model_name(p.draw_model)},
               {"p_discard_model", prob_model_name(p.discard_model)},
               {"parameter_count", p.parameter_count()}};
  return j.dump(2);
}

ParameterSet params_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ParameterSet p;
  auto read_vec = [&j](const char* key, Eigen::VectorXd& out, int expect) {
    auto v = j.at(key).get<std::vector<double>>();
    if (static_cast<int>(v.size()) != expect) {
      throw std::runtime_error(std::string("parameter group '") + key + "' must have " +
                               std::to_string(expect) + " entries");
    }
    out = Eigen::Map<Eigen::VectorXd>(v.data(), expect);
  };
  read_vec("fan", p.fan, 80);
  read_vec("held", p.held, kNumHeldFeatures);
  read_vec("tile", p.tile, kNumTileKinds);
  if (j.contains("held_discard")) read_vec("held_discard", p.held_discard, kNumHeldFeatures);
  if (j.contains("meta")) {
    const auto& m = j["meta"];
    if (m.contains("p_draw_model")) p.draw_model = parse_prob_model(m["p_draw_model"]);
    if (m.contains("p_discard_model")) p.discard_model = parse_prob_model(m["p_discard_model"]);
  }
  return p;
}

void save_params(const ParameterSet& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << to_json(p) << "\n";
}

ParameterSet load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return params_from_json(text);
}

}  // namespace mx

#include "aed/problem_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace aed {

using nlohmann::json;

DcopInstance instance_from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("problem file is not valid JSON: ") + e.what());
  }

  try {
    const int agents = doc.at("agents").get<int>();
    auto domains = doc.at("domains").get<std::vector<int>>();
    if (static_cast<int>(domains.size()) != agents) {
      throw std::invalid_argument("\"domains\" must list one size per agent");
    }
    std::vector<Constraint> constraints;
    for (const json& c : doc.at("constraints")) {
      Constraint constraint;
      constraint.first = c.at("i").get<AgentId>();
      constraint.second = c.at("j").get<AgentId>();
      constraint.table = CostTable::from_rows(c.at("costs").get<std::vector<std::vector<Cost>>>());
      constraints.push_back(std::move(constraint));
    }
    return DcopInstance(std::move(domains), std::move(constraints));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed problem file: ") + e.what());
  }
}

std::string instance_to_json_text(const DcopInstance& instance) {
  json doc;
  doc["agents"] = instance.agent_count();
  doc["domains"] = std::vector<int>(instance.domain_sizes().begin(), instance.domain_sizes().end());
  json constraints = json::array();
  for (const Constraint& c : instance.constraints()) {
    json rows = json::array();
    for (int r = 0; r < c.table.rows(); ++r) {
      json row = json::array();
      for (int col = 0; col < c.table.cols(); ++col) row.push_back(c.table(r, col));
      rows.push_back(std::move(row));
    }
    constraints.push_back({{"i", c.first}, {"j", c.second}, {"costs", std::move(rows)}});
  }
  doc["constraints"] = std::move(constraints);
  return doc.dump() + "\n";
}

DcopInstance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open problem file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return instance_from_json_text(buffer.str());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

void save_instance(const DcopInstance& instance, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write problem file " + path.string());
  out << instance_to_json_text(instance);
  if (!out) throw std::runtime_error("failed writing problem file " + path.string());
}

}  // namespace aed

#include "nls/instance_io.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

namespace nls {

namespace {

using nlohmann::json;

[[noreturn]] void field_error(const std::string& source, const std::string& field,
                              const std::string& problem) {
  throw InputError(fmt::format("{}: field '{}' {}", source, field, problem));
}

const json& require(const json& doc, const std::string& source, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end()) field_error(source, key, "is missing");
  return *it;
}

double number_at(const json& value, const std::string& source, const std::string& field) {
  if (!value.is_number()) field_error(source, field, "must be a number");
  return value.get<double>();
}

}  // namespace

InstanceData parse_instance(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(fmt::format("{}: {}", source, e.what()));
  }
  if (!doc.is_object()) throw InputError(source + ": top-level value must be an object");

  const json& energies_json = require(doc, source, "energies");
  if (!energies_json.is_array()) field_error(source, "energies", "must be an array");
  std::vector<double> energies;
  for (std::size_t i = 0; i < energies_json.size(); ++i) {
    energies.push_back(number_at(energies_json[i], source, fmt::format("energies[{}]", i)));
  }
  const std::size_t n = energies.size();

  std::vector<int> degeneracies(n, 1);
  if (const auto it = doc.find("degeneracies"); it != doc.end()) {
    if (!it->is_array()) field_error(source, "degeneracies", "must be an array");
    if (it->size() != n) {
      field_error(source, "degeneracies", fmt::format("has {} entries, expected {}", it->size(), n));
    }
    for (std::size_t i = 0; i < n; ++i) {
      const json& d = (*it)[i];
      if (!d.is_number_integer()) {
        field_error(source, fmt::format("degeneracies[{}]", i), "must be an integer");
      }
      degeneracies[i] = d.get<int>();
    }
  }

  const json& rows = require(doc, source, "transition");
  if (!rows.is_array()) field_error(source, "transition", "must be an array of arrays");
  if (rows.size() != n) {
    field_error(source, "transition", fmt::format("has {} rows, expected {}", rows.size(), n));
  }
  Eigen::MatrixXd t(static_cast<Index>(n), static_cast<Index>(n));
  for (std::size_t m = 0; m < n; ++m) {
    const json& row = rows[m];
    const std::string name = fmt::format("transition[{}]", m);
    if (!row.is_array()) field_error(source, name, "must be an array");
    if (row.size() != n) {
      field_error(source, name, fmt::format("has {} entries, expected {}", row.size(), n));
    }
    for (std::size_t k = 0; k < n; ++k) {
      t(Index(m), Index(k)) = number_at(row[k], source, fmt::format("transition[{}][{}]", m, k));
    }
  }

  const double beta0 = number_at(require(doc, source, "beta0"), source, "beta0");

  try {
    return {LevelSystem(std::move(energies), std::move(degeneracies)), std::move(t), beta0};
  } catch (const InvalidInput& e) {
    throw InputError(fmt::format("{}: {}", source, e.what()));
  }
}

InstanceData load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("{}: cannot open file", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_instance(buffer.str(), path.string());
}

std::string serialize_instance(const InstanceData& instance) {
  nlohmann::ordered_json doc;
  const LevelSystem& s = instance.system;
  doc["energies"] = std::vector<double>(s.energies().data(), s.energies().data() + s.size());
  doc["degeneracies"] =
      std::vector<int>(s.degeneracies().data(), s.degeneracies().data() + s.size());
  auto rows = nlohmann::ordered_json::array();
  for (Index m = 0; m < instance.transition.rows(); ++m) {
    auto row = nlohmann::ordered_json::array();
    for (Index k = 0; k < instance.transition.cols(); ++k) row.push_back(instance.transition(m, k));
    rows.push_back(std::move(row));
  }
  doc["transition"] = std::move(rows);
  doc["beta0"] = instance.beta0;
  return doc.dump(2) + "\n";
}

}  // namespace nls

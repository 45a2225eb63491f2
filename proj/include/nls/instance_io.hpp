// Instance files: a JSON object
//   { "energies": [E_0, ...], "degeneracies": [d_0, ...],
//     "transition": [[T_00, T_01, ...], ...], "beta0": b }
// with transition[m][n] = P(m <- n) (row-major). "degeneracies" may be
// omitted and then defaults to all ones. Unknown fields are ignored.
#pragma once

#include <filesystem>
#include <string>

#include <Eigen/Dense>

#include "nls/core.hpp"

namespace nls {

/// Parsed but uncertified instance. The transition matrix is kept raw so
/// that certification failures can be reported rather than thrown.
struct InstanceData {
  LevelSystem system;
  Eigen::MatrixXd transition;
  double beta0;
};

/// Throws InputError with the source name and a line/column or field path.
InstanceData parse_instance(const std::string& text, const std::string& source = "<input>");
InstanceData load_instance(const std::filesystem::path& path);

/// Pretty-printed JSON in the schema above; doubles use the shortest
/// representation that round-trips exactly.
std::string serialize_instance(const InstanceData& instance);

}  // namespace nls

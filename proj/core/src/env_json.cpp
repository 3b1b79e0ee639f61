#include "mptd/env_json.hpp"

#include <json.hpp>

#include "mptd/error.hpp"

namespace mptd {

namespace {

using nlohmann::json;

json matrix_rows(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_array(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

// [s][a][s'] layout from per-action blocks.
json tensor_sas(const std::vector<Matrix>& blocks, int n_states) {
  json out = json::array();
  for (int s = 0; s < n_states; ++s) {
    json per_action = json::array();
    for (const Matrix& block : blocks) {
      json row = json::array();
      for (int s2 = 0; s2 < n_states; ++s2) row.push_back(block(s, s2));
      per_action.push_back(std::move(row));
    }
    out.push_back(std::move(per_action));
  }
  return out;
}

Matrix read_matrix(const json& j, Eigen::Index rows, Eigen::Index cols,
                   const char* field) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows) {
    throw StructuralError(std::string("field '") + field + "' has wrong row count");
  }
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[i];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw StructuralError(std::string("field '") + field + "' has wrong column count");
    }
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = row[k].get<double>();
  }
  return m;
}

Vector read_vector(const json& j, Eigen::Index n, const char* field) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != n) {
    throw StructuralError(std::string("field '") + field + "' has wrong length");
  }
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = j[i].get<double>();
  return v;
}

std::vector<Matrix> read_tensor(const json& j, int n_states, int n_actions,
                                const char* field) {
  if (!j.is_array() || static_cast<int>(j.size()) != n_states) {
    throw StructuralError(std::string("field '") + field + "' has wrong state count");
  }
  std::vector<Matrix> blocks(n_actions, Matrix::Zero(n_states, n_states));
  for (int s = 0; s < n_states; ++s) {
    const Matrix per_state = read_matrix(j[s], n_actions, n_states, field);
    for (int a = 0; a < n_actions; ++a) blocks[a].row(s) = per_state.row(a);
  }
  return blocks;
}

const json& require(const json& doc, const char* field) {
  auto it = doc.find(field);
  if (it == doc.end()) {
    throw StructuralError(std::string("missing field '") + field + "'");
  }
  return *it;
}

}  // namespace

std::string env_to_json(const BenchmarkEnv& env) {
  json doc;
  doc["name"] = env.name;
  doc["n_states"] = env.mdp.n_states;
  doc["n_actions"] = env.mdp.n_actions;
  doc["transition"] = tensor_sas(env.mdp.transition, env.mdp.n_states);
  doc["reward"] = tensor_sas(env.mdp.reward, env.mdp.n_states);
  doc["gamma"] = env.mdp.gamma;
  doc["start"] = vector_array(env.mdp.start_distribution);
  doc["terminals"] = env.mdp.terminal_states;
  doc["target_policy"] = matrix_rows(env.target.probs);
  doc["behavior_policy"] = matrix_rows(env.behavior.probs);
  doc["features"] = matrix_rows(env.features.phi);
  doc["initial_theta"] = vector_array(env.initial_theta);
  return doc.dump(2);
}

BenchmarkEnv env_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("environment JSON does not parse: ") + e.what());
  }
  try {
    BenchmarkEnv env;
    env.name = doc.value("name", std::string("custom"));
    const int n = require(doc, "n_states").get<int>();
    const int m = require(doc, "n_actions").get<int>();
    if (n <= 0 || m <= 0) throw StructuralError("n_states and n_actions must be positive");
    env.mdp.n_states = n;
    env.mdp.n_actions = m;
    env.mdp.transition = read_tensor(require(doc, "transition"), n, m, "transition");
    env.mdp.reward = read_tensor(require(doc, "reward"), n, m, "reward");
    env.mdp.gamma = require(doc, "gamma").get<double>();
    env.mdp.start_distribution = read_vector(require(doc, "start"), n, "start");
    env.mdp.terminal_states = require(doc, "terminals").get<std::vector<int>>();
    env.target.probs = read_matrix(require(doc, "target_policy"), n, m, "target_policy");
    env.behavior.probs =
        read_matrix(require(doc, "behavior_policy"), n, m, "behavior_policy");
    const json& features = require(doc, "features");
    if (!features.is_array() || features.empty() || !features[0].is_array()) {
      throw StructuralError("field 'features' must be a non-empty matrix");
    }
    const auto d = static_cast<Eigen::Index>(features[0].size());
    env.features.phi = read_matrix(features, n, d, "features");
    if (doc.contains("initial_theta")) {
      env.initial_theta = read_vector(doc["initial_theta"], d, "initial_theta");
    } else {
      env.initial_theta = Vector::Zero(d);
    }
    env.validate();
    return env;
  } catch (const json::exception& e) {
    throw StructuralError(std::string("environment JSON has a bad field: ") + e.what());
  }
}

}  // namespace mptd

#pragma once

#include <string>

#include "mptd/mdp.hpp"

namespace mptd {

/// JSON document with fields name, n_states, n_actions, transition
/// ([s][a][s']), reward ([s][a][s']), gamma, start, terminals,
/// target_policy, behavior_policy, features, initial_theta.
/// Doubles are written in shortest round-trip form, so export/import is
/// lossless.
std::string env_to_json(const BenchmarkEnv& env);

/// Throws UsageError on malformed JSON, StructuralError on invalid content.
BenchmarkEnv env_from_json(const std::string& text);

}  // namespace mptd

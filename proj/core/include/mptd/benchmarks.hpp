#pragma once

#include "mptd/mdp.hpp"

namespace mptd {

/// Builds one of the four off-policy prediction benchmarks. Deterministic.
///
///   two_state    phi = [1], [2]; solid -> s2, dashed -> s1; pi solid,
///                mu 0.5/0.5; r = 0; gamma 0.9; theta_0 = [10].
///   baird        7 states, 8 features; dashed -> uniform over s1..s6,
///                solid -> s7; pi solid, mu solid w.p. 1/7; gamma 0.99;
///                theta_0 = (1,1,1,1,1,1,10,1).
///   random_walk  5-state line with terminals at both ends, +1 on entering
///                the right terminal; mu 0.5/0.5, pi 0.4 left / 0.6 right;
///                tabular features; gamma 0.99.
///   boyan_chain  13-state continuing chain; from k > 2 move to k-1 or k-2
///                (reward -3), 2 -> 1 (reward -2), 1 -> 13 (reward 0);
///                mu 0.5/0.5, pi 0.4 (k-1) / 0.6 (k-2); 4 interpolating
///                features anchored at 13, 9, 5, 1; gamma 0.9.
BenchmarkEnv make_benchmark(BenchmarkId id);
BenchmarkEnv make_benchmark(const std::string& name);

}  // namespace mptd

// Copyright 2026 The fqdrl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <span>
#include <vector>

#include "fqdrl/qdqn.hpp"

namespace fqdrl::federation {

enum class Mode { federated, isolated };

struct FederationConfig {
    Mode mode = Mode::federated;
    int sync_every = 10; // episodes between rounds
    /// Aggregation weights, one per agent; empty means uniform. Must be
    /// nonnegative and sum to 1 within 1e-12.
    std::vector<double> weights;
    /// Per-agent Adam moments are zeroed when the global parameters are
    /// broadcast, so stale moments never push freshly averaged parameters.
    bool reset_optimizer = true;

    void validate(int n_agents) const;
    std::vector<double> effective_weights(int n_agents) const;
};

/// One synchronization event.
struct FederationRound {
    int round_index = 0;
    int episode = 0; // episode boundary the round ran at (1-based count)
    std::vector<double> global;
    std::vector<double> agent_l2_norms;
    double global_l2 = 0.0;
};

/// Elementwise weighted mean: out[j] = sum_k weights[k] * vectors[k][j].
/// Bit-identical inputs short-circuit to the input so aggregation is an
/// exact fixed point.
std::vector<double> aggregate(const std::vector<std::vector<double>>& vectors,
                              std::span<const double> weights);

/// Collects every agent's online parameters, aggregates, and broadcasts
/// the global vector to each agent's online and target networks. A round
/// with a single agent is recorded but mutates nothing. Mismatched
/// architectures are a hard error.
FederationRound run_round(std::span<qdqn::Agent* const> agents,
                          const FederationConfig& config, int round_index,
                          int episode);

} // namespace fqdrl::federation

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

#include "fqdrl/federation.hpp"

#include <cmath>
#include <string>

namespace fqdrl::federation {

namespace {

double l2_norm(std::span<const double> v) {
    double sum = 0.0;
    for (double x : v) {
        sum += x * x;
    }
    return std::sqrt(sum);
}

} // namespace

void FederationConfig::validate(int n_agents) const {
    if (n_agents < 1) {
        throw ConfigError("FederationConfig: n_agents must be >= 1");
    }
    if (sync_every < 1) {
        throw ConfigError("FederationConfig: sync_every must be >= 1");
    }
    if (weights.empty()) {
        return;
    }
    if (static_cast<int>(weights.size()) != n_agents) {
        throw ConfigError("FederationConfig: weights length " +
                          std::to_string(weights.size()) +
                          " does not match n_agents " +
                          std::to_string(n_agents));
    }
    double sum = 0.0;
    for (double w : weights) {
        if (w < 0.0 || !std::isfinite(w)) {
            throw ConfigError("FederationConfig: weights must be finite "
                              "and nonnegative");
        }
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw ConfigError("FederationConfig: weights must sum to 1");
    }
}

std::vector<double> FederationConfig::effective_weights(int n_agents) const {
    validate(n_agents);
    if (!weights.empty()) {
        return weights;
    }
    return std::vector<double>(n_agents, 1.0 / n_agents);
}

std::vector<double> aggregate(const std::vector<std::vector<double>>& vectors,
                              std::span<const double> weights) {
    if (vectors.empty()) {
        throw UsageError("aggregate: no parameter vectors");
    }
    if (weights.size() != vectors.size()) {
        throw ConfigError("aggregate: weights length does not match the "
                          "number of vectors");
    }
    double sum = 0.0;
    for (double w : weights) {
        if (w < 0.0 || !std::isfinite(w)) {
            throw ConfigError("aggregate: weights must be finite and "
                              "nonnegative");
        }
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw ConfigError("aggregate: weights must sum to 1");
    }
    const std::size_t length = vectors.front().size();
    bool all_identical = true;
    for (const std::vector<double>& v : vectors) {
        if (v.size() != length) {
            throw UsageError("aggregate: parameter vectors differ in length");
        }
        all_identical = all_identical && v == vectors.front();
    }
    if (all_identical) {
        return vectors.front();
    }
    std::vector<double> out(length, 0.0);
    for (std::size_t k = 0; k < vectors.size(); ++k) {
        const double w = weights[k];
        const std::vector<double>& v = vectors[k];
        for (std::size_t j = 0; j < length; ++j) {
            out[j] += w * v[j];
        }
    }
    return out;
}

FederationRound run_round(std::span<qdqn::Agent* const> agents,
                          const FederationConfig& config, int round_index,
                          int episode) {
    const int n = static_cast<int>(agents.size());
    config.validate(n);
    for (const qdqn::Agent* agent : agents) {
        if (agent == nullptr) {
            throw UsageError("run_round: null agent");
        }
        if (agent->approximator_kind() != agents[0]->approximator_kind() ||
            agent->parameter_count() != agents[0]->parameter_count()) {
            throw UsageError("run_round: agents have mismatched "
                             "architectures");
        }
    }

    std::vector<std::vector<double>> contributed;
    contributed.reserve(n);
    for (const qdqn::Agent* agent : agents) {
        contributed.push_back(agent->flat_parameters());
    }

    FederationRound round;
    round.round_index = round_index;
    round.episode = episode;
    round.global = aggregate(contributed, config.effective_weights(n));
    round.agent_l2_norms.reserve(n);
    for (const std::vector<double>& v : contributed) {
        round.agent_l2_norms.push_back(l2_norm(v));
    }
    round.global_l2 = l2_norm(round.global);

    // A single participant exchanges nothing; leaving the agent untouched
    // keeps an n_agents=1 federated run identical to the isolated run.
    if (n > 1) {
        for (qdqn::Agent* agent : agents) {
            agent->set_all_parameters(round.global);
            if (config.reset_optimizer) {
                agent->reset_optimizer();
            }
        }
    }
    return round;
}

} // namespace fqdrl::federation

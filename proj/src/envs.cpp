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

#include "fqdrl/envs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace fqdrl::envs {

CartPole::CartPole(int max_episode_steps) : max_steps_(max_episode_steps) {
    if (max_episode_steps < 1) {
        throw ConfigError("CartPole: max_episode_steps must be >= 1");
    }
}

double CartPole::angle_threshold() {
    return 12.0 * std::numbers::pi / 180.0;
}

std::vector<double> CartPole::reset(Rng& rng) {
    state_.resize(4);
    for (double& component : state_) {
        component = rng.uniform(-0.05, 0.05);
    }
    step_count_ = 0;
    done_ = false;
    return state_;
}

StepResult CartPole::step(int action, Rng&) {
    if (done_) {
        throw UsageError("CartPole: step after episode end");
    }
    if (action != 0 && action != 1) {
        throw UsageError("CartPole: action must be 0 or 1");
    }
    const double total_mass = kCartMass + kPoleMass;
    const double pole_mass_length = kPoleMass * kPoleHalfLength;

    double x = state_[0];
    double x_dot = state_[1];
    double phi = state_[2];
    double phi_dot = state_[3];

    const double force = action == 1 ? kForceMag : -kForceMag;
    const double cos_phi = std::cos(phi);
    const double sin_phi = std::sin(phi);
    const double temp =
        (force + pole_mass_length * phi_dot * phi_dot * sin_phi) / total_mass;
    const double phi_acc =
        (kGravity * sin_phi - cos_phi * temp) /
        (kPoleHalfLength *
         (4.0 / 3.0 - kPoleMass * cos_phi * cos_phi / total_mass));
    const double x_acc = temp - pole_mass_length * phi_acc * cos_phi / total_mass;

    x += kTau * x_dot;
    x_dot += kTau * x_acc;
    phi += kTau * phi_dot;
    phi_dot += kTau * phi_acc;

    state_ = {x, x_dot, phi, phi_dot};
    ++step_count_;

    const bool out_of_bounds =
        std::abs(x) > kXThreshold || std::abs(phi) > angle_threshold();
    done_ = out_of_bounds || step_count_ >= max_steps_;
    return StepResult{state_, 1.0, done_};
}

void SliceConfig::validate() const {
    if (n_slices < 2) {
        throw ConfigError("SliceConfig: n_slices must be >= 2");
    }
    if (prb_budget < 1) {
        throw ConfigError("SliceConfig: prb_budget must be >= 1");
    }
    if (granularity < 1 || prb_budget % granularity != 0) {
        throw ConfigError("SliceConfig: granularity must divide prb_budget");
    }
    if (q_max < 1) {
        throw ConfigError("SliceConfig: q_max must be >= 1");
    }
    if (max_episode_steps < 1) {
        throw ConfigError("SliceConfig: max_episode_steps must be >= 1");
    }
    if (drop_penalty < 0.0) {
        throw ConfigError("SliceConfig: drop_penalty must be >= 0");
    }
    const std::size_t n = static_cast<std::size_t>(n_slices);
    if (mu.size() != n || omega.size() != n || lambda_lo.size() != n ||
        lambda_hi.size() != n) {
        throw ConfigError("SliceConfig: mu, omega, lambda_lo and lambda_hi "
                          "must each have one entry per slice");
    }
    if (!rate_max.empty() && rate_max.size() != n) {
        throw ConfigError("SliceConfig: rate_max must be empty or have one "
                          "entry per slice");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (mu[i] < 0.0 || omega[i] < 0.0) {
            throw ConfigError("SliceConfig: mu and omega must be >= 0");
        }
        if (lambda_lo[i] < 0.0 || lambda_hi[i] < lambda_lo[i]) {
            throw ConfigError("SliceConfig: need 0 <= lambda_lo <= "
                              "lambda_hi per slice");
        }
        if (!rate_max.empty() && rate_max[i] < lambda_hi[i]) {
            throw ConfigError("SliceConfig: rate_max must be >= lambda_hi "
                              "so observations stay in [0, 1]");
        }
    }
}

std::vector<double> SliceConfig::effective_rate_max() const {
    return rate_max.empty() ? lambda_hi : rate_max;
}

std::vector<std::vector<int>> allocation_table(int prb_budget, int n_slices,
                                               int granularity) {
    if (n_slices < 1) {
        throw ConfigError("allocation_table: n_slices must be >= 1");
    }
    if (granularity < 1 || prb_budget < 0 ||
        prb_budget % granularity != 0) {
        throw ConfigError("allocation_table: granularity must divide the "
                          "PRB budget");
    }
    std::vector<std::vector<int>> table;
    std::vector<int> row(n_slices, 0);
    // Lexicographic enumeration: slice 0 varies slowest.
    const std::function<void(int, int)> fill = [&](int slice, int remaining) {
        if (slice == n_slices - 1) {
            row[slice] = remaining;
            table.push_back(row);
            return;
        }
        for (int amount = 0; amount <= remaining; amount += granularity) {
            row[slice] = amount;
            fill(slice + 1, remaining - amount);
        }
    };
    fill(0, prb_budget);
    return table;
}

SliceEnv::SliceEnv(SliceConfig config) : config_(std::move(config)) {
    config_.validate();
    actions_ = allocation_table(config_.prb_budget, config_.n_slices,
                                config_.granularity);
    rate_max_ = config_.effective_rate_max();
    queues_.assign(config_.n_slices, 0.0);
    rates_.assign(config_.n_slices, 0.0);
}

void SliceEnv::set_arrival_override(
    std::function<std::vector<int>(int step)> arrivals) {
    arrival_override_ = std::move(arrivals);
}

std::vector<double> SliceEnv::observation() const {
    std::vector<double> obs;
    obs.reserve(2 * config_.n_slices);
    for (double q : queues_) {
        obs.push_back(q / config_.q_max);
    }
    for (int i = 0; i < config_.n_slices; ++i) {
        obs.push_back(rate_max_[i] > 0.0 ? rates_[i] / rate_max_[i] : 0.0);
    }
    return obs;
}

std::vector<double> SliceEnv::reset(Rng& rng) {
    std::fill(queues_.begin(), queues_.end(), 0.0);
    for (int i = 0; i < config_.n_slices; ++i) {
        rates_[i] = rng.uniform(config_.lambda_lo[i], config_.lambda_hi[i]);
    }
    step_count_ = 0;
    done_ = false;
    info_ = StepInfo{};
    return observation();
}

StepResult SliceEnv::step(int action, Rng& rng) {
    if (done_) {
        throw UsageError("SliceEnv: step after episode end");
    }
    if (action < 0 || action >= n_actions()) {
        throw UsageError("SliceEnv: action index out of range: " +
                         std::to_string(action));
    }
    const std::vector<int>& alloc = actions_[action];
    const int n = config_.n_slices;

    info_.allocation = alloc;
    info_.arrivals.resize(n);
    info_.served.assign(n, 0.0);
    info_.drops.assign(n, 0.0);

    if (arrival_override_) {
        info_.arrivals = arrival_override_(step_count_);
        if (static_cast<int>(info_.arrivals.size()) != n) {
            throw UsageError("SliceEnv: arrival override returned wrong "
                             "slice count");
        }
    } else {
        for (int i = 0; i < n; ++i) {
            info_.arrivals[i] = rng.poisson(rates_[i]);
        }
    }

    double reward = 0.0;
    for (int i = 0; i < n; ++i) {
        const double backlog = queues_[i] + info_.arrivals[i];
        const double capacity = alloc[i] * config_.mu[i];
        const double served = std::min(backlog, capacity);
        const double after = backlog - served;
        const double next_queue = std::min(after, double(config_.q_max));
        const double drops = after - next_queue;

        info_.served[i] = served;
        info_.drops[i] = drops;
        queues_[i] = next_queue;
        reward -= config_.omega[i] * (next_queue / config_.q_max);
        reward -= config_.drop_penalty * drops;
    }

    ++step_count_;
    done_ = step_count_ >= config_.max_episode_steps;
    return StepResult{observation(), reward, done_};
}

} // namespace fqdrl::envs

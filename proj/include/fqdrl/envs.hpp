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

#include <functional>
#include <span>
#include <vector>

#include "fqdrl/rng.hpp"

namespace fqdrl::envs {

struct StepResult {
    std::vector<double> state;
    double reward = 0.0;
    bool done = false;
};

/// Episodic environment. One instance per agent; the caller threads its
/// own rng stream through reset/step so trajectories are reproducible.
/// Stepping a finished episode is a usage error.
class Env {
  public:
    virtual ~Env() = default;

    virtual std::vector<double> reset(Rng& rng) = 0;
    virtual StepResult step(int action, Rng& rng) = 0;
    virtual int state_dim() const = 0;
    virtual int n_actions() const = 0;
    virtual int max_episode_steps() const = 0;
};

/// Classic cart-pole balancing: state (x, x_dot, phi, phi_dot), actions
/// push left/right with 10 N, explicit Euler at dt = 0.02, reward +1 per
/// step. Episodes end when |x| > 2.4, |phi| > 12 degrees, or the step
/// limit is hit.
class CartPole : public Env {
  public:
    static constexpr double kGravity = 9.8;
    static constexpr double kCartMass = 1.0;
    static constexpr double kPoleMass = 0.1;
    static constexpr double kPoleHalfLength = 0.5;
    static constexpr double kForceMag = 10.0;
    static constexpr double kTau = 0.02;
    static constexpr double kXThreshold = 2.4;
    static constexpr int kDefaultMaxSteps = 200;

    explicit CartPole(int max_episode_steps = kDefaultMaxSteps);

    std::vector<double> reset(Rng& rng) override;
    StepResult step(int action, Rng& rng) override;
    int state_dim() const override { return 4; }
    int n_actions() const override { return 2; }
    int max_episode_steps() const override { return max_steps_; }

    static double angle_threshold(); // 12 degrees in radians

  private:
    std::vector<double> state_;
    int max_steps_;
    int step_count_ = 0;
    bool done_ = true;
};

struct SliceConfig {
    int n_slices = 2;
    int prb_budget = 10;  // B, PRBs per step
    int granularity = 5;  // g, allocation step; must divide B
    int q_max = 50;       // packets per queue
    std::vector<double> mu = {2.0, 2.0};       // packets served per PRB
    std::vector<double> omega = {0.5, 0.5};    // backlog weights
    double drop_penalty = 1.0;                 // rho
    /// Per-episode mean arrival rate is drawn uniformly from
    /// [lambda_lo[i], lambda_hi[i]] per slice.
    std::vector<double> lambda_lo = {1.0, 1.0};
    std::vector<double> lambda_hi = {5.0, 5.0};
    /// Rates are normalized by rate_max in observations. Shared across
    /// agents so heterogeneous traffic still maps to one policy space;
    /// empty defaults to lambda_hi.
    std::vector<double> rate_max;
    int max_episode_steps = 100;

    void validate() const;
    std::vector<double> effective_rate_max() const;
};

/// All compositions of B into n_slices nonnegative multiples of g, in
/// lexicographic order. Every row sums to B.
std::vector<std::vector<int>> allocation_table(int prb_budget, int n_slices,
                                               int granularity);

/// Base-station slice scheduler with virtual transmission queues: Poisson
/// arrivals per slice, service capacity alloc_i * mu_i packets per step,
/// queues capped at q_max with overflow counted as dropped. Observation is
/// [q_1..q_n normalized by q_max, rate_1..rate_n normalized by rate_max].
/// Reward: -sum_i omega_i * q_i'/q_max - rho * sum_i drops_i.
class SliceEnv : public Env {
  public:
    struct StepInfo {
        std::vector<int> arrivals;
        std::vector<double> served;
        std::vector<double> drops;
        std::vector<int> allocation;
    };

    explicit SliceEnv(SliceConfig config);

    std::vector<double> reset(Rng& rng) override;
    StepResult step(int action, Rng& rng) override;
    int state_dim() const override { return 2 * config_.n_slices; }
    int n_actions() const override {
        return static_cast<int>(actions_.size());
    }
    int max_episode_steps() const override {
        return config_.max_episode_steps;
    }

    const SliceConfig& config() const { return config_; }
    const std::vector<std::vector<int>>& actions() const { return actions_; }
    std::span<const double> queues() const { return queues_; }
    std::span<const double> episode_rates() const { return rates_; }
    /// Diagnostics for the step that just ran (conservation checks).
    const StepInfo& last_step_info() const { return info_; }

    /// Replaces Poisson sampling with a fixed per-step arrival source;
    /// used for deterministic replay.
    void set_arrival_override(
        std::function<std::vector<int>(int step)> arrivals);

  private:
    std::vector<double> observation() const;

    SliceConfig config_;
    std::vector<std::vector<int>> actions_;
    std::vector<double> rate_max_;
    std::vector<double> queues_;
    std::vector<double> rates_;
    std::function<std::vector<int>(int)> arrival_override_;
    StepInfo info_;
    int step_count_ = 0;
    bool done_ = true;
};

} // namespace fqdrl::envs

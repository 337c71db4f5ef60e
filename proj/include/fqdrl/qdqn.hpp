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

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fqdrl/pqc.hpp"
#include "fqdrl/rng.hpp"

namespace fqdrl::qdqn {

/// One experience tuple stored in replay.
struct Transition {
    std::vector<double> s;
    int a = 0;
    double r = 0.0;
    std::vector<double> s_next;
    bool done = false;
};

using Batch = std::vector<Transition>;

/// Fixed-capacity ring; oldest entries are evicted first.
class ReplayBuffer {
  public:
    explicit ReplayBuffer(std::size_t capacity);

    void push(Transition t);
    std::size_t size() const { return stored_.size(); }
    std::size_t capacity() const { return capacity_; }
    std::size_t total_inserted() const { return inserted_; }

    /// i = 0 is the oldest transition still held.
    const Transition& nth_oldest(std::size_t i) const;

    /// Uniform sample (with replacement) of storage indices; feed through
    /// nth_oldest-independent operator[] below.
    std::vector<std::size_t> sample_indices(std::size_t n, Rng& rng) const;
    const Transition& operator[](std::size_t storage_index) const;

    Batch sample(std::size_t n, Rng& rng) const;

  private:
    std::vector<Transition> stored_;
    std::size_t capacity_;
    std::size_t next_slot_ = 0;
    std::size_t inserted_ = 0;
};

/// epsilon(step) = max(end, start * decay^step); non-increasing, clamped.
struct EpsilonSchedule {
    double start = 1.0;
    double end = 0.05;
    double decay = 0.995;

    double at(long step) const;
    void validate() const;
};

enum class OptimizerKind { adam, sgd };

struct AgentConfig {
    double gamma = 0.99;
    EpsilonSchedule epsilon;
    int batch_size = 32;
    int target_sync_interval = 50; // agent steps between hard target copies
    int train_interval = 1;        // agent steps between gradient updates
    double lr_theta = 1e-3;
    double lr_lambda = 1e-3;
    double lr_w = 1e-2;
    double lr_mlp = 1e-3;
    int buffer_capacity = 10000;
    int train_start_size = 200;
    OptimizerKind optimizer = OptimizerKind::adam;

    void validate() const;
};

/// Q-function approximator surface shared by the PQC and the classical
/// baseline; train_step and federation only ever see this interface.
class Approximator {
  public:
    virtual ~Approximator() = default;

    virtual int state_dim() const = 0;
    virtual int n_actions() const = 0;
    virtual std::vector<double> q_values(std::span<const double> state) const = 0;
    /// dLoss/dparams (flat) given dLoss/dq per action.
    virtual std::vector<double>
    loss_gradient(std::span<const double> state,
                  std::span<const double> upstream) const = 0;
    virtual std::vector<double> flat_parameters() const = 0;
    virtual void set_flat_parameters(std::span<const double> flat) = 0;
    virtual int parameter_count() const = 0;
    /// Per-parameter learning rates (the PQC uses separate theta/lambda/w
    /// rates, the MLP a single one).
    virtual std::vector<double> learning_rates(const AgentConfig& cfg) const = 0;
    virtual std::unique_ptr<Approximator> clone() const = 0;
    virtual std::string kind() const = 0;
};

class PqcApproximator : public Approximator {
  public:
    PqcApproximator(pqc::Architecture arch, pqc::Parameters params);

    const pqc::Architecture& architecture() const { return arch_; }
    const pqc::Parameters& parameters() const { return params_; }

    int state_dim() const override { return arch_.state_dim; }
    int n_actions() const override { return arch_.n_actions(); }
    std::vector<double> q_values(std::span<const double> state) const override;
    std::vector<double>
    loss_gradient(std::span<const double> state,
                  std::span<const double> upstream) const override;
    std::vector<double> flat_parameters() const override;
    void set_flat_parameters(std::span<const double> flat) override;
    int parameter_count() const override { return arch_.parameter_count(); }
    std::vector<double> learning_rates(const AgentConfig& cfg) const override;
    std::unique_ptr<Approximator> clone() const override;
    std::string kind() const override { return "pqc"; }

  private:
    pqc::Architecture arch_;
    pqc::Parameters params_;
};

/// q = W2 * tanh(W1 * s + b1) + b2. Flat parameter layout: W1 row-major,
/// b1, W2 row-major, b2.
class MlpApproximator : public Approximator {
  public:
    /// Zero-initialized; hidden must be >= 1.
    MlpApproximator(int state_dim, int hidden, int n_actions);
    static MlpApproximator random_init(int state_dim, int hidden,
                                       int n_actions, Rng& rng);
    static int count_parameters(int state_dim, int hidden, int n_actions);

    int hidden() const { return hidden_; }
    int state_dim() const override { return state_dim_; }
    int n_actions() const override { return n_actions_; }
    std::vector<double> q_values(std::span<const double> state) const override;
    std::vector<double>
    loss_gradient(std::span<const double> state,
                  std::span<const double> upstream) const override;
    std::vector<double> flat_parameters() const override { return params_; }
    void set_flat_parameters(std::span<const double> flat) override;
    int parameter_count() const override {
        return static_cast<int>(params_.size());
    }
    std::vector<double> learning_rates(const AgentConfig& cfg) const override;
    std::unique_ptr<Approximator> clone() const override;
    std::string kind() const override { return "mlp"; }

  private:
    int state_dim_;
    int hidden_;
    int n_actions_;
    std::vector<double> params_;
};

/// Adam (beta1 0.9, beta2 0.999, eps 1e-8) or plain gradient descent over
/// a flat parameter vector with per-parameter learning rates.
class Optimizer {
  public:
    Optimizer(OptimizerKind kind, std::vector<double> per_parameter_lr);

    void step(std::span<double> params, std::span<const double> grads);
    /// Zeroes the moments and the step counter (used at federation rounds).
    void reset();

    OptimizerKind kind() const { return kind_; }
    long step_count() const { return t_; }
    const std::vector<double>& first_moment() const { return m_; }
    const std::vector<double>& second_moment() const { return v_; }
    void restore(std::vector<double> m, std::vector<double> v, long t);

  private:
    OptimizerKind kind_;
    std::vector<double> lr_;
    std::vector<double> m_;
    std::vector<double> v_;
    long t_ = 0;
};

/// Epsilon-greedy over q: uniform random action with probability epsilon,
/// otherwise argmax with ties broken by lowest index.
int select_action(std::span<const double> q, double epsilon, Rng& rng);

/// y_i = r_i, or r_i + gamma * max_a targetQ(s_next_i) for non-terminal
/// transitions. The target network output is treated as a constant.
std::vector<double> bellman_targets(const Batch& batch,
                                    const Approximator& target_net,
                                    double gamma);

/// One gradient-descent update on mean squared TD error; only the taken
/// action's output contributes upstream gradient per sample. Returns the
/// batch loss. Non-finite loss raises DivergenceError.
double train_step(Approximator& approx, Optimizer& opt, const Batch& batch,
                  std::span<const double> targets);

/// Hard copy online -> target.
void sync_target(const Approximator& online, Approximator& target);

/// One DQN agent: online/target approximators, replay, ε-greedy policy,
/// periodic training and target sync. Single-threaded by design; agents
/// share nothing.
class Agent {
  public:
    Agent(std::unique_ptr<Approximator> online, AgentConfig config,
          std::uint64_t seed);

    int act(std::span<const double> state);
    void observe(Transition t);

    long steps() const { return step_count_; }
    double epsilon() const { return config_.epsilon.at(step_count_); }
    double last_loss() const { return last_loss_; }

    const Approximator& online() const { return *online_; }
    const Approximator& target() const { return *target_; }
    const AgentConfig& config() const { return config_; }
    Optimizer& optimizer() { return optimizer_; }
    const Optimizer& optimizer() const { return optimizer_; }
    const ReplayBuffer& buffer() const { return buffer_; }

    int parameter_count() const { return online_->parameter_count(); }
    std::string approximator_kind() const { return online_->kind(); }
    std::vector<double> flat_parameters() const {
        return online_->flat_parameters();
    }
    /// Federation broadcast: replaces both online and target parameters.
    void set_all_parameters(std::span<const double> flat);
    void reset_optimizer() { optimizer_.reset(); }

  private:
    std::unique_ptr<Approximator> online_;
    std::unique_ptr<Approximator> target_;
    AgentConfig config_;
    Optimizer optimizer_;
    ReplayBuffer buffer_;
    Rng rng_;
    long step_count_ = 0;
    double last_loss_ = 0.0;
};

} // namespace fqdrl::qdqn

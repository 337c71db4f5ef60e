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

#include "fqdrl/qdqn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fqdrl::qdqn {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) {
        throw ConfigError("ReplayBuffer: capacity must be positive");
    }
    stored_.reserve(capacity);
}

void ReplayBuffer::push(Transition t) {
    if (stored_.size() < capacity_) {
        stored_.push_back(std::move(t));
    } else {
        stored_[next_slot_] = std::move(t);
    }
    next_slot_ = (next_slot_ + 1) % capacity_;
    ++inserted_;
}

const Transition& ReplayBuffer::nth_oldest(std::size_t i) const {
    if (i >= stored_.size()) {
        throw UsageError("ReplayBuffer: index out of range");
    }
    if (stored_.size() < capacity_) {
        return stored_[i];
    }
    return stored_[(next_slot_ + i) % capacity_];
}

const Transition& ReplayBuffer::operator[](std::size_t storage_index) const {
    if (storage_index >= stored_.size()) {
        throw UsageError("ReplayBuffer: storage index out of range");
    }
    return stored_[storage_index];
}

std::vector<std::size_t> ReplayBuffer::sample_indices(std::size_t n,
                                                      Rng& rng) const {
    if (stored_.empty()) {
        throw UsageError("ReplayBuffer: cannot sample from an empty buffer");
    }
    std::vector<std::size_t> indices(n);
    for (std::size_t& idx : indices) {
        idx = static_cast<std::size_t>(
            rng.uniform_int(static_cast<int>(stored_.size())));
    }
    return indices;
}

Batch ReplayBuffer::sample(std::size_t n, Rng& rng) const {
    Batch batch;
    batch.reserve(n);
    for (std::size_t idx : sample_indices(n, rng)) {
        batch.push_back(stored_[idx]);
    }
    return batch;
}

double EpsilonSchedule::at(long step) const {
    return std::max(end, start * std::pow(decay, static_cast<double>(step)));
}

void EpsilonSchedule::validate() const {
    if (start < 0.0 || start > 1.0 || end < 0.0 || end > 1.0 || end > start) {
        throw ConfigError("EpsilonSchedule: need 0 <= end <= start <= 1");
    }
    if (decay <= 0.0 || decay > 1.0) {
        throw ConfigError("EpsilonSchedule: decay must be in (0, 1]");
    }
}

void AgentConfig::validate() const {
    if (gamma < 0.0 || gamma >= 1.0) {
        throw ConfigError("AgentConfig: gamma must be in [0, 1)");
    }
    epsilon.validate();
    if (batch_size < 1) {
        throw ConfigError("AgentConfig: batch_size must be >= 1");
    }
    if (train_start_size < batch_size) {
        throw ConfigError("AgentConfig: batch_size must not exceed "
                          "train_start_size");
    }
    if (buffer_capacity < train_start_size) {
        throw ConfigError("AgentConfig: buffer_capacity must be >= "
                          "train_start_size");
    }
    if (target_sync_interval < 1 || train_interval < 1) {
        throw ConfigError("AgentConfig: intervals must be >= 1");
    }
    for (double lr : {lr_theta, lr_lambda, lr_w, lr_mlp}) {
        if (lr < 0.0 || !std::isfinite(lr)) {
            throw ConfigError("AgentConfig: learning rates must be finite "
                              "and >= 0");
        }
    }
}

PqcApproximator::PqcApproximator(pqc::Architecture arch,
                                 pqc::Parameters params)
    : arch_(std::move(arch)), params_(std::move(params)) {
    arch_.validate();
    if (static_cast<int>(pqc::flatten(params_).size()) !=
        arch_.parameter_count()) {
        throw ConfigError("PqcApproximator: parameter shapes do not match "
                          "architecture");
    }
}

std::vector<double>
PqcApproximator::q_values(std::span<const double> state) const {
    return pqc::q_values(arch_, params_, state).q;
}

std::vector<double>
PqcApproximator::loss_gradient(std::span<const double> state,
                               std::span<const double> upstream) const {
    return pqc::flatten(pqc::gradients(arch_, params_, state, upstream));
}

std::vector<double> PqcApproximator::flat_parameters() const {
    return pqc::flatten(params_);
}

void PqcApproximator::set_flat_parameters(std::span<const double> flat) {
    params_ = pqc::unflatten(arch_, flat);
}

std::vector<double>
PqcApproximator::learning_rates(const AgentConfig& cfg) const {
    std::vector<double> lr;
    lr.reserve(arch_.parameter_count());
    lr.insert(lr.end(), arch_.theta_count(), cfg.lr_theta);
    lr.insert(lr.end(), arch_.lambda_count(), cfg.lr_lambda);
    lr.insert(lr.end(), arch_.n_actions(), cfg.lr_w);
    return lr;
}

std::unique_ptr<Approximator> PqcApproximator::clone() const {
    return std::make_unique<PqcApproximator>(*this);
}

MlpApproximator::MlpApproximator(int state_dim, int hidden, int n_actions)
    : state_dim_(state_dim), hidden_(hidden), n_actions_(n_actions) {
    if (state_dim < 1 || n_actions < 1) {
        throw ConfigError("MlpApproximator: state_dim and n_actions must "
                          "be >= 1");
    }
    if (hidden < 1) {
        throw ConfigError("MlpApproximator: hidden size must be >= 1");
    }
    params_.assign(count_parameters(state_dim, hidden, n_actions), 0.0);
}

int MlpApproximator::count_parameters(int state_dim, int hidden,
                                      int n_actions) {
    return hidden * state_dim + hidden + n_actions * hidden + n_actions;
}

MlpApproximator MlpApproximator::random_init(int state_dim, int hidden,
                                             int n_actions, Rng& rng) {
    MlpApproximator mlp(state_dim, hidden, n_actions);
    const double bound1 = 1.0 / std::sqrt(static_cast<double>(state_dim));
    const double bound2 = 1.0 / std::sqrt(static_cast<double>(hidden));
    const int w1_end = hidden * state_dim + hidden;
    for (int i = 0; i < w1_end; ++i) {
        mlp.params_[i] = rng.uniform(-bound1, bound1);
    }
    for (std::size_t i = w1_end; i < mlp.params_.size(); ++i) {
        mlp.params_[i] = rng.uniform(-bound2, bound2);
    }
    return mlp;
}

std::vector<double>
MlpApproximator::q_values(std::span<const double> state) const {
    if (static_cast<int>(state.size()) != state_dim_) {
        throw UsageError("MlpApproximator: state length mismatch");
    }
    const double* w1 = params_.data();
    const double* b1 = w1 + hidden_ * state_dim_;
    const double* w2 = b1 + hidden_;
    const double* b2 = w2 + n_actions_ * hidden_;

    std::vector<double> h(hidden_);
    for (int i = 0; i < hidden_; ++i) {
        double z = b1[i];
        for (int j = 0; j < state_dim_; ++j) {
            z += w1[i * state_dim_ + j] * state[j];
        }
        h[i] = std::tanh(z);
    }
    std::vector<double> q(n_actions_);
    for (int a = 0; a < n_actions_; ++a) {
        double acc = b2[a];
        for (int i = 0; i < hidden_; ++i) {
            acc += w2[a * hidden_ + i] * h[i];
        }
        q[a] = acc;
    }
    return q;
}

std::vector<double>
MlpApproximator::loss_gradient(std::span<const double> state,
                               std::span<const double> upstream) const {
    if (static_cast<int>(state.size()) != state_dim_) {
        throw UsageError("MlpApproximator: state length mismatch");
    }
    if (static_cast<int>(upstream.size()) != n_actions_) {
        throw UsageError("MlpApproximator: upstream length mismatch");
    }
    const double* w1 = params_.data();
    const double* b1 = w1 + hidden_ * state_dim_;
    const double* w2 = b1 + hidden_;

    std::vector<double> h(hidden_);
    for (int i = 0; i < hidden_; ++i) {
        double z = b1[i];
        for (int j = 0; j < state_dim_; ++j) {
            z += w1[i * state_dim_ + j] * state[j];
        }
        h[i] = std::tanh(z);
    }

    std::vector<double> grad(params_.size(), 0.0);
    double* g_w1 = grad.data();
    double* g_b1 = g_w1 + hidden_ * state_dim_;
    double* g_w2 = g_b1 + hidden_;
    double* g_b2 = g_w2 + n_actions_ * hidden_;

    std::vector<double> dh(hidden_, 0.0);
    for (int a = 0; a < n_actions_; ++a) {
        const double u = upstream[a];
        if (u == 0.0) {
            continue;
        }
        g_b2[a] = u;
        for (int i = 0; i < hidden_; ++i) {
            g_w2[a * hidden_ + i] = u * h[i];
            dh[i] += u * w2[a * hidden_ + i];
        }
    }
    for (int i = 0; i < hidden_; ++i) {
        const double dz = dh[i] * (1.0 - h[i] * h[i]);
        g_b1[i] = dz;
        for (int j = 0; j < state_dim_; ++j) {
            g_w1[i * state_dim_ + j] = dz * state[j];
        }
    }
    return grad;
}

void MlpApproximator::set_flat_parameters(std::span<const double> flat) {
    if (flat.size() != params_.size()) {
        throw UsageError("MlpApproximator: parameter length mismatch");
    }
    params_.assign(flat.begin(), flat.end());
}

std::vector<double>
MlpApproximator::learning_rates(const AgentConfig& cfg) const {
    return std::vector<double>(params_.size(), cfg.lr_mlp);
}

std::unique_ptr<Approximator> MlpApproximator::clone() const {
    return std::make_unique<MlpApproximator>(*this);
}

Optimizer::Optimizer(OptimizerKind kind, std::vector<double> per_parameter_lr)
    : kind_(kind), lr_(std::move(per_parameter_lr)),
      m_(lr_.size(), 0.0), v_(lr_.size(), 0.0) {}

void Optimizer::step(std::span<double> params,
                     std::span<const double> grads) {
    if (params.size() != lr_.size() || grads.size() != lr_.size()) {
        throw UsageError("Optimizer: parameter/gradient length mismatch");
    }
    if (kind_ == OptimizerKind::sgd) {
        for (std::size_t i = 0; i < params.size(); ++i) {
            params[i] -= lr_[i] * grads[i];
        }
        return;
    }
    constexpr double kBeta1 = 0.9;
    constexpr double kBeta2 = 0.999;
    constexpr double kEps = 1e-8;
    ++t_;
    const double bias1 = 1.0 - std::pow(kBeta1, static_cast<double>(t_));
    const double bias2 = 1.0 - std::pow(kBeta2, static_cast<double>(t_));
    for (std::size_t i = 0; i < params.size(); ++i) {
        m_[i] = kBeta1 * m_[i] + (1.0 - kBeta1) * grads[i];
        v_[i] = kBeta2 * v_[i] + (1.0 - kBeta2) * grads[i] * grads[i];
        const double m_hat = m_[i] / bias1;
        const double v_hat = v_[i] / bias2;
        params[i] -= lr_[i] * m_hat / (std::sqrt(v_hat) + kEps);
    }
}

void Optimizer::reset() {
    std::fill(m_.begin(), m_.end(), 0.0);
    std::fill(v_.begin(), v_.end(), 0.0);
    t_ = 0;
}

void Optimizer::restore(std::vector<double> m, std::vector<double> v,
                        long t) {
    if (m.size() != lr_.size() || v.size() != lr_.size() || t < 0) {
        throw UsageError("Optimizer: invalid state to restore");
    }
    m_ = std::move(m);
    v_ = std::move(v);
    t_ = t;
}

int select_action(std::span<const double> q, double epsilon, Rng& rng) {
    if (q.empty()) {
        throw UsageError("select_action: q must be nonempty");
    }
    if (epsilon < 0.0 || epsilon > 1.0) {
        throw UsageError("select_action: epsilon must be in [0, 1]");
    }
    if (rng.uniform() < epsilon) {
        return rng.uniform_int(static_cast<int>(q.size()));
    }
    int best = 0;
    for (int a = 1; a < static_cast<int>(q.size()); ++a) {
        if (q[a] > q[best]) {
            best = a;
        }
    }
    return best;
}

std::vector<double> bellman_targets(const Batch& batch,
                                    const Approximator& target_net,
                                    double gamma) {
    if (batch.empty()) {
        throw UsageError("bellman_targets: batch must be nonempty");
    }
    std::vector<double> targets;
    targets.reserve(batch.size());
    for (const Transition& t : batch) {
        if (t.done) {
            targets.push_back(t.r);
            continue;
        }
        const std::vector<double> q = target_net.q_values(t.s_next);
        targets.push_back(t.r + gamma * *std::max_element(q.begin(), q.end()));
    }
    return targets;
}

double train_step(Approximator& approx, Optimizer& opt, const Batch& batch,
                  std::span<const double> targets) {
    if (batch.empty() || batch.size() != targets.size()) {
        throw UsageError("train_step: batch and targets must be nonempty "
                         "and equal length");
    }
    const double inv_batch = 1.0 / static_cast<double>(batch.size());
    std::vector<double> grad(approx.parameter_count(), 0.0);
    std::vector<double> upstream(approx.n_actions(), 0.0);
    double loss = 0.0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const Transition& t = batch[i];
        if (t.a < 0 || t.a >= approx.n_actions()) {
            throw UsageError("train_step: action index out of range");
        }
        const std::vector<double> q = approx.q_values(t.s);
        const double error = q[t.a] - targets[i];
        loss += error * error * inv_batch;

        upstream[t.a] = 2.0 * error * inv_batch;
        const std::vector<double> g = approx.loss_gradient(t.s, upstream);
        upstream[t.a] = 0.0;
        for (std::size_t j = 0; j < grad.size(); ++j) {
            grad[j] += g[j];
        }
    }
    if (!std::isfinite(loss)) {
        throw DivergenceError("train_step: loss is not finite");
    }
    std::vector<double> params = approx.flat_parameters();
    opt.step(params, grad);
    approx.set_flat_parameters(params);
    return loss;
}

void sync_target(const Approximator& online, Approximator& target) {
    if (online.parameter_count() != target.parameter_count()) {
        throw UsageError("sync_target: parameter shapes do not match");
    }
    target.set_flat_parameters(online.flat_parameters());
}

Agent::Agent(std::unique_ptr<Approximator> online, AgentConfig config,
             std::uint64_t seed)
    : online_(std::move(online)), config_(config),
      optimizer_(config.optimizer, std::vector<double>{}),
      buffer_(static_cast<std::size_t>(config.buffer_capacity)), rng_(seed) {
    config_.validate();
    if (!online_) {
        throw UsageError("Agent: approximator must not be null");
    }
    target_ = online_->clone();
    optimizer_ = Optimizer(config_.optimizer,
                           online_->learning_rates(config_));
}

int Agent::act(std::span<const double> state) {
    const std::vector<double> q = online_->q_values(state);
    return select_action(q, config_.epsilon.at(step_count_), rng_);
}

void Agent::observe(Transition t) {
    buffer_.push(std::move(t));
    ++step_count_;
    if (buffer_.size() >= static_cast<std::size_t>(config_.train_start_size) &&
        step_count_ % config_.train_interval == 0) {
        const Batch batch =
            buffer_.sample(static_cast<std::size_t>(config_.batch_size), rng_);
        const std::vector<double> targets =
            bellman_targets(batch, *target_, config_.gamma);
        last_loss_ = train_step(*online_, optimizer_, batch, targets);
    }
    if (step_count_ % config_.target_sync_interval == 0) {
        sync_target(*online_, *target_);
    }
}

void Agent::set_all_parameters(std::span<const double> flat) {
    online_->set_flat_parameters(flat);
    target_->set_flat_parameters(flat);
}

} // namespace fqdrl::qdqn

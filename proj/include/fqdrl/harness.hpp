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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fqdrl/envs.hpp"
#include "fqdrl/federation.hpp"
#include "fqdrl/qdqn.hpp"

namespace fqdrl::harness {

enum class ApproximatorKind { pqc, mlp };
enum class EnvKind { cartpole, slicing };

struct PqcConfig {
    int n_qubits = 3;
    int n_layers = 5;
    /// Explicit per-action Z-product observables (lists of qubit indices);
    /// empty selects the default subset enumeration.
    std::vector<std::vector<int>> observables;
};

struct MlpConfig {
    int hidden = 128;
};

struct EnvironmentConfig {
    EnvKind type = EnvKind::cartpole;
    int cartpole_max_steps = envs::CartPole::kDefaultMaxSteps;
    envs::SliceConfig slicing;
    /// Per-agent arrival ranges [agent][slice] = {lo, hi}; empty applies
    /// the slicing config ranges to every agent. Models gNBs with
    /// different local traffic.
    std::vector<std::vector<std::array<double, 2>>> per_agent_lambda_ranges;
};

struct ExperimentConfig {
    std::string name;
    ApproximatorKind approximator = ApproximatorKind::pqc;
    EnvironmentConfig environment;
    federation::FederationConfig federation;
    int n_agents = 1;
    int episodes = 100;
    std::uint64_t master_seed = 1;
    bool parallel = false;
    qdqn::AgentConfig agent;
    PqcConfig pqc;
    MlpConfig mlp;
    std::string output_dir = "runs/out";
    bool checkpoints = false;
    bool trace = false;

    void validate() const;
    int state_dim() const;
    int n_actions() const;
    /// Slice config with agent-specific arrival ranges applied.
    envs::SliceConfig slice_config_for_agent(int agent_id) const;
};

/// Parses and fully validates an experiment config. Unknown keys anywhere
/// in the document are rejected with the offending field path; omitted
/// optional fields take their documented defaults.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig config_from_json(const nlohmann::json& j);
/// Fully resolved config, suitable for re-running the experiment.
nlohmann::json config_to_json(const ExperimentConfig& config);

struct RunMetrics {
    /// rewards[episode][agent_id]
    std::vector<std::vector<double>> rewards;
    std::vector<double> global_mean;      // mean over agents per episode
    std::vector<double> moving_average;   // window 20 over global_mean
    std::vector<federation::FederationRound> rounds;
    std::vector<double> wall_clock_seconds; // per episode, informational
    int pqc_parameter_count = 0;
    int mlp_parameter_count = 0;
};

/// Runs the configured multi-agent experiment: derived per-agent seed
/// streams, per-episode training, federation rounds on schedule, metrics
/// written continuously to output_dir (rewards.csv, global.csv,
/// rounds.csv, timing.csv, manifest.json).
RunMetrics run_experiment(const ExperimentConfig& config);

/// splitmix-derived seed streams; documented so runs are reproducible
/// outside this code. Tags separate the per-agent policy, environment and
/// initialization streams.
inline constexpr std::uint64_t kAgentSeedTag = 0x61;
inline constexpr std::uint64_t kEnvSeedTag = 0x65;
inline constexpr std::uint64_t kInitSeedTag = 0x69;

struct RunComparison {
    std::string path;
    double final_window_mean = 0.0;
    double auc = 0.0;
    std::optional<long> episodes_to_threshold; // nullopt = not reached
};

/// Side-by-side summary of >= 2 global.csv files with equal episode
/// counts: final-window (20) mean reward, area under the reward curve,
/// and first episode whose moving average reaches `threshold`.
std::vector<RunComparison>
compare_runs(const std::vector<std::string>& global_csv_paths,
             double threshold);
std::string comparison_table(const std::vector<RunComparison>& rows);
void write_comparison_csv(const std::vector<RunComparison>& rows,
                          const std::string& out_path);

std::string version_string();

} // namespace fqdrl::harness

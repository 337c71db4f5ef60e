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

#include "fqdrl/pqc.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

namespace fqdrl::pqc {

namespace {

std::vector<double> encode_features(std::span<const double> state) {
    std::vector<double> x(state.size());
    for (std::size_t i = 0; i < state.size(); ++i) {
        x[i] = std::atan(state[i]);
    }
    return x;
}

// Gate list for pre-squashed features; shared by build_circuit, q_values
// and gradients so all three evaluate the identical circuit.
std::vector<qsim::Gate> circuit_from_features(const Architecture& arch,
                                              const Parameters& params,
                                              std::span<const double> x) {
    std::vector<qsim::Gate> gates;
    gates.reserve(static_cast<std::size_t>(arch.n_layers) *
                  arch.gates_per_layer());
    for (int l = 0; l < arch.n_layers; ++l) {
        for (int q = 0; q < arch.n_qubits; ++q) {
            const int base = (l * arch.n_qubits + q) * 2;
            gates.push_back(qsim::Gate::ry(q, params.theta[base]));
            gates.push_back(qsim::Gate::rz(q, params.theta[base + 1]));
        }
        if (arch.n_qubits == 2) {
            gates.push_back(qsim::Gate::cz(0, 1));
        } else if (arch.n_qubits > 2) {
            for (int q = 0; q < arch.n_qubits; ++q) {
                gates.push_back(
                    qsim::Gate::cz(q, (q + 1) % arch.n_qubits));
            }
        }
        for (int i = 0; i < arch.state_dim; ++i) {
            const double scaling = params.lambda[l * arch.state_dim + i];
            gates.push_back(
                qsim::Gate::rx(arch.encoding_map[i], scaling * x[i]));
        }
    }
    return gates;
}

void check_shapes(const Architecture& arch, const Parameters& params,
                  std::span<const double> state) {
    arch.validate();
    if (static_cast<int>(state.size()) != arch.state_dim) {
        throw ConfigError("pqc: state length " +
                          std::to_string(state.size()) +
                          " does not match state_dim " +
                          std::to_string(arch.state_dim));
    }
    if (static_cast<int>(params.theta.size()) != arch.theta_count() ||
        static_cast<int>(params.lambda.size()) != arch.lambda_count() ||
        static_cast<int>(params.w.size()) != arch.n_actions()) {
        throw ConfigError("pqc: parameter shapes do not match architecture");
    }
}

} // namespace

int Architecture::entangler_count() const {
    if (n_qubits >= 3) {
        return n_qubits;
    }
    return n_qubits == 2 ? 1 : 0;
}

int Architecture::gates_per_layer() const {
    return 2 * n_qubits + entangler_count() + state_dim;
}

void Architecture::validate() const {
    if (n_qubits < 1 || n_qubits > qsim::StateVector::kMaxQubits) {
        throw ConfigError("Architecture: n_qubits out of range: " +
                          std::to_string(n_qubits));
    }
    if (n_layers < 1) {
        throw ConfigError("Architecture: n_layers must be >= 1");
    }
    if (state_dim < 1) {
        throw ConfigError("Architecture: state_dim must be >= 1");
    }
    if (action_observables.empty()) {
        throw ConfigError("Architecture: needs one observable per action");
    }
    for (const qsim::Observable& obs : action_observables) {
        if (obs.max_qubit() >= n_qubits) {
            throw ConfigError(
                "Architecture: observable qubit out of range: " +
                std::to_string(obs.max_qubit()));
        }
    }
    if (static_cast<int>(encoding_map.size()) != state_dim) {
        throw ConfigError("Architecture: encoding_map length must equal "
                          "state_dim");
    }
    for (int q : encoding_map) {
        if (q < 0 || q >= n_qubits) {
            throw ConfigError("Architecture: encoding_map qubit out of "
                              "range: " +
                              std::to_string(q));
        }
    }
}

Architecture Architecture::make_default(int state_dim, int n_actions,
                                        int n_qubits, int n_layers) {
    Architecture arch;
    arch.n_qubits = n_qubits;
    arch.n_layers = n_layers;
    arch.state_dim = state_dim;
    arch.action_observables = default_observables(n_qubits, n_actions);
    arch.encoding_map = default_encoding_map(state_dim, n_qubits);
    arch.validate();
    return arch;
}

std::vector<qsim::Observable>
Architecture::default_observables(int n_qubits, int n_actions) {
    if (n_qubits < 1 || n_qubits > qsim::StateVector::kMaxQubits) {
        throw ConfigError("default_observables: n_qubits out of range");
    }
    const int max_actions = (1 << n_qubits) - 1;
    if (n_actions < 1 || n_actions > max_actions) {
        throw ConfigError("default_observables: need 1 <= n_actions <= " +
                          std::to_string(max_actions) + ", got " +
                          std::to_string(n_actions));
    }
    std::vector<qsim::Observable> obs;
    obs.reserve(n_actions);
    for (int size = 1; size <= n_qubits; ++size) {
        for (std::uint64_t mask = 1; mask < (1ull << n_qubits); ++mask) {
            if (std::popcount(mask) != size) {
                continue;
            }
            std::vector<int> qubits;
            for (int q = 0; q < n_qubits; ++q) {
                if (mask & (1ull << q)) {
                    qubits.push_back(q);
                }
            }
            obs.push_back(qsim::Observable(qubits));
            if (static_cast<int>(obs.size()) == n_actions) {
                return obs;
            }
        }
    }
    return obs;
}

std::vector<int> Architecture::default_encoding_map(int state_dim,
                                                    int n_qubits) {
    std::vector<int> map(state_dim);
    for (int i = 0; i < state_dim; ++i) {
        map[i] = i % n_qubits;
    }
    return map;
}

Parameters Parameters::zeros(const Architecture& arch) {
    Parameters p;
    p.theta.assign(arch.theta_count(), 0.0);
    p.lambda.assign(arch.lambda_count(), 0.0);
    p.w.assign(arch.n_actions(), 0.0);
    return p;
}

Parameters Parameters::random_init(const Architecture& arch, Rng& rng) {
    Parameters p;
    p.theta.resize(arch.theta_count());
    for (double& t : p.theta) {
        t = rng.uniform(-std::numbers::pi, std::numbers::pi);
    }
    p.lambda.assign(arch.lambda_count(), 1.0);
    p.w.assign(arch.n_actions(), 1.0);
    return p;
}

std::vector<qsim::Gate> build_circuit(const Architecture& arch,
                                      const Parameters& params,
                                      std::span<const double> state) {
    check_shapes(arch, params, state);
    return circuit_from_features(arch, params, encode_features(state));
}

QValueOutput q_values(const Architecture& arch, const Parameters& params,
                      std::span<const double> state) {
    check_shapes(arch, params, state);
    const std::vector<double> x = encode_features(state);
    const std::vector<qsim::Gate> gates =
        circuit_from_features(arch, params, x);

    qsim::StateVector psi(arch.n_qubits);
    psi.apply(gates);

    QValueOutput out;
    out.expectations.resize(arch.n_actions());
    out.q.resize(arch.n_actions());
    for (int a = 0; a < arch.n_actions(); ++a) {
        out.expectations[a] = psi.expectation(arch.action_observables[a]);
        out.q[a] = params.w[a] * out.expectations[a];
    }
    return out;
}

Parameters gradients(const Architecture& arch, const Parameters& params,
                     std::span<const double> state,
                     std::span<const double> upstream) {
    check_shapes(arch, params, state);
    if (static_cast<int>(upstream.size()) != arch.n_actions()) {
        throw ConfigError("gradients: upstream length must equal n_actions");
    }

    const std::vector<double> x = encode_features(state);
    const std::vector<qsim::Gate> gates =
        circuit_from_features(arch, params, x);
    const int n_gates = static_cast<int>(gates.size());
    const int n_actions = arch.n_actions();

    // prefixes[g] = state after the first g gates; suffix re-simulation
    // starts from there, so each shifted evaluation touches only the part
    // of the circuit that changed.
    std::vector<qsim::StateVector> prefixes;
    prefixes.reserve(n_gates + 1);
    prefixes.emplace_back(arch.n_qubits);
    for (int g = 0; g < n_gates; ++g) {
        prefixes.push_back(prefixes.back());
        prefixes.back().apply(gates[g]);
    }

    Parameters grad = Parameters::zeros(arch);
    for (int a = 0; a < n_actions; ++a) {
        grad.w[a] = upstream[a] *
                    prefixes.back().expectation(arch.action_observables[a]);
    }

    std::vector<double> coeff(n_actions); // dLoss/dE_a
    bool any_coeff = false;
    for (int a = 0; a < n_actions; ++a) {
        coeff[a] = upstream[a] * params.w[a];
        any_coeff = any_coeff || coeff[a] != 0.0;
    }
    if (!any_coeff) {
        return grad;
    }

    constexpr double kShift = std::numbers::pi / 2.0;
    qsim::StateVector scratch(arch.n_qubits);

    // dLoss/dangle of the rotation at gate index g.
    auto shifted_loss_derivative = [&](int g) {
        double value = 0.0;
        for (const double sign : {+1.0, -1.0}) {
            scratch = prefixes[g];
            qsim::Gate shifted = gates[g];
            shifted.angle += sign * kShift;
            scratch.apply(shifted);
            for (int h = g + 1; h < n_gates; ++h) {
                scratch.apply(gates[h]);
            }
            for (int a = 0; a < n_actions; ++a) {
                if (coeff[a] != 0.0) {
                    value += sign * coeff[a] *
                             scratch.expectation(arch.action_observables[a]);
                }
            }
        }
        return value / 2.0;
    };

    const int per_layer = arch.gates_per_layer();
    for (int l = 0; l < arch.n_layers; ++l) {
        const int layer_base = l * per_layer;
        for (int q = 0; q < arch.n_qubits; ++q) {
            const int t = (l * arch.n_qubits + q) * 2;
            grad.theta[t] = shifted_loss_derivative(layer_base + q * 2);
            grad.theta[t + 1] =
                shifted_loss_derivative(layer_base + q * 2 + 1);
        }
        const int encoding_base =
            layer_base + 2 * arch.n_qubits + arch.entangler_count();
        for (int i = 0; i < arch.state_dim; ++i) {
            grad.lambda[l * arch.state_dim + i] =
                x[i] * shifted_loss_derivative(encoding_base + i);
        }
    }
    return grad;
}

std::vector<double> flatten(const Parameters& params) {
    std::vector<double> flat;
    flat.reserve(params.theta.size() + params.lambda.size() +
                 params.w.size());
    flat.insert(flat.end(), params.theta.begin(), params.theta.end());
    flat.insert(flat.end(), params.lambda.begin(), params.lambda.end());
    flat.insert(flat.end(), params.w.begin(), params.w.end());
    return flat;
}

Parameters unflatten(const Architecture& arch, std::span<const double> flat) {
    if (static_cast<int>(flat.size()) != arch.parameter_count()) {
        throw UsageError("unflatten: expected " +
                         std::to_string(arch.parameter_count()) +
                         " values, got " + std::to_string(flat.size()));
    }
    Parameters p;
    auto it = flat.begin();
    p.theta.assign(it, it + arch.theta_count());
    it += arch.theta_count();
    p.lambda.assign(it, it + arch.lambda_count());
    it += arch.lambda_count();
    p.w.assign(it, flat.end());
    return p;
}

} // namespace fqdrl::pqc

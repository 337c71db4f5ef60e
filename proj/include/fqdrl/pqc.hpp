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

#include "fqdrl/qsim.hpp"
#include "fqdrl/rng.hpp"

namespace fqdrl::pqc {

/// Layout of the layered variational circuit used as the Q-function
/// approximator. Each layer applies, in order:
///   1. variational block: RY(theta[l][q][0]) then RZ(theta[l][q][1]) per
///      qubit, ascending qubit index;
///   2. entangling block: CZ on the ring (0,1),(1,2),...,(n-1,0); a single
///      CZ for two qubits, skipped for one;
///   3. encoding block (data re-uploading): RX(lambda[l][i] * x_i) per
///      state feature, ascending feature index, on qubit encoding_map[i],
///      where x_i = atan(state[i]) keeps angles bounded for unbounded
///      observations.
struct Architecture {
    int n_qubits = 3;
    int n_layers = 5;
    int state_dim = 0;
    std::vector<qsim::Observable> action_observables;
    std::vector<int> encoding_map; // feature index -> qubit

    int n_actions() const {
        return static_cast<int>(action_observables.size());
    }
    int theta_count() const { return n_layers * n_qubits * 2; }
    int lambda_count() const { return n_layers * state_dim; }
    int parameter_count() const {
        return theta_count() + lambda_count() + n_actions();
    }
    /// Ring entanglers per layer: n for n >= 3, one CZ for n == 2, none
    /// for a single qubit.
    int entangler_count() const;
    int gates_per_layer() const;

    void validate() const;

    /// 3-qubit / 5-layer agent with default observables and the
    /// (i mod n_qubits) encoding map.
    static Architecture make_default(int state_dim, int n_actions,
                                     int n_qubits = 3, int n_layers = 5);

    /// Observable for action a is the a-th nonempty Z-product over the
    /// qubits, enumerating subsets by (size, mask value). Requires
    /// n_actions <= 2^n_qubits - 1.
    static std::vector<qsim::Observable> default_observables(int n_qubits,
                                                             int n_actions);
    static std::vector<int> default_encoding_map(int state_dim, int n_qubits);
};

/// The full trainable set exchanged by federation: variational angles,
/// input scalings, observable output weights. Flat layer-major layouts:
/// theta[(l*n_qubits + q)*2 + k], lambda[l*state_dim + i].
struct Parameters {
    std::vector<double> theta;
    std::vector<double> lambda;
    std::vector<double> w;

    static Parameters zeros(const Architecture& arch);
    /// theta ~ uniform(-pi, pi), lambda = 1, w = 1.
    static Parameters random_init(const Architecture& arch, Rng& rng);
};

struct QValueOutput {
    std::vector<double> q;            // q[a] = w[a] * expectations[a]
    std::vector<double> expectations; // each in [-1, 1]
};

/// Ordered gate list for one evaluation. Dimension mismatch between
/// state/params and the architecture is a ConfigError.
std::vector<qsim::Gate> build_circuit(const Architecture& arch,
                                      const Parameters& params,
                                      std::span<const double> state);

/// Runs the circuit on |0...0> and reads out all action observables.
QValueOutput q_values(const Architecture& arch, const Parameters& params,
                      std::span<const double> state);

/// Exact gradients of the scalar loss whose per-action derivative is
/// `upstream` (dLoss/dq). Rotation-angle derivatives use the parameter
/// shift rule: dE/dangle = (E(angle + pi/2) - E(angle - pi/2)) / 2; the
/// lambda entries chain through the encoded feature value, w through the
/// base expectations.
Parameters gradients(const Architecture& arch, const Parameters& params,
                     std::span<const double> state,
                     std::span<const double> upstream);

/// Concatenation theta, lambda, w. unflatten validates the total length
/// against the architecture (UsageError otherwise).
std::vector<double> flatten(const Parameters& params);
Parameters unflatten(const Architecture& arch, std::span<const double> flat);

} // namespace fqdrl::pqc

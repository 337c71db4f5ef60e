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

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "fqdrl/errors.hpp"

namespace fqdrl::qsim {

using Complex = std::complex<double>;

enum class GateKind { RX, RY, RZ, CZ };

/// One circuit element. Rotations follow the exp(-i*angle/2 * P) convention
/// for P in {X, Y, Z}; CZ carries no angle and is self-inverse.
struct Gate {
    GateKind kind;
    int target = 0;
    int control = -1; // CZ only
    double angle = 0.0;

    static Gate rx(int target, double angle) {
        return Gate{GateKind::RX, target, -1, angle};
    }
    static Gate ry(int target, double angle) {
        return Gate{GateKind::RY, target, -1, angle};
    }
    static Gate rz(int target, double angle) {
        return Gate{GateKind::RZ, target, -1, angle};
    }
    static Gate cz(int control, int target) {
        return Gate{GateKind::CZ, target, control, 0.0};
    }

    bool is_rotation() const { return kind != GateKind::CZ; }
    /// Same gate with the rotation angle negated; CZ is returned unchanged.
    Gate inverse() const;
};

/// Tensor product of Pauli-Z on a set of distinct qubits, identity elsewhere.
/// Stored as a bit mask: bit q set means Z acts on qubit q.
class Observable {
  public:
    explicit Observable(const std::vector<int>& qubits);
    explicit Observable(std::initializer_list<int> qubits)
        : Observable(std::vector<int>(qubits)) {}

    std::uint64_t mask() const { return mask_; }
    int max_qubit() const { return max_qubit_; }
    std::vector<int> qubits() const;

    bool operator==(const Observable& other) const {
        return mask_ == other.mask_;
    }

  private:
    std::uint64_t mask_ = 0;
    int max_qubit_ = -1;
};

/// Dense statevector of an n-qubit register, qubit 0 is the least
/// significant bit of the basis index. Value type: copy freely, never
/// shared across threads.
class StateVector {
  public:
    static constexpr int kMaxQubits = 12;

    /// |0...0> on n_qubits wires. n_qubits outside [1, 12] is rejected.
    explicit StateVector(int n_qubits);

    /// Arbitrary initial state; the amplitude vector must have length
    /// 2^n_qubits and unit norm (1e-9 slack for hand-typed constants).
    StateVector(int n_qubits, std::vector<Complex> amplitudes);

    int n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return amplitudes_.size(); }
    std::span<const Complex> amplitudes() const { return amplitudes_; }
    Complex amplitude(std::size_t basis_index) const;

    double norm() const;

    /// Multiplies the state by the gate's unitary in place.
    void apply(const Gate& gate);
    void apply(std::span<const Gate> circuit);

    /// <psi| O |psi> for a Pauli-Z product: sum over basis states of
    /// (-1)^popcount(b & mask) * |amplitude_b|^2, clamped into [-1, 1].
    double expectation(const Observable& obs) const;

  private:
    void apply_single_qubit(int target, const Complex u[2][2]);
    void apply_cz(int a, int b);
    void check_qubit(int q, const char* what) const;

    int n_qubits_;
    std::vector<Complex> amplitudes_;
};

/// |0...0> on n_qubits wires; alias for the validating constructor.
StateVector zero_state(int n_qubits);

} // namespace fqdrl::qsim

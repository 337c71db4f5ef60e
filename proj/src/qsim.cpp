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

#include "fqdrl/qsim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace fqdrl::qsim {

Gate Gate::inverse() const {
    Gate inv = *this;
    if (is_rotation()) {
        inv.angle = -angle;
    }
    return inv;
}

Observable::Observable(const std::vector<int>& qubits) {
    if (qubits.empty()) {
        throw UsageError("Observable: needs at least one qubit index");
    }
    for (int q : qubits) {
        if (q < 0 || q >= 64) {
            throw UsageError("Observable: qubit index out of range: " +
                             std::to_string(q));
        }
        const std::uint64_t bit = std::uint64_t{1} << q;
        if (mask_ & bit) {
            throw UsageError("Observable: duplicate qubit index: " +
                             std::to_string(q));
        }
        mask_ |= bit;
        max_qubit_ = std::max(max_qubit_, q);
    }
}

std::vector<int> Observable::qubits() const {
    std::vector<int> out;
    for (int q = 0; q <= max_qubit_; ++q) {
        if (mask_ & (std::uint64_t{1} << q)) {
            out.push_back(q);
        }
    }
    return out;
}

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw ConfigError("StateVector: n_qubits must be in [1, " +
                          std::to_string(kMaxQubits) + "], got " +
                          std::to_string(n_qubits));
    }
    amplitudes_.assign(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
    amplitudes_[0] = Complex{1.0, 0.0};
}

StateVector::StateVector(int n_qubits, std::vector<Complex> amplitudes)
    : StateVector(n_qubits) {
    if (amplitudes.size() != dim()) {
        throw UsageError("StateVector: amplitude vector length " +
                         std::to_string(amplitudes.size()) +
                         " does not match 2^" + std::to_string(n_qubits));
    }
    amplitudes_ = std::move(amplitudes);
    if (std::abs(norm() - 1.0) > 1e-9) {
        throw UsageError("StateVector: amplitudes are not normalized");
    }
}

Complex StateVector::amplitude(std::size_t basis_index) const {
    if (basis_index >= dim()) {
        throw UsageError("StateVector: basis index out of range");
    }
    return amplitudes_[basis_index];
}

double StateVector::norm() const {
    double sum = 0.0;
    for (const Complex& a : amplitudes_) {
        sum += std::norm(a);
    }
    return std::sqrt(sum);
}

void StateVector::check_qubit(int q, const char* what) const {
    if (q < 0 || q >= n_qubits_) {
        throw UsageError(std::string(what) + " index out of range: " +
                         std::to_string(q) + " on " +
                         std::to_string(n_qubits_) + " qubits");
    }
}

void StateVector::apply(const Gate& gate) {
    const double half = gate.angle / 2.0;
    switch (gate.kind) {
    case GateKind::RX: {
        const Complex c{std::cos(half), 0.0};
        const Complex mis{0.0, -std::sin(half)};
        const Complex u[2][2] = {{c, mis}, {mis, c}};
        check_qubit(gate.target, "RX target");
        apply_single_qubit(gate.target, u);
        break;
    }
    case GateKind::RY: {
        const Complex c{std::cos(half), 0.0};
        const Complex s{std::sin(half), 0.0};
        const Complex u[2][2] = {{c, -s}, {s, c}};
        check_qubit(gate.target, "RY target");
        apply_single_qubit(gate.target, u);
        break;
    }
    case GateKind::RZ: {
        const Complex u[2][2] = {
            {std::polar(1.0, -half), Complex{0.0, 0.0}},
            {Complex{0.0, 0.0}, std::polar(1.0, half)}};
        check_qubit(gate.target, "RZ target");
        apply_single_qubit(gate.target, u);
        break;
    }
    case GateKind::CZ:
        check_qubit(gate.control, "CZ control");
        check_qubit(gate.target, "CZ target");
        if (gate.control == gate.target) {
            throw UsageError("CZ: control and target must differ");
        }
        apply_cz(gate.control, gate.target);
        break;
    }
}

void StateVector::apply(std::span<const Gate> circuit) {
    for (const Gate& g : circuit) {
        apply(g);
    }
}

void StateVector::apply_single_qubit(int target, const Complex u[2][2]) {
    const std::size_t step = std::size_t{1} << target;
    const std::size_t block = step << 1;
    const std::size_t n = amplitudes_.size();
    for (std::size_t base = 0; base < n; base += block) {
        for (std::size_t offset = 0; offset < step; ++offset) {
            const std::size_t i0 = base + offset;
            const std::size_t i1 = i0 + step;
            const Complex a = amplitudes_[i0];
            const Complex b = amplitudes_[i1];
            amplitudes_[i0] = u[0][0] * a + u[0][1] * b;
            amplitudes_[i1] = u[1][0] * a + u[1][1] * b;
        }
    }
}

void StateVector::apply_cz(int a, int b) {
    const std::size_t mask =
        (std::size_t{1} << a) | (std::size_t{1} << b);
    const std::size_t n = amplitudes_.size();
    for (std::size_t i = 0; i < n; ++i) {
        if ((i & mask) == mask) {
            amplitudes_[i] = -amplitudes_[i];
        }
    }
}

double StateVector::expectation(const Observable& obs) const {
    if (obs.max_qubit() >= n_qubits_) {
        throw UsageError("expectation: observable acts on qubit " +
                         std::to_string(obs.max_qubit()) + " but state has " +
                         std::to_string(n_qubits_) + " qubits");
    }
    const std::uint64_t mask = obs.mask();
    double value = 0.0;
    const std::size_t n = amplitudes_.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double p = std::norm(amplitudes_[i]);
        value += (std::popcount(i & mask) & 1) ? -p : p;
    }
    return std::clamp(value, -1.0, 1.0);
}

StateVector zero_state(int n_qubits) { return StateVector(n_qubits); }

} // namespace fqdrl::qsim

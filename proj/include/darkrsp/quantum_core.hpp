// Copyright 2026 The darkrsp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Dense pure-state linear algebra over tensor products of qudits.
//
// Index convention: subsystem 0 is the most significant digit of the
// flattened amplitude index, so |q0 q1 ... q(n-1)> lives at
// q0*d1*d2*...*d(n-1) + q1*d2*...*d(n-1) + ... + q(n-1).

#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "darkrsp/rng.hpp"

namespace darkrsp {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

namespace tol {
inline constexpr double kExact = 1e-12;
inline constexpr double kInvariance = 1e-10;
inline constexpr double kZeroProbability = 1e-14;
}  // namespace tol

/// Per-subsystem dimensions plus the party holding each subsystem.
class SubsystemLayout {
   public:
    SubsystemLayout(std::vector<int> dims, std::vector<std::string> parties);

    /// n subsystems of dimension d, all held by `party`.
    static SubsystemLayout uniform(int d, std::size_t n, const std::string &party);

    std::size_t size() const {
        return dims_.size();
    }
    int dim(std::size_t slot) const {
        return dims_.at(slot);
    }
    const std::string &party(std::size_t slot) const {
        return parties_.at(slot);
    }
    const std::vector<int> &dims() const {
        return dims_;
    }
    const std::vector<std::string> &parties() const {
        return parties_;
    }
    std::size_t total_dim() const {
        return total_dim_;
    }

    /// Slots held by `party`, ascending.
    std::vector<std::size_t> slots_of(std::string_view party) const;
    /// Distinct party labels in order of first appearance.
    std::vector<std::string> party_names() const;

    /// Layout restricted to `slots`, in the order given.
    SubsystemLayout select(std::span<const std::size_t> slots) const;
    SubsystemLayout concat(const SubsystemLayout &other) const;
    SubsystemLayout with_parties(std::vector<std::string> parties) const;

    bool operator==(const SubsystemLayout &) const = default;

   private:
    std::vector<int> dims_;
    std::vector<std::string> parties_;
    std::size_t total_dim_ = 1;
};

/// Normalized state vector. Construction rejects anything whose norm is off
/// by more than tol::kExact.
class PureState {
   public:
    PureState(SubsystemLayout layout, Vector amplitudes);

    /// Rescales to unit norm; throws if the vector is (numerically) zero.
    static PureState normalized(SubsystemLayout layout, Vector amplitudes);
    static PureState basis(SubsystemLayout layout, std::span<const int> digits);

    const SubsystemLayout &layout() const {
        return layout_;
    }
    const Vector &amplitudes() const {
        return amplitudes_;
    }
    std::size_t size() const {
        return layout_.size();
    }
    std::size_t total_dim() const {
        return layout_.total_dim();
    }

    /// Reorders subsystems: slot i of the result is slot order[i] of this.
    PureState permuted(std::span<const std::size_t> order) const;
    PureState with_parties(std::vector<std::string> parties) const;

   private:
    SubsystemLayout layout_;
    Vector amplitudes_;
};

class DensityMatrix {
   public:
    /// Validates Hermiticity, unit trace and positivity within 1e-10.
    explicit DensityMatrix(Matrix entries);

    std::size_t dim() const {
        return static_cast<std::size_t>(entries_.rows());
    }
    const Matrix &entries() const {
        return entries_;
    }

   private:
    Matrix entries_;
};

class UnitaryOp {
   public:
    /// Validates U^dagger U = I entrywise within 1e-10.
    explicit UnitaryOp(Matrix entries);

    static UnitaryOp identity(int dim);
    static UnitaryOp diagonal(std::span<const Complex> phases);

    std::size_t dim() const {
        return static_cast<std::size_t>(entries_.rows());
    }
    const Matrix &entries() const {
        return entries_;
    }
    UnitaryOp adjoint() const;
    UnitaryOp operator*(const UnitaryOp &rhs) const;

    bool operator==(const UnitaryOp &other) const {
        return entries_ == other.entries_;
    }

   private:
    Matrix entries_;
};

struct MeasurementBranch {
    std::vector<int> outcome;
    double probability = 0.0;
    // Empty when probability < tol::kZeroProbability.
    std::optional<PureState> post_state;
};

PureState tensor(std::span<const PureState> states);
PureState tensor(std::initializer_list<PureState> states);

PureState apply_unitary(const PureState &state, const UnitaryOp &u, std::span<const std::size_t> targets);
PureState apply_unitary(const PureState &state, const UnitaryOp &u, std::initializer_list<std::size_t> targets);

/// Computational-basis measurement of `measured`. One branch per outcome,
/// outcomes enumerated big-endian over `measured` in the order given; the
/// post-measurement state lives on the remaining slots in ascending order.
std::vector<MeasurementBranch> measure_projective(const PureState &state, std::span<const std::size_t> measured);

DensityMatrix partial_trace(const PureState &state, std::span<const std::size_t> keep);

/// Entropy in bits, with 0 log 0 := 0.
double von_neumann_entropy(const DensityMatrix &rho);

/// |<a|b>|^2.
double fidelity(const PureState &a, const PureState &b);
/// <psi|rho|psi>.
double fidelity(const DensityMatrix &rho, const PureState &psi);

/// Singular values of the amplitude tensor reshaped to (part_a) x (part_b),
/// sorted descending.
std::vector<double> schmidt_coefficients(const PureState &state, std::span<const std::size_t> part_a,
                                         std::span<const std::size_t> part_b);

/// True iff the second-largest Schmidt coefficient across the cut is < 1e-10.
bool is_product_across(const PureState &state, std::span<const std::size_t> part_a,
                       std::span<const std::size_t> part_b);

/// Euclidean distance between amplitude vectors (layouts must agree in dims).
double distance(const PureState &a, const PureState &b);

/// Haar-distributed element of U(d): QR of a complex Ginibre matrix with the
/// phases of diag(R) folded back into Q.
UnitaryOp haar_unitary(int d, Rng &rng);
/// Haar unitary rescaled by a d-th root of its determinant, so det = 1.
UnitaryOp haar_special_unitary(int d, Rng &rng);

/// Flat-index offsets of every configuration of `slots` (big-endian over the
/// list order), with all other slots at digit 0.
std::vector<std::size_t> slot_offsets(const SubsystemLayout &layout, std::span<const std::size_t> slots);

/// Digits of configuration `index` over the given dims, big-endian.
std::vector<int> unflatten(std::size_t index, std::span<const int> dims);

}  // namespace darkrsp

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

// Target-state families, their rotated bases, and the parameter-independent
// corrections that map a rotated basis element back onto the target.
//
// Every family canonizes one rotated basis {psi_0 = target, psi_1, ...}:
//   qubit families      {psi, psi_bar} with psi_bar = -sin(t/2)|0> + cos(t/2)e^{i phi}|1>
//   general families    hierarchical basis: psi_k = sin(g_k) e^{i a_(k-1)} |k-1>
//                         - cos(g_k) * (tail of psi_0 from |k> on, with the
//                         leading sin(g_1)...sin(g_k) stripped)
//   Fourier families    psi_k = d^{-1/2} sum_j w^{jk} e^{i a_j} |j>, w = e^{2 pi i/d}

#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "darkrsp/quantum_core.hpp"

namespace darkrsp {

enum class Family {
    QubitPolarReal,   // phi = 0, theta free
    QubitEquatorial,  // theta = pi/2, phi free
    QubitPolarImag,   // phi = pi/2, theta free
    QubitFixedPhase,  // phi = phi0, theta free
    QutritGeneral,    // all four parameters free
    QutritEquatorial, // equal magnitudes, delta and phi free
    QutritRestricted, // gamma1 = pi/4
    QuditFourier,     // equal magnitudes in dimension d, alpha_1..alpha_(d-1) free
    QuditGeneral,     // all 2(d-1) parameters free
    QuditRestricted4, // d = 4, gamma1 = pi/4
};

struct EnsembleSpec {
    Family family = Family::QubitPolarReal;
    int d = 2;
    double phi0 = 0.0;  // QubitFixedPhase only

    static EnsembleSpec qubit_polar_real() {
        return {Family::QubitPolarReal, 2, 0.0};
    }
    static EnsembleSpec qubit_equatorial() {
        return {Family::QubitEquatorial, 2, 0.0};
    }
    static EnsembleSpec qubit_polar_imag() {
        return {Family::QubitPolarImag, 2, 0.0};
    }
    static EnsembleSpec qubit_fixed_phase(double phi0) {
        return {Family::QubitFixedPhase, 2, phi0};
    }
    static EnsembleSpec qutrit_general() {
        return {Family::QutritGeneral, 3, 0.0};
    }
    static EnsembleSpec qutrit_equatorial() {
        return {Family::QutritEquatorial, 3, 0.0};
    }
    static EnsembleSpec qutrit_restricted() {
        return {Family::QutritRestricted, 3, 0.0};
    }
    static EnsembleSpec qudit_fourier(int d) {
        return {Family::QuditFourier, d, 0.0};
    }
    static EnsembleSpec qudit_general(int d) {
        return {Family::QuditGeneral, d, 0.0};
    }
    static EnsembleSpec qudit_restricted4() {
        return {Family::QuditRestricted4, 4, 0.0};
    }

    bool operator==(const EnsembleSpec &) const = default;
};

struct QubitParams {
    double theta = 0.0;  // [0, pi]
    double phi = 0.0;    // [0, 2pi)
    bool operator==(const QubitParams &) const = default;
};

struct QutritParams {
    double gamma1 = 0.0;  // [0, pi/2]
    double gamma2 = 0.0;  // [0, pi/2]
    double delta = 0.0;   // [0, 2pi)
    double phi = 0.0;     // [0, 2pi)

    /// Equal-magnitude qutrit: cos(gamma1) = 1/sqrt3, gamma2 = pi/4.
    static QutritParams equatorial(double delta, double phi);
    bool operator==(const QutritParams &) const = default;
};

struct QuditParams {
    int d = 2;
    std::vector<double> gammas;  // gamma_1 .. gamma_(d-1), each in [0, pi/2]
    std::vector<double> alphas;  // alpha_1 .. alpha_(d-1), each in [0, 2pi); alpha_0 = 0

    /// Equal-magnitude qudit with the given phases alpha_1..alpha_(d-1).
    static QuditParams fourier(int d, std::vector<double> alphas);
    bool operator==(const QuditParams &) const = default;
};

using EnsembleParams = std::variant<QubitParams, QutritParams, QuditParams>;

std::string describe(const EnsembleSpec &spec);
/// Parse a family name as printed by describe() without its arguments,
/// e.g. "QuditFourier". Throws Error(Parse) if unknown.
Family family_from_string(const std::string &name);
const char *family_name(Family family);

int dimension(const EnsembleSpec &spec);
/// Families for which every basis index has a parameter-independent correction.
bool is_exact_family(const EnsembleSpec &spec);
bool is_correctable(const EnsembleSpec &spec, int basis_index);
/// Number of basis indices with a parameter-independent correction.
int correctable_count(const EnsembleSpec &spec);

/// Throws Error(InvalidArgument) on a bad spec.
void validate(const EnsembleSpec &spec);
/// Throws Error(InvalidArgument) for out-of-range or family-inconsistent parameters.
void validate_params(const EnsembleSpec &spec, const EnsembleParams &params);

/// Uniform draw over the family's free parameters; fixed ones set to the family value.
EnsembleParams random_params(const EnsembleSpec &spec, Rng &rng);
/// Fills a parameter record from named values ("theta", "phi", "gamma1",
/// "gamma2", "delta", "alpha1".."alpha(d-1)", "gamma1".."gamma(d-1)").
/// Parameters fixed by the family may be omitted. Unknown names are rejected.
EnsembleParams params_from_named(const EnsembleSpec &spec, const std::map<std::string, double> &named);
/// Named view of a parameter record (inverse of params_from_named).
std::map<std::string, double> named_params(const EnsembleParams &params);

/// Amplitudes beta_0..beta_(d-1) of the general qudit parametrization.
Vector general_qudit_amplitudes(std::span<const double> gammas, std::span<const double> alphas);

PureState target_state(const EnsembleSpec &spec, const EnsembleParams &params);
std::vector<PureState> rotated_basis(const EnsembleSpec &spec, const EnsembleParams &params);
/// Columns are the rotated basis: U|k> = psi_k.
UnitaryOp preparation_unitary(const EnsembleSpec &spec, const EnsembleParams &params);
/// Parameter-independent unitary taking psi_k to psi_0 up to a global phase.
/// Throws Error(Uncorrectable) when the family has none for index k.
UnitaryOp correction_unitary(const EnsembleSpec &spec, int basis_index);

}  // namespace darkrsp

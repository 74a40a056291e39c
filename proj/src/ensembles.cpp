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

#include "darkrsp/ensembles.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include "darkrsp/error.hpp"

namespace darkrsp {

namespace {

using std::numbers::pi;
constexpr double kTwoPi = 2.0 * pi;
constexpr double kFixedTol = 1e-12;

enum class ParamKind { Qubit, Qutrit, Qudit };

ParamKind param_kind(Family f) {
    switch (f) {
        case Family::QubitPolarReal:
        case Family::QubitEquatorial:
        case Family::QubitPolarImag:
        case Family::QubitFixedPhase:
            return ParamKind::Qubit;
        case Family::QutritGeneral:
        case Family::QutritEquatorial:
        case Family::QutritRestricted:
            return ParamKind::Qutrit;
        default:
            return ParamKind::Qudit;
    }
}

bool is_fourier(Family f) {
    return f == Family::QutritEquatorial || f == Family::QuditFourier;
}

void check_range(double v, double lo, double hi, bool hi_closed, const std::string &name) {
    const bool ok = std::isfinite(v) && v >= lo && (hi_closed ? v <= hi : v < hi);
    if (!ok) {
        fail(ErrorCode::InvalidArgument, "parameter " + name + " = " + std::to_string(v) + " out of range");
    }
}

void check_fixed(double v, double fixed, const std::string &name, Family f) {
    if (std::abs(v - fixed) > kFixedTol) {
        fail(ErrorCode::InvalidArgument, std::string("family ") + family_name(f) + " fixes " + name + " = " +
                                             std::to_string(fixed) + ", got " + std::to_string(v));
    }
}

/// gamma_j with cos(gamma_j) = 1/sqrt(d - j + 1), giving equal magnitudes 1/sqrt(d).
std::vector<double> equal_magnitude_gammas(int d) {
    std::vector<double> g;
    for (int j = 1; j < d; ++j) {
        g.push_back(std::acos(1.0 / std::sqrt(static_cast<double>(d - j + 1))));
    }
    return g;
}

struct Hierarchical {
    std::vector<double> gammas;
    std::vector<double> alphas;
};

Hierarchical as_hierarchical(const EnsembleSpec &spec, const EnsembleParams &params) {
    if (const auto *q = std::get_if<QutritParams>(&params)) {
        return {{q->gamma1, q->gamma2}, {q->delta, q->phi}};
    }
    const auto &q = std::get<QuditParams>(params);
    auto gammas = q.gammas.empty() ? equal_magnitude_gammas(spec.d) : q.gammas;
    return {gammas, q.alphas};
}

std::vector<double> fourier_alphas(const EnsembleParams &params) {
    if (const auto *q = std::get_if<QutritParams>(&params)) {
        return {q->delta, q->phi};
    }
    return std::get<QuditParams>(params).alphas;
}

SubsystemLayout single(int d) {
    return SubsystemLayout({d}, {"target"});
}

Vector qubit_vector(double theta, double phi, bool bar) {
    Vector v(2);
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    if (!bar) {
        v << c, s * std::polar(1.0, phi);
    } else {
        v << -s, c * std::polar(1.0, phi);
    }
    return v;
}

double qubit_phi(const EnsembleSpec &spec, const QubitParams &p) {
    switch (spec.family) {
        case Family::QubitPolarReal:
            return 0.0;
        case Family::QubitPolarImag:
            return pi / 2.0;
        case Family::QubitFixedPhase:
            return spec.phi0;
        default:
            return p.phi;
    }
}

double qubit_theta(const EnsembleSpec &spec, const QubitParams &p) {
    return spec.family == Family::QubitEquatorial ? pi / 2.0 : p.theta;
}

std::vector<Vector> hierarchical_basis(std::span<const double> g, std::span<const double> a) {
    const std::size_t d = g.size() + 1;
    auto alpha = [&](std::size_t j) { return j == 0 ? 0.0 : a[j - 1]; };
    // c_j = cos(g_(j+1)) below the last level, 1 at the last level; g is 0-based here.
    auto c = [&](std::size_t j) { return j + 1 < d ? std::cos(g[j]) : 1.0; };
    std::vector<Vector> basis;
    basis.push_back(general_qudit_amplitudes(g, a));
    for (std::size_t k = 1; k < d; ++k) {
        Vector v = Vector::Zero(static_cast<Eigen::Index>(d));
        v[static_cast<Eigen::Index>(k - 1)] = std::sin(g[k - 1]) * std::polar(1.0, alpha(k - 1));
        double sines = 1.0;
        for (std::size_t j = k; j < d; ++j) {
            if (j > k) {
                sines *= std::sin(g[j - 1]);
            }
            v[static_cast<Eigen::Index>(j)] = -std::cos(g[k - 1]) * c(j) * sines * std::polar(1.0, alpha(j));
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<Vector> fourier_basis(int d, std::span<const double> a) {
    std::vector<Vector> basis;
    const double norm = 1.0 / std::sqrt(static_cast<double>(d));
    for (int k = 0; k < d; ++k) {
        Vector v(d);
        for (int j = 0; j < d; ++j) {
            const double alpha = j == 0 ? 0.0 : a[static_cast<std::size_t>(j - 1)];
            // Reduce jk mod d before scaling so the phase is exact for every k.
            const double w = kTwoPi * static_cast<double>((j * k) % d) / d;
            v[j] = norm * std::polar(1.0, w + alpha);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<Vector> basis_vectors(const EnsembleSpec &spec, const EnsembleParams &params) {
    validate_params(spec, params);
    if (param_kind(spec.family) == ParamKind::Qubit) {
        const auto &p = std::get<QubitParams>(params);
        const double theta = qubit_theta(spec, p);
        const double phi = qubit_phi(spec, p);
        return {qubit_vector(theta, phi, false), qubit_vector(theta, phi, true)};
    }
    if (is_fourier(spec.family)) {
        return fourier_basis(spec.d, fourier_alphas(params));
    }
    const auto h = as_hierarchical(spec, params);
    return hierarchical_basis(h.gammas, h.alphas);
}

}  // namespace

QutritParams QutritParams::equatorial(double delta, double phi) {
    return {std::acos(1.0 / std::sqrt(3.0)), pi / 4.0, delta, phi};
}

QuditParams QuditParams::fourier(int d, std::vector<double> alphas) {
    return {d, equal_magnitude_gammas(d), std::move(alphas)};
}

const char *family_name(Family family) {
    switch (family) {
        case Family::QubitPolarReal:
            return "QubitPolarReal";
        case Family::QubitEquatorial:
            return "QubitEquatorial";
        case Family::QubitPolarImag:
            return "QubitPolarImag";
        case Family::QubitFixedPhase:
            return "QubitFixedPhase";
        case Family::QutritGeneral:
            return "QutritGeneral";
        case Family::QutritEquatorial:
            return "QutritEquatorial";
        case Family::QutritRestricted:
            return "QutritRestricted";
        case Family::QuditFourier:
            return "QuditFourier";
        case Family::QuditGeneral:
            return "QuditGeneral";
        case Family::QuditRestricted4:
            return "QuditRestricted4";
    }
    return "?";
}

Family family_from_string(const std::string &name) {
    for (auto f : {Family::QubitPolarReal, Family::QubitEquatorial, Family::QubitPolarImag, Family::QubitFixedPhase,
                   Family::QutritGeneral, Family::QutritEquatorial, Family::QutritRestricted, Family::QuditFourier,
                   Family::QuditGeneral, Family::QuditRestricted4}) {
        if (name == family_name(f)) {
            return f;
        }
    }
    fail(ErrorCode::Parse, "unknown ensemble family '" + name + "'");
}

std::string describe(const EnsembleSpec &spec) {
    switch (spec.family) {
        case Family::QubitFixedPhase:
            return std::string(family_name(spec.family)) + "(" + std::to_string(spec.phi0) + ")";
        case Family::QuditFourier:
        case Family::QuditGeneral:
            return std::string(family_name(spec.family)) + "(" + std::to_string(spec.d) + ")";
        default:
            return family_name(spec.family);
    }
}

void validate(const EnsembleSpec &spec) {
    const int expected = [&] {
        switch (param_kind(spec.family)) {
            case ParamKind::Qubit:
                return 2;
            case ParamKind::Qutrit:
                return 3;
            default:
                return spec.family == Family::QuditRestricted4 ? 4 : -1;
        }
    }();
    if (expected > 0 && spec.d != expected) {
        fail(ErrorCode::InvalidArgument,
             std::string("family ") + family_name(spec.family) + " has dimension " + std::to_string(expected));
    }
    if (spec.d < 2 || spec.d > 16) {
        fail(ErrorCode::InvalidArgument, "ensemble dimension must be in [2, 16]");
    }
    if (spec.family == Family::QubitFixedPhase) {
        check_range(spec.phi0, 0.0, kTwoPi, false, "phi0");
    }
}

int dimension(const EnsembleSpec &spec) {
    validate(spec);
    return spec.d;
}

bool is_exact_family(const EnsembleSpec &spec) {
    return param_kind(spec.family) == ParamKind::Qubit || is_fourier(spec.family);
}

bool is_correctable(const EnsembleSpec &spec, int basis_index) {
    if (basis_index < 0 || basis_index >= spec.d) {
        return false;
    }
    if (basis_index == 0 || is_exact_family(spec)) {
        return true;
    }
    return basis_index == 1 && (spec.family == Family::QutritRestricted || spec.family == Family::QuditRestricted4);
}

int correctable_count(const EnsembleSpec &spec) {
    int n = 0;
    for (int k = 0; k < spec.d; ++k) {
        n += is_correctable(spec, k) ? 1 : 0;
    }
    return n;
}

void validate_params(const EnsembleSpec &spec, const EnsembleParams &params) {
    validate(spec);
    const Family f = spec.family;
    switch (param_kind(f)) {
        case ParamKind::Qubit: {
            const auto *p = std::get_if<QubitParams>(&params);
            if (!p) {
                fail(ErrorCode::InvalidArgument, "qubit family needs qubit parameters");
            }
            check_range(p->theta, 0.0, pi, true, "theta");
            check_range(p->phi, 0.0, kTwoPi, false, "phi");
            if (f == Family::QubitEquatorial) {
                check_fixed(p->theta, pi / 2.0, "theta", f);
            } else {
                check_fixed(p->phi, qubit_phi(spec, *p), "phi", f);
            }
            return;
        }
        case ParamKind::Qutrit: {
            const auto *p = std::get_if<QutritParams>(&params);
            if (!p) {
                fail(ErrorCode::InvalidArgument, "qutrit family needs qutrit parameters");
            }
            check_range(p->gamma1, 0.0, pi / 2.0, true, "gamma1");
            check_range(p->gamma2, 0.0, pi / 2.0, true, "gamma2");
            check_range(p->delta, 0.0, kTwoPi, false, "delta");
            check_range(p->phi, 0.0, kTwoPi, false, "phi");
            if (f == Family::QutritEquatorial) {
                const auto eq = QutritParams::equatorial(0.0, 0.0);
                check_fixed(p->gamma1, eq.gamma1, "gamma1", f);
                check_fixed(p->gamma2, eq.gamma2, "gamma2", f);
            } else if (f == Family::QutritRestricted) {
                check_fixed(p->gamma1, pi / 4.0, "gamma1", f);
            }
            return;
        }
        case ParamKind::Qudit: {
            const auto *p = std::get_if<QuditParams>(&params);
            if (!p) {
                fail(ErrorCode::InvalidArgument, "qudit family needs qudit parameters");
            }
            const auto n = static_cast<std::size_t>(spec.d - 1);
            if (p->d != spec.d || p->alphas.size() != n) {
                fail(ErrorCode::InvalidArgument, "qudit parameters need d-1 phases for d = " + std::to_string(spec.d));
            }
            const bool implicit_gammas = f == Family::QuditFourier && p->gammas.empty();
            if (!implicit_gammas && p->gammas.size() != n) {
                fail(ErrorCode::InvalidArgument, "qudit parameters need d-1 angles for d = " + std::to_string(spec.d));
            }
            for (std::size_t i = 0; i < p->gammas.size(); ++i) {
                check_range(p->gammas[i], 0.0, pi / 2.0, true, "gamma" + std::to_string(i + 1));
            }
            for (std::size_t i = 0; i < n; ++i) {
                check_range(p->alphas[i], 0.0, kTwoPi, false, "alpha" + std::to_string(i + 1));
            }
            if (f == Family::QuditFourier && !implicit_gammas) {
                const auto eq = equal_magnitude_gammas(spec.d);
                for (std::size_t i = 0; i < n; ++i) {
                    check_fixed(p->gammas[i], eq[i], "gamma" + std::to_string(i + 1), f);
                }
            }
            if (f == Family::QuditRestricted4) {
                check_fixed(p->gammas[0], pi / 4.0, "gamma1", f);
            }
            return;
        }
    }
}

EnsembleParams random_params(const EnsembleSpec &spec, Rng &rng) {
    validate(spec);
    const Family f = spec.family;
    switch (param_kind(f)) {
        case ParamKind::Qubit: {
            QubitParams p{rng.uniform(0.0, pi), rng.uniform(0.0, kTwoPi)};
            if (f == Family::QubitEquatorial) {
                p.theta = pi / 2.0;
            } else {
                p.phi = qubit_phi(spec, p);
            }
            return p;
        }
        case ParamKind::Qutrit: {
            QutritParams p{rng.uniform(0.0, pi / 2.0), rng.uniform(0.0, pi / 2.0), rng.uniform(0.0, kTwoPi),
                           rng.uniform(0.0, kTwoPi)};
            if (f == Family::QutritEquatorial) {
                return QutritParams::equatorial(p.delta, p.phi);
            }
            if (f == Family::QutritRestricted) {
                p.gamma1 = pi / 4.0;
            }
            return p;
        }
        case ParamKind::Qudit: {
            QuditParams p{spec.d, {}, {}};
            for (int i = 1; i < spec.d; ++i) {
                p.gammas.push_back(rng.uniform(0.0, pi / 2.0));
                p.alphas.push_back(rng.uniform(0.0, kTwoPi));
            }
            if (f == Family::QuditFourier) {
                p.gammas = equal_magnitude_gammas(spec.d);
            } else if (f == Family::QuditRestricted4) {
                p.gammas[0] = pi / 4.0;
            }
            return p;
        }
    }
    fail(ErrorCode::InvalidArgument, "unknown family");
}

EnsembleParams params_from_named(const EnsembleSpec &spec, const std::map<std::string, double> &named) {
    validate(spec);
    std::set<std::string> used;
    auto take = [&](const std::string &key, std::optional<double> fallback) -> double {
        auto it = named.find(key);
        if (it != named.end()) {
            used.insert(key);
            return it->second;
        }
        if (fallback) {
            return *fallback;
        }
        fail(ErrorCode::InvalidArgument, std::string("family ") + family_name(spec.family) +
                                             " requires parameter '" + key + "'");
    };
    const Family f = spec.family;
    EnsembleParams out;
    switch (param_kind(f)) {
        case ParamKind::Qubit: {
            QubitParams p;
            p.theta = take("theta", f == Family::QubitEquatorial ? std::optional(pi / 2.0) : std::nullopt);
            p.phi = take("phi", f == Family::QubitEquatorial ? std::nullopt : std::optional(qubit_phi(spec, p)));
            out = p;
            break;
        }
        case ParamKind::Qutrit: {
            const auto eq = QutritParams::equatorial(0.0, 0.0);
            QutritParams p;
            std::optional<double> g1, g2;
            if (f == Family::QutritEquatorial) {
                g1 = eq.gamma1;
                g2 = eq.gamma2;
            } else if (f == Family::QutritRestricted) {
                g1 = pi / 4.0;
            }
            p.gamma1 = take("gamma1", g1);
            p.gamma2 = take("gamma2", g2);
            p.delta = take("delta", std::nullopt);
            p.phi = take("phi", std::nullopt);
            out = p;
            break;
        }
        case ParamKind::Qudit: {
            QuditParams p{spec.d, {}, {}};
            const auto eq = equal_magnitude_gammas(spec.d);
            for (int i = 1; i < spec.d; ++i) {
                std::optional<double> g;
                if (f == Family::QuditFourier) {
                    g = eq[static_cast<std::size_t>(i - 1)];
                } else if (f == Family::QuditRestricted4 && i == 1) {
                    g = pi / 4.0;
                }
                p.gammas.push_back(take("gamma" + std::to_string(i), g));
                p.alphas.push_back(take("alpha" + std::to_string(i), std::nullopt));
            }
            out = p;
            break;
        }
    }
    for (const auto &[key, value] : named) {
        if (!used.count(key)) {
            fail(ErrorCode::InvalidArgument,
                 std::string("unknown parameter '") + key + "' for family " + family_name(f));
        }
    }
    validate_params(spec, out);
    return out;
}

std::map<std::string, double> named_params(const EnsembleParams &params) {
    std::map<std::string, double> out;
    if (const auto *p = std::get_if<QubitParams>(&params)) {
        out["theta"] = p->theta;
        out["phi"] = p->phi;
    } else if (const auto *q = std::get_if<QutritParams>(&params)) {
        out["gamma1"] = q->gamma1;
        out["gamma2"] = q->gamma2;
        out["delta"] = q->delta;
        out["phi"] = q->phi;
    } else {
        const auto &r = std::get<QuditParams>(params);
        for (std::size_t i = 0; i < r.gammas.size(); ++i) {
            out["gamma" + std::to_string(i + 1)] = r.gammas[i];
        }
        for (std::size_t i = 0; i < r.alphas.size(); ++i) {
            out["alpha" + std::to_string(i + 1)] = r.alphas[i];
        }
    }
    return out;
}

Vector general_qudit_amplitudes(std::span<const double> gammas, std::span<const double> alphas) {
    if (gammas.empty() || gammas.size() != alphas.size()) {
        fail(ErrorCode::InvalidArgument, "general qudit needs d-1 angles and d-1 phases");
    }
    const std::size_t d = gammas.size() + 1;
    Vector beta(static_cast<Eigen::Index>(d));
    double sines = 1.0;
    for (std::size_t j = 0; j < d; ++j) {
        const double c = j + 1 < d ? std::cos(gammas[j]) : 1.0;
        const double phase = j == 0 ? 0.0 : alphas[j - 1];
        beta[static_cast<Eigen::Index>(j)] = c * sines * std::polar(1.0, phase);
        if (j + 1 < d) {
            sines *= std::sin(gammas[j]);
        }
    }
    return beta;
}

PureState target_state(const EnsembleSpec &spec, const EnsembleParams &params) {
    return rotated_basis(spec, params).front();
}

std::vector<PureState> rotated_basis(const EnsembleSpec &spec, const EnsembleParams &params) {
    std::vector<PureState> out;
    for (auto &v : basis_vectors(spec, params)) {
        out.push_back(PureState::normalized(single(spec.d), std::move(v)));
    }
    return out;
}

UnitaryOp preparation_unitary(const EnsembleSpec &spec, const EnsembleParams &params) {
    const auto basis = basis_vectors(spec, params);
    Matrix m(spec.d, spec.d);
    for (int k = 0; k < spec.d; ++k) {
        m.col(k) = basis[static_cast<std::size_t>(k)];
    }
    return UnitaryOp(std::move(m));
}

UnitaryOp correction_unitary(const EnsembleSpec &spec, int basis_index) {
    validate(spec);
    if (basis_index < 0 || basis_index >= spec.d) {
        fail(ErrorCode::InvalidArgument, "basis index " + std::to_string(basis_index) + " out of range");
    }
    if (!is_correctable(spec, basis_index)) {
        fail(ErrorCode::Uncorrectable, std::string("no parameter-independent correction for ") + describe(spec) +
                                           " basis element " + std::to_string(basis_index));
    }
    if (basis_index == 0) {
        return UnitaryOp::identity(spec.d);
    }
    const Complex i1(0.0, 1.0);
    Matrix m(spec.d, spec.d);
    switch (spec.family) {
        case Family::QubitPolarReal:
            // i sigma_y
            m << 0.0, 1.0, -1.0, 0.0;
            return UnitaryOp(m);
        case Family::QubitEquatorial:
            m << 1.0, 0.0, 0.0, -1.0;
            return UnitaryOp(m);
        case Family::QubitPolarImag:
            m << 0.0, 1.0, 1.0, 0.0;
            return UnitaryOp(m);
        case Family::QubitFixedPhase:
            m << 0.0, std::exp(-i1 * spec.phi0), -std::exp(i1 * spec.phi0), 0.0;
            return UnitaryOp(m);
        case Family::QutritEquatorial:
        case Family::QuditFourier: {
            // U_0k = sum_j w^{-kj} |j><j|
            std::vector<Complex> phases;
            for (int j = 0; j < spec.d; ++j) {
                const int e = (spec.d - (basis_index * j) % spec.d) % spec.d;
                phases.push_back(std::polar(1.0, kTwoPi * e / spec.d));
            }
            return UnitaryOp::diagonal(phases);
        }
        case Family::QutritRestricted:
        case Family::QuditRestricted4: {
            std::vector<Complex> phases(static_cast<std::size_t>(spec.d), Complex(-1.0));
            phases[0] = 1.0;
            return UnitaryOp::diagonal(phases);
        }
        default:
            break;
    }
    fail(ErrorCode::Uncorrectable, "no parameter-independent correction for " + describe(spec));
}

}  // namespace darkrsp

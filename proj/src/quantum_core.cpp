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

#include "darkrsp/quantum_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "darkrsp/error.hpp"

namespace darkrsp {

const char *to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument:
            return "invalid argument";
        case ErrorCode::DimensionMismatch:
            return "dimension mismatch";
        case ErrorCode::Uncorrectable:
            return "uncorrectable";
        case ErrorCode::Configuration:
            return "configuration error";
        case ErrorCode::Parse:
            return "parse error";
        case ErrorCode::Io:
            return "i/o error";
        case ErrorCode::Numerical:
            return "numerical error";
    }
    return "unknown error";
}

namespace {

// Amplitude vectors beyond this size are refused outright (64 MiB of complex<double>).
constexpr std::size_t kMaxTotalDim = std::size_t{1} << 22;

std::vector<std::size_t> strides_of(const std::vector<int> &dims) {
    std::vector<std::size_t> strides(dims.size());
    std::size_t s = 1;
    for (std::size_t i = dims.size(); i-- > 0;) {
        strides[i] = s;
        s *= static_cast<std::size_t>(dims[i]);
    }
    return strides;
}

void check_slots(const SubsystemLayout &layout, std::span<const std::size_t> slots, const char *what) {
    std::vector<bool> seen(layout.size(), false);
    for (auto s : slots) {
        if (s >= layout.size()) {
            fail(ErrorCode::InvalidArgument, std::string(what) + ": subsystem index " + std::to_string(s) +
                                                 " out of range for " + std::to_string(layout.size()) +
                                                 " subsystems");
        }
        if (seen[s]) {
            fail(ErrorCode::InvalidArgument, std::string(what) + ": repeated subsystem index " + std::to_string(s));
        }
        seen[s] = true;
    }
}

std::vector<std::size_t> complement(std::size_t n, std::span<const std::size_t> slots) {
    std::vector<bool> in(n, false);
    for (auto s : slots) {
        in[s] = true;
    }
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < n; ++i) {
        if (!in[i]) {
            rest.push_back(i);
        }
    }
    return rest;
}

// Amplitudes as a (rows) x (cols) matrix, rows enumerating `rows` slots and
// columns enumerating `cols` slots.
Matrix reshape(const PureState &state, std::span<const std::size_t> rows, std::span<const std::size_t> cols) {
    const auto row_off = slot_offsets(state.layout(), rows);
    const auto col_off = slot_offsets(state.layout(), cols);
    Matrix m(row_off.size(), col_off.size());
    const auto &a = state.amplitudes();
    for (std::size_t r = 0; r < row_off.size(); ++r) {
        for (std::size_t c = 0; c < col_off.size(); ++c) {
            m(r, c) = a[static_cast<Eigen::Index>(row_off[r] + col_off[c])];
        }
    }
    return m;
}

void check_bipartition(const SubsystemLayout &layout, std::span<const std::size_t> a, std::span<const std::size_t> b) {
    std::vector<std::size_t> all(a.begin(), a.end());
    all.insert(all.end(), b.begin(), b.end());
    check_slots(layout, all, "partition");
    if (all.size() != layout.size()) {
        fail(ErrorCode::InvalidArgument, "partition must cover every subsystem");
    }
    if (a.empty() || b.empty()) {
        fail(ErrorCode::InvalidArgument, "partition sides must be nonempty");
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// SubsystemLayout

SubsystemLayout::SubsystemLayout(std::vector<int> dims, std::vector<std::string> parties)
    : dims_(std::move(dims)), parties_(std::move(parties)) {
    if (dims_.empty()) {
        fail(ErrorCode::InvalidArgument, "layout needs at least one subsystem");
    }
    if (dims_.size() != parties_.size()) {
        fail(ErrorCode::InvalidArgument, "every subsystem needs exactly one party");
    }
    for (std::size_t i = 0; i < dims_.size(); ++i) {
        if (dims_[i] < 2) {
            fail(ErrorCode::InvalidArgument, "subsystem dimension must be >= 2");
        }
        if (parties_[i].empty()) {
            fail(ErrorCode::InvalidArgument, "party label must be nonempty");
        }
        if (total_dim_ > kMaxTotalDim / static_cast<std::size_t>(dims_[i])) {
            fail(ErrorCode::InvalidArgument, "state dimension too large");
        }
        total_dim_ *= static_cast<std::size_t>(dims_[i]);
    }
}

SubsystemLayout SubsystemLayout::uniform(int d, std::size_t n, const std::string &party) {
    return SubsystemLayout(std::vector<int>(n, d), std::vector<std::string>(n, party));
}

std::vector<std::size_t> SubsystemLayout::slots_of(std::string_view party) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < parties_.size(); ++i) {
        if (parties_[i] == party) {
            out.push_back(i);
        }
    }
    return out;
}

std::vector<std::string> SubsystemLayout::party_names() const {
    std::vector<std::string> out;
    for (const auto &p : parties_) {
        if (std::find(out.begin(), out.end(), p) == out.end()) {
            out.push_back(p);
        }
    }
    return out;
}

SubsystemLayout SubsystemLayout::select(std::span<const std::size_t> slots) const {
    check_slots(*this, slots, "select");
    std::vector<int> dims;
    std::vector<std::string> parties;
    for (auto s : slots) {
        dims.push_back(dims_[s]);
        parties.push_back(parties_[s]);
    }
    return SubsystemLayout(std::move(dims), std::move(parties));
}

SubsystemLayout SubsystemLayout::concat(const SubsystemLayout &other) const {
    auto dims = dims_;
    auto parties = parties_;
    dims.insert(dims.end(), other.dims_.begin(), other.dims_.end());
    parties.insert(parties.end(), other.parties_.begin(), other.parties_.end());
    return SubsystemLayout(std::move(dims), std::move(parties));
}

SubsystemLayout SubsystemLayout::with_parties(std::vector<std::string> parties) const {
    return SubsystemLayout(dims_, std::move(parties));
}

// ---------------------------------------------------------------------------
// PureState

PureState::PureState(SubsystemLayout layout, Vector amplitudes)
    : layout_(std::move(layout)), amplitudes_(std::move(amplitudes)) {
    if (static_cast<std::size_t>(amplitudes_.size()) != layout_.total_dim()) {
        fail(ErrorCode::DimensionMismatch, "amplitude count " + std::to_string(amplitudes_.size()) +
                                               " does not match layout dimension " +
                                               std::to_string(layout_.total_dim()));
    }
    const double norm = amplitudes_.norm();
    if (!std::isfinite(norm) || std::abs(norm - 1.0) > tol::kExact) {
        fail(ErrorCode::InvalidArgument, "state is not normalized (norm " + std::to_string(norm) + ")");
    }
}

PureState PureState::normalized(SubsystemLayout layout, Vector amplitudes) {
    const double norm = amplitudes.norm();
    if (!(norm > 1e-300) || !std::isfinite(norm)) {
        fail(ErrorCode::Numerical, "cannot normalize a zero vector");
    }
    amplitudes /= norm;
    return PureState(std::move(layout), std::move(amplitudes));
}

PureState PureState::basis(SubsystemLayout layout, std::span<const int> digits) {
    if (digits.size() != layout.size()) {
        fail(ErrorCode::DimensionMismatch, "basis state needs one digit per subsystem");
    }
    const auto strides = strides_of(layout.dims());
    std::size_t index = 0;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (digits[i] < 0 || digits[i] >= layout.dim(i)) {
            fail(ErrorCode::InvalidArgument, "basis digit out of range");
        }
        index += static_cast<std::size_t>(digits[i]) * strides[i];
    }
    Vector amps = Vector::Zero(static_cast<Eigen::Index>(layout.total_dim()));
    amps[static_cast<Eigen::Index>(index)] = 1.0;
    return PureState(std::move(layout), std::move(amps));
}

PureState PureState::permuted(std::span<const std::size_t> order) const {
    if (order.size() != size()) {
        fail(ErrorCode::InvalidArgument, "permutation must list every subsystem once");
    }
    auto new_layout = layout_.select(order);
    // Offsets of the old slots enumerated in the new order give a gather map.
    const auto src = slot_offsets(layout_, order);
    Vector out(amplitudes_.size());
    for (std::size_t i = 0; i < src.size(); ++i) {
        out[static_cast<Eigen::Index>(i)] = amplitudes_[static_cast<Eigen::Index>(src[i])];
    }
    return PureState(std::move(new_layout), std::move(out));
}

PureState PureState::with_parties(std::vector<std::string> parties) const {
    return PureState(layout_.with_parties(std::move(parties)), amplitudes_);
}

// ---------------------------------------------------------------------------
// DensityMatrix / UnitaryOp

DensityMatrix::DensityMatrix(Matrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
        fail(ErrorCode::DimensionMismatch, "density matrix must be square and nonempty");
    }
    if ((entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() > tol::kInvariance) {
        fail(ErrorCode::InvalidArgument, "density matrix is not Hermitian");
    }
    if (std::abs(entries_.trace() - Complex(1.0)) > tol::kInvariance) {
        fail(ErrorCode::InvalidArgument, "density matrix trace is not 1");
    }
    const Matrix herm = 0.5 * (entries_ + entries_.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol::kInvariance) {
        fail(ErrorCode::InvalidArgument, "density matrix has a negative eigenvalue");
    }
}

UnitaryOp::UnitaryOp(Matrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
        fail(ErrorCode::DimensionMismatch, "unitary must be square and nonempty");
    }
    const Matrix gram = entries_.adjoint() * entries_;
    const Matrix id = Matrix::Identity(entries_.rows(), entries_.cols());
    if ((gram - id).cwiseAbs().maxCoeff() > tol::kInvariance) {
        fail(ErrorCode::InvalidArgument, "matrix is not unitary");
    }
}

UnitaryOp UnitaryOp::identity(int dim) {
    return UnitaryOp(Matrix::Identity(dim, dim));
}

UnitaryOp UnitaryOp::diagonal(std::span<const Complex> phases) {
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(phases.size()), static_cast<Eigen::Index>(phases.size()));
    for (std::size_t i = 0; i < phases.size(); ++i) {
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = phases[i];
    }
    return UnitaryOp(std::move(m));
}

UnitaryOp UnitaryOp::adjoint() const {
    return UnitaryOp(entries_.adjoint());
}

UnitaryOp UnitaryOp::operator*(const UnitaryOp &rhs) const {
    if (dim() != rhs.dim()) {
        fail(ErrorCode::DimensionMismatch, "cannot compose unitaries of different dimension");
    }
    return UnitaryOp(entries_ * rhs.entries_);
}

// ---------------------------------------------------------------------------
// Index helpers

std::vector<std::size_t> slot_offsets(const SubsystemLayout &layout, std::span<const std::size_t> slots) {
    const auto strides = strides_of(layout.dims());
    std::vector<std::size_t> offsets{0};
    for (auto s : slots) {
        std::vector<std::size_t> next;
        next.reserve(offsets.size() * static_cast<std::size_t>(layout.dim(s)));
        for (auto base : offsets) {
            for (int digit = 0; digit < layout.dim(s); ++digit) {
                next.push_back(base + static_cast<std::size_t>(digit) * strides[s]);
            }
        }
        offsets = std::move(next);
    }
    return offsets;
}

std::vector<int> unflatten(std::size_t index, std::span<const int> dims) {
    std::vector<int> digits(dims.size());
    for (std::size_t i = dims.size(); i-- > 0;) {
        digits[i] = static_cast<int>(index % static_cast<std::size_t>(dims[i]));
        index /= static_cast<std::size_t>(dims[i]);
    }
    return digits;
}

// ---------------------------------------------------------------------------
// Operations

PureState tensor(std::span<const PureState> states) {
    if (states.empty()) {
        fail(ErrorCode::InvalidArgument, "tensor product of an empty list");
    }
    SubsystemLayout layout = states[0].layout();
    Vector amps = states[0].amplitudes();
    for (std::size_t i = 1; i < states.size(); ++i) {
        layout = layout.concat(states[i].layout());
        const Vector &rhs = states[i].amplitudes();
        Vector next(amps.size() * rhs.size());
        for (Eigen::Index j = 0; j < amps.size(); ++j) {
            next.segment(j * rhs.size(), rhs.size()) = amps[j] * rhs;
        }
        amps = std::move(next);
    }
    return PureState::normalized(std::move(layout), std::move(amps));
}

PureState tensor(std::initializer_list<PureState> states) {
    return tensor(std::span<const PureState>(states.begin(), states.size()));
}

PureState apply_unitary(const PureState &state, const UnitaryOp &u, std::span<const std::size_t> targets) {
    const auto &layout = state.layout();
    if (targets.empty()) {
        fail(ErrorCode::InvalidArgument, "apply_unitary needs at least one target");
    }
    check_slots(layout, targets, "apply_unitary");
    std::size_t target_dim = 1;
    for (auto t : targets) {
        target_dim *= static_cast<std::size_t>(layout.dim(t));
    }
    if (u.dim() != target_dim) {
        fail(ErrorCode::DimensionMismatch, "unitary of dimension " + std::to_string(u.dim()) +
                                               " applied to targets of joint dimension " +
                                               std::to_string(target_dim));
    }
    const auto rest = complement(layout.size(), targets);
    const auto t_off = slot_offsets(layout, targets);
    const auto r_off = slot_offsets(layout, rest);
    const Vector &in = state.amplitudes();
    Vector out(in.size());
    Vector gathered(static_cast<Eigen::Index>(target_dim));
    for (auto base : r_off) {
        for (std::size_t k = 0; k < target_dim; ++k) {
            gathered[static_cast<Eigen::Index>(k)] = in[static_cast<Eigen::Index>(base + t_off[k])];
        }
        const Vector mapped = u.entries() * gathered;
        for (std::size_t k = 0; k < target_dim; ++k) {
            out[static_cast<Eigen::Index>(base + t_off[k])] = mapped[static_cast<Eigen::Index>(k)];
        }
    }
    // Renormalize away the ~1e-16 drift so long operation chains stay within kExact.
    return PureState::normalized(layout, std::move(out));
}

PureState apply_unitary(const PureState &state, const UnitaryOp &u, std::initializer_list<std::size_t> targets) {
    return apply_unitary(state, u, std::span<const std::size_t>(targets.begin(), targets.size()));
}

std::vector<MeasurementBranch> measure_projective(const PureState &state, std::span<const std::size_t> measured) {
    const auto &layout = state.layout();
    if (measured.empty()) {
        fail(ErrorCode::InvalidArgument, "measure_projective needs at least one measured subsystem");
    }
    check_slots(layout, measured, "measure_projective");
    if (measured.size() == layout.size()) {
        fail(ErrorCode::InvalidArgument, "measuring every subsystem leaves no residual state");
    }
    const auto rest = complement(layout.size(), measured);
    const auto m_off = slot_offsets(layout, measured);
    const auto r_off = slot_offsets(layout, rest);
    const auto rest_layout = layout.select(rest);
    std::vector<int> m_dims;
    for (auto s : measured) {
        m_dims.push_back(layout.dim(s));
    }

    std::vector<MeasurementBranch> branches;
    branches.reserve(m_off.size());
    const Vector &a = state.amplitudes();
    for (std::size_t o = 0; o < m_off.size(); ++o) {
        Vector post(static_cast<Eigen::Index>(r_off.size()));
        for (std::size_t r = 0; r < r_off.size(); ++r) {
            post[static_cast<Eigen::Index>(r)] = a[static_cast<Eigen::Index>(m_off[o] + r_off[r])];
        }
        MeasurementBranch branch;
        branch.outcome = unflatten(o, m_dims);
        branch.probability = post.squaredNorm();
        if (branch.probability >= tol::kZeroProbability) {
            branch.post_state = PureState::normalized(rest_layout, std::move(post));
        }
        branches.push_back(std::move(branch));
    }
    return branches;
}

DensityMatrix partial_trace(const PureState &state, std::span<const std::size_t> keep) {
    const auto &layout = state.layout();
    check_slots(layout, keep, "partial_trace");
    if (keep.empty() || keep.size() == layout.size()) {
        fail(ErrorCode::InvalidArgument, "partial_trace needs a nonempty proper subset to keep");
    }
    const auto rest = complement(layout.size(), keep);
    const Matrix m = reshape(state, keep, rest);
    Matrix rho = m * m.adjoint();
    rho = 0.5 * (rho + rho.adjoint());
    return DensityMatrix(std::move(rho));
}

double von_neumann_entropy(const DensityMatrix &rho) {
    const Matrix herm = 0.5 * (rho.entries() + rho.entries().adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double lambda = std::max(0.0, es.eigenvalues()[i]);
        if (lambda > 0.0) {
            s -= lambda * std::log2(lambda);
        }
    }
    return std::max(0.0, s);
}

double fidelity(const PureState &a, const PureState &b) {
    if (a.total_dim() != b.total_dim()) {
        fail(ErrorCode::DimensionMismatch, "fidelity between states of different dimension");
    }
    const double f = std::norm(a.amplitudes().dot(b.amplitudes()));
    return std::clamp(f, 0.0, 1.0);
}

double fidelity(const DensityMatrix &rho, const PureState &psi) {
    if (rho.dim() != psi.total_dim()) {
        fail(ErrorCode::DimensionMismatch, "fidelity between operators of different dimension");
    }
    const Complex f = psi.amplitudes().dot(rho.entries() * psi.amplitudes());
    return std::clamp(f.real(), 0.0, 1.0);
}

std::vector<double> schmidt_coefficients(const PureState &state, std::span<const std::size_t> part_a,
                                         std::span<const std::size_t> part_b) {
    check_bipartition(state.layout(), part_a, part_b);
    const Matrix m = reshape(state, part_a, part_b);
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto &sv = svd.singularValues();
    return std::vector<double>(sv.data(), sv.data() + sv.size());
}

bool is_product_across(const PureState &state, std::span<const std::size_t> part_a,
                       std::span<const std::size_t> part_b) {
    const auto sv = schmidt_coefficients(state, part_a, part_b);
    return sv.size() < 2 || sv[1] < tol::kInvariance;
}

double distance(const PureState &a, const PureState &b) {
    if (a.layout().dims() != b.layout().dims()) {
        fail(ErrorCode::DimensionMismatch, "distance between states of different layout");
    }
    return (a.amplitudes() - b.amplitudes()).norm();
}

UnitaryOp haar_unitary(int d, Rng &rng) {
    if (d < 1) {
        fail(ErrorCode::InvalidArgument, "unitary dimension must be positive");
    }
    Matrix z(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            const double re = rng.normal();
            const double im = rng.normal();
            z(i, j) = Complex(re, im) / std::sqrt(2.0);
        }
    }
    Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ() * Matrix::Identity(d, d);
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < d; ++j) {
        const Complex rjj = r(j, j);
        const double mag = std::abs(rjj);
        if (mag > 0.0) {
            q.col(j) *= rjj / mag;
        }
    }
    return UnitaryOp(std::move(q));
}

UnitaryOp haar_special_unitary(int d, Rng &rng) {
    const UnitaryOp u = haar_unitary(d, rng);
    const Complex det = u.entries().determinant();
    const Complex root = std::polar(1.0, -std::arg(det) / d);
    return UnitaryOp(u.entries() * root);
}

}  // namespace darkrsp

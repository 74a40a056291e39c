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

#include "darkrsp/dark_states.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "darkrsp/error.hpp"

namespace darkrsp {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr int kMaxMatchingParties = 5;

bool is_permutation_of_range(const std::vector<int> &perm) {
    std::vector<bool> seen(perm.size(), false);
    for (int p : perm) {
        if (p < 0 || static_cast<std::size_t>(p) >= perm.size() || seen[static_cast<std::size_t>(p)]) {
            return false;
        }
        seen[static_cast<std::size_t>(p)] = true;
    }
    return true;
}

std::vector<std::string> four_qubit_parties() {
    return {kAlice, kAlice, remote_party_name(0), remote_party_name(1)};
}

PureState from_terms(SubsystemLayout layout, const std::vector<std::pair<std::vector<int>, double>> &terms) {
    Vector amps = Vector::Zero(static_cast<Eigen::Index>(layout.total_dim()));
    std::vector<std::size_t> all(layout.size());
    std::iota(all.begin(), all.end(), 0);
    for (const auto &[digits, coeff] : terms) {
        std::size_t index = 0;
        for (std::size_t i = 0; i < digits.size(); ++i) {
            index = index * static_cast<std::size_t>(layout.dim(i)) + static_cast<std::size_t>(digits[i]);
        }
        amps[static_cast<Eigen::Index>(index)] += coeff;
    }
    return PureState::normalized(std::move(layout), std::move(amps));
}

PureState build_antisymmetric(int d) {
    std::vector<int> perm(static_cast<std::size_t>(d));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::pair<std::vector<int>, double>> terms;
    do {
        terms.emplace_back(perm, static_cast<double>(permutation_sign(perm)));
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::vector<std::string> parties(static_cast<std::size_t>(d), kAlice);
    parties.back() = remote_party_name(0);
    return from_terms(SubsystemLayout(std::vector<int>(static_cast<std::size_t>(d), d), parties), terms);
}

PureState build_matching(int m, const std::vector<int> &matching) {
    const auto n = static_cast<std::size_t>(2 * m);
    std::vector<std::string> parties(n, kAlice);
    for (int i = 0; i < m; ++i) {
        parties[static_cast<std::size_t>(m + i)] = remote_party_name(i);
    }
    // Singlets on (0, 1), (2, 3), ... then move pair i's second qubit to slot m + matching[i].
    const PureState singlet = build(resource::Singlet{});
    std::vector<PureState> pairs(static_cast<std::size_t>(m), singlet);
    const PureState paired = tensor(std::span<const PureState>(pairs));
    std::vector<std::size_t> order(n);
    for (int i = 0; i < m; ++i) {
        order[static_cast<std::size_t>(i)] = static_cast<std::size_t>(2 * i);
        order[static_cast<std::size_t>(m + matching[static_cast<std::size_t>(i)])] =
            static_cast<std::size_t>(2 * i + 1);
    }
    return paired.permuted(order).with_parties(parties);
}

}  // namespace

std::string remote_party_name(int i) {
    static const char *const kNames[] = {"Bob", "Charlie", "Denis"};
    if (i >= 0 && i < 3) {
        return kNames[i];
    }
    return "P" + std::to_string(i + 1);
}

int permutation_sign(const std::vector<int> &perm) {
    // Count cycles: sign = (-1)^(n - cycles).
    std::vector<bool> visited(perm.size(), false);
    std::size_t cycles = 0;
    for (std::size_t i = 0; i < perm.size(); ++i) {
        if (visited[i]) {
            continue;
        }
        ++cycles;
        for (std::size_t j = i; !visited[j]; j = static_cast<std::size_t>(perm[j])) {
            visited[j] = true;
        }
    }
    return ((perm.size() - cycles) % 2 == 0) ? 1 : -1;
}

void validate(const DarkStateSpec &spec) {
    std::visit(overloaded{
                   [](const resource::Singlet &) {},
                   [](const resource::FourQubitA &) {},
                   [](const resource::FourQubitB &) {},
                   [](const resource::SuperposedFourQubit &s) {
                       if (!std::isfinite(s.a) || !std::isfinite(s.b)) {
                           fail(ErrorCode::InvalidArgument, "superposition coefficients must be finite");
                       }
                       if (s.a * s.a + s.b * s.b + s.a * s.b <= 1e-12) {
                           fail(ErrorCode::InvalidArgument, "degenerate normalization: a^2 + b^2 + ab must be > 0");
                       }
                   },
                   [](const resource::SingletMatchingProduct &s) {
                       if (s.m < 1 || s.m > kMaxMatchingParties) {
                           fail(ErrorCode::InvalidArgument, "singlet matching needs 1 <= m <= 5");
                       }
                       if (s.matching.size() != static_cast<std::size_t>(s.m) ||
                           !is_permutation_of_range(s.matching)) {
                           fail(ErrorCode::InvalidArgument, "matching must be a permutation of 0..m-1");
                       }
                   },
                   [](const resource::Antisymmetric &s) {
                       if (s.d < 2 || s.d > 7) {
                           fail(ErrorCode::InvalidArgument, "antisymmetric resource needs 2 <= d <= 7");
                       }
                   },
                   [](const resource::AntisymmetricProduct &s) {
                       if (s.d < 2 || s.d > 7) {
                           fail(ErrorCode::InvalidArgument, "antisymmetric resource needs 2 <= d <= 7");
                       }
                       if (s.m < 1) {
                           fail(ErrorCode::InvalidArgument, "antisymmetric product needs m >= 1");
                       }
                       double log_dim = s.d * s.m * std::log2(static_cast<double>(s.d));
                       if (log_dim > 22.0) {
                           fail(ErrorCode::InvalidArgument, "antisymmetric product state too large");
                       }
                   },
               },
               spec);
}

std::string describe(const DarkStateSpec &spec) {
    return std::visit(
        overloaded{
            [](const resource::Singlet &) -> std::string { return "Singlet"; },
            [](const resource::FourQubitA &) -> std::string { return "FourQubitA"; },
            [](const resource::FourQubitB &) -> std::string { return "FourQubitB"; },
            [](const resource::SuperposedFourQubit &s) -> std::string {
                return "SuperposedFourQubit(" + std::to_string(s.a) + "," + std::to_string(s.b) + ")";
            },
            [](const resource::SingletMatchingProduct &s) -> std::string {
                std::string out = "SingletMatchingProduct(" + std::to_string(s.m) + ",[";
                for (std::size_t i = 0; i < s.matching.size(); ++i) {
                    out += (i ? "," : "") + std::to_string(s.matching[i]);
                }
                return out + "])";
            },
            [](const resource::Antisymmetric &s) -> std::string {
                return "Antisymmetric(" + std::to_string(s.d) + ")";
            },
            [](const resource::AntisymmetricProduct &s) -> std::string {
                return "AntisymmetricProduct(" + std::to_string(s.d) + "," + std::to_string(s.m) + ")";
            },
        },
        spec);
}

int resource_dimension(const DarkStateSpec &spec) {
    return std::visit(overloaded{
                          [](const resource::Antisymmetric &s) { return s.d; },
                          [](const resource::AntisymmetricProduct &s) { return s.d; },
                          [](const auto &) { return 2; },
                      },
                      spec);
}

int resource_parties(const DarkStateSpec &spec) {
    return std::visit(overloaded{
                          [](const resource::Singlet &) { return 1; },
                          [](const resource::Antisymmetric &) { return 1; },
                          [](const resource::SingletMatchingProduct &s) { return s.m; },
                          [](const resource::AntisymmetricProduct &s) { return s.m; },
                          [](const auto &) { return 2; },
                      },
                      spec);
}

PureState build(const DarkStateSpec &spec) {
    validate(spec);
    return std::visit(
        overloaded{
            [](const resource::Singlet &) {
                return from_terms(SubsystemLayout({2, 2}, {kAlice, remote_party_name(0)}),
                                  {{{0, 1}, 1.0}, {{1, 0}, -1.0}});
            },
            [](const resource::FourQubitA &) {
                return from_terms(SubsystemLayout({2, 2, 2, 2}, four_qubit_parties()),
                                  {{{0, 0, 1, 1}, 1.0}, {{1, 1, 0, 0}, 1.0}, {{0, 1, 1, 0}, -1.0}, {{1, 0, 0, 1}, -1.0}});
            },
            [](const resource::FourQubitB &) {
                return from_terms(SubsystemLayout({2, 2, 2, 2}, four_qubit_parties()),
                                  {{{0, 0, 1, 1}, 1.0}, {{1, 1, 0, 0}, 1.0}, {{0, 1, 0, 1}, -1.0}, {{1, 0, 1, 0}, -1.0}});
            },
            [](const resource::SuperposedFourQubit &s) {
                // Expanded form: a|0011> + a|1100> - (a+b)|0110> - (a+b)|1001> + b|0101> + b|1010>,
                // normalized by 1/(2 sqrt(a^2 + b^2 + ab)).
                const double n = 1.0 / (2.0 * std::sqrt(s.a * s.a + s.b * s.b + s.a * s.b));
                return from_terms(SubsystemLayout({2, 2, 2, 2}, four_qubit_parties()),
                                  {{{0, 0, 1, 1}, n * s.a},
                                   {{1, 1, 0, 0}, n * s.a},
                                   {{0, 1, 1, 0}, -n * (s.a + s.b)},
                                   {{1, 0, 0, 1}, -n * (s.a + s.b)},
                                   {{0, 1, 0, 1}, n * s.b},
                                   {{1, 0, 1, 0}, n * s.b}});
            },
            [](const resource::SingletMatchingProduct &s) { return build_matching(s.m, s.matching); },
            [](const resource::Antisymmetric &s) { return build_antisymmetric(s.d); },
            [](const resource::AntisymmetricProduct &s) {
                const PureState block = build_antisymmetric(s.d);
                std::vector<PureState> blocks;
                for (int i = 0; i < s.m; ++i) {
                    auto parties = block.layout().parties();
                    parties.back() = remote_party_name(i);
                    blocks.push_back(block.with_parties(parties));
                }
                return tensor(std::span<const PureState>(blocks));
            },
        },
        spec);
}

bool verify_dark(const PureState &state, int trials, double tol, std::uint64_t seed) {
    const auto &dims = state.layout().dims();
    if (std::adjacent_find(dims.begin(), dims.end(), std::not_equal_to<>()) != dims.end()) {
        fail(ErrorCode::DimensionMismatch, "verify_dark needs equal subsystem dimensions");
    }
    if (trials < 1) {
        fail(ErrorCode::InvalidArgument, "verify_dark needs at least one trial");
    }
    Rng rng(seed);
    for (int t = 0; t < trials; ++t) {
        const UnitaryOp u = haar_special_unitary(dims[0], rng);
        PureState rotated = state;
        for (std::size_t s = 0; s < state.size(); ++s) {
            rotated = apply_unitary(rotated, u, {s});
        }
        if (distance(rotated, state) >= tol) {
            return false;
        }
    }
    return true;
}

bool existence_rule(int n_particles, int d) {
    return n_particles >= 1 && d >= 2 && n_particles % d == 0;
}

std::vector<PureState> enumerate_singlet_matchings(int m) {
    if (m < 1 || m > kMaxMatchingParties) {
        fail(ErrorCode::InvalidArgument, "enumerate_singlet_matchings needs 1 <= m <= 5");
    }
    std::vector<int> perm(static_cast<std::size_t>(m));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<PureState> out;
    do {
        out.push_back(build_matching(m, perm));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

}  // namespace darkrsp

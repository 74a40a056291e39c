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

// Resource states invariant under U x U x ... x U (dark states).
//
// Party layouts are fixed per constructor:
//   Singlet                     slot 0 Alice, slot 1 Bob
//   FourQubitA/B, Superposed    slots 0,1 Alice; 2 Bob; 3 Charlie
//   SingletMatchingProduct(m)   slots 0..m-1 Alice; slot m+i remote party i
//   Antisymmetric(d)            slots 0..d-2 Alice; slot d-1 Bob
//   AntisymmetricProduct(d,m)   block i = Antisymmetric(d) with its last slot
//                               held by remote party i

#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "darkrsp/quantum_core.hpp"

namespace darkrsp {

inline const std::string kAlice = "Alice";

/// Remote party i: Bob, Charlie, Denis, then P4, P5, ...
std::string remote_party_name(int i);

namespace resource {

/// (|01> - |10>)/sqrt2
struct Singlet {};
/// singlet(1,3) x singlet(2,4), i.e. (|0011>+|1100>-|0110>-|1001>)/2
struct FourQubitA {};
/// singlet(1,4) x singlet(2,3), i.e. (|0011>+|1100>-|0101>-|1010>)/2
struct FourQubitB {};
/// a * singlet(1,3)singlet(2,4) + b * singlet(1,2)singlet(3,4), normalized.
/// Real coefficients only.
struct SuperposedFourQubit {
    double a = 1.0;
    double b = 0.0;
};
/// Product of singlets pairing Alice's qubit i with remote qubit m + matching[i].
/// `matching` is a 0-based permutation of {0..m-1}.
struct SingletMatchingProduct {
    int m = 1;
    std::vector<int> matching;
};
/// Totally antisymmetric state of d qudits of dimension d.
struct Antisymmetric {
    int d = 3;
};
/// m copies of Antisymmetric(d).
struct AntisymmetricProduct {
    int d = 3;
    int m = 1;
};

}  // namespace resource

using DarkStateSpec = std::variant<resource::Singlet, resource::FourQubitA, resource::FourQubitB,
                                   resource::SuperposedFourQubit, resource::SingletMatchingProduct,
                                   resource::Antisymmetric, resource::AntisymmetricProduct>;

/// Throws Error(InvalidArgument) for an invalid spec.
void validate(const DarkStateSpec &spec);

/// Short human-readable name, e.g. "Antisymmetric(3)".
std::string describe(const DarkStateSpec &spec);

/// Qudit dimension of every subsystem in the resource.
int resource_dimension(const DarkStateSpec &spec);
/// Number of remote parties the resource serves.
int resource_parties(const DarkStateSpec &spec);

PureState build(const DarkStateSpec &spec);

/// True iff for `trials` Haar-random U in SU(d), |U^{xN} psi - psi| < tol.
/// All subsystems must share one dimension.
bool verify_dark(const PureState &state, int trials, double tol, std::uint64_t seed = 0x5EED);

/// Dark states of N d-level particles exist iff N is a positive multiple of d.
bool existence_rule(int n_particles, int d);

/// One singlet-product resource per permutation of {0..m-1}, in
/// lexicographic permutation order. 1 <= m <= 5.
std::vector<PureState> enumerate_singlet_matchings(int m);

/// Parity sign (+1 / -1) of a permutation, identity positive.
int permutation_sign(const std::vector<int> &perm);

}  // namespace darkrsp

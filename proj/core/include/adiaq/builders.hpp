#pragma once

#include <cstdint>
#include <vector>

#include "adiaq/family.hpp"
#include "adiaq/operator.hpp"

namespace adiaq {

/// Per-qubit couplings a_j >= 0 for the driver
///   H0 = sum_j (a_j / 2) (I - sigma_x^{(j)}).
/// Each term annihilates the uniform state, so H0's ground state is the
/// uniform superposition with energy 0, and e^{-t H0} has strictly
/// positive entries whenever every a_j > 0.
struct TransverseFieldSpec {
  int n = 0;
  std::vector<double> couplings;  // empty means all ones

  std::vector<double> resolved_couplings() const;
};

Operator build_h0(const TransverseFieldSpec& spec);

/// Diagonal cost Hamiltonian from an energy table. Entries must be
/// nonnegative with minimum exactly zero, so the table's zeros are the
/// ground states.
struct CostSpec {
  int n = 0;
  std::vector<double> energies;
};

Operator build_cost(const CostSpec& spec);

/// Number of minimal entries in a diagonal operator's table.
std::uint64_t ground_multiplicity(const Operator& diag);

/// Search-problem finals for a marked basis state t.
///
/// build_grover_generator:  E(t) = 0, E(x) = 1 otherwise.
/// apply_grover_sign:  copy of h1 with the entry at t negated; this is the
///                    "flip one diagonal sign" construction, whose single
///                    negative eigenvalue marks t.
/// shift_variant:     E(t) = 0, E(x) = E_h1(x) + 1 otherwise, which opens
///                    a unit gap above the marked state.
Operator build_grover_generator(const TargetState& t);
Operator apply_grover_sign(const Operator& h1, const TargetState& t);
Operator shift_variant(const Operator& h1, const TargetState& t);

/// The exactly solvable qubit-wise family: H0 the unit-coupling transverse
/// field, H1 = sum_j (I + sigma_z^{(j)}) / 2, i.e. the diagonal table that
/// counts zero bits. Both endpoints are separable, so H(s) is too, and the
/// spectrum is known in closed form for every s.
InterpolatingFamily build_separable_pair(int n);

/// Random diagonal final: i.i.d. integer energies uniform on
/// [law_lo, law_hi], then shifted so the minimum is exactly zero.
struct RandomFinalSpec {
  int n = 0;
  std::int64_t law_lo = 0;
  std::int64_t law_hi = 0;  // <= 0 means "use n"
  std::uint64_t seed = 1;
};

Operator build_random_final(const RandomFinalSpec& spec);

/// Assemble a family from a driver spec and a diagonal final. The id
/// should name the construction (used in reports and artifact files).
InterpolatingFamily make_family(std::string id, const TransverseFieldSpec& driver,
                                Operator h1);

}  // namespace adiaq

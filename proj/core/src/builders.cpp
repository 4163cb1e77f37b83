#include "adiaq/builders.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "adiaq/basis.hpp"
#include "adiaq/errors.hpp"
#include "adiaq/rng.hpp"

namespace adiaq {

std::vector<double> TransverseFieldSpec::resolved_couplings() const {
  check_qubit_count(n);
  if (couplings.empty()) return std::vector<double>(static_cast<std::size_t>(n), 1.0);
  if (couplings.size() != static_cast<std::size_t>(n))
    throw ContractViolation("coupling list length does not match qubit count");
  return couplings;
}

Operator build_h0(const TransverseFieldSpec& spec) {
  const auto a = spec.resolved_couplings();
  bool any_positive = false;
  for (double aj : a) {
    if (aj < 0.0) throw ContractViolation("negative transverse-field coupling");
    if (aj > 0.0) any_positive = true;
  }
  if (!any_positive)
    throw DegenerateBuilderError("all couplings vanish; driver has no unique ground state");
  std::vector<QubitBlock> blocks(a.size());
  for (std::size_t j = 0; j < a.size(); ++j)
    blocks[j] = QubitBlock{0.5 * a[j], -0.5 * a[j], 0.5 * a[j]};
  return Operator::separable(spec.n, std::move(blocks));
}

Operator build_cost(const CostSpec& spec) {
  check_qubit_count(spec.n);
  if (spec.energies.size() != dimension(spec.n))
    throw ContractViolation("energy table length is not 2^n");
  double lo = spec.energies[0];
  for (double e : spec.energies) {
    if (e < 0.0) throw ContractViolation("negative cost energy");
    lo = std::min(lo, e);
  }
  if (lo != 0.0)
    throw ContractViolation("cost table minimum must be exactly zero");
  return Operator::diagonal(spec.n, spec.energies);
}

std::uint64_t ground_multiplicity(const Operator& diag) {
  if (!diag.is_diagonal())
    throw ContractViolation("ground_multiplicity expects a diagonal operator");
  const auto& table = diag.diagonal_table();
  double lo = table[0];
  for (double e : table) lo = std::min(lo, e);
  const double tol = 1e-12 * std::max(1.0, std::abs(lo));
  std::uint64_t hits = 0;
  for (double e : table)
    if (e - lo <= tol) ++hits;
  return hits;
}

Operator build_grover_generator(const TargetState& t) {
  t.validate();
  std::vector<double> table(dimension(t.n), 1.0);
  table[t.index] = 0.0;
  return Operator::diagonal(t.n, std::move(table));
}

Operator apply_grover_sign(const Operator& h1, const TargetState& t) {
  t.validate();
  if (!h1.is_diagonal())
    throw ContractViolation("sign flip expects a diagonal final Hamiltonian");
  if (h1.n() != t.n) throw ContractViolation("target size does not match operator");
  auto table = h1.diagonal_table();
  const double e = table[t.index];
  if (e < 0.0) throw ContractViolation("entry at target is already negative");
  if (e == 0.0)
    throw FlipNoEffectError("entry at target is zero; sign flip would do nothing");
  table[t.index] = -e;
  return Operator::diagonal(t.n, std::move(table));
}

Operator shift_variant(const Operator& h1, const TargetState& t) {
  t.validate();
  if (!h1.is_diagonal())
    throw ContractViolation("shift penalty expects a diagonal final Hamiltonian");
  if (h1.n() != t.n) throw ContractViolation("target size does not match operator");
  auto table = h1.diagonal_table();
  for (std::uint64_t k = 0; k < table.size(); ++k) {
    if (table[k] < 0.0) throw ContractViolation("negative entry in final Hamiltonian");
    table[k] = (k == t.index) ? 0.0 : table[k] + 1.0;
  }
  return Operator::diagonal(t.n, std::move(table));
}

InterpolatingFamily build_separable_pair(int n) {
  check_qubit_count(n);
  TransverseFieldSpec driver{n, {}};
  std::vector<double> table(dimension(n));
  for (std::uint64_t k = 0; k < table.size(); ++k)
    table[k] = static_cast<double>(zero_bits(k, n));
  // (I + sigma_z)/2 per qubit: eigenvalue 1 on bit 0, 0 on bit 1.
  std::vector<QubitBlock> blocks(static_cast<std::size_t>(n), QubitBlock{1.0, 0.0, 0.0});
  return InterpolatingFamily("separable(n=" + std::to_string(n) + ")",
                             build_h0(driver),
                             Operator::diagonal(n, std::move(table)),
                             Operator::separable(n, std::move(blocks)));
}

Operator build_random_final(const RandomFinalSpec& spec) {
  check_qubit_count(spec.n);
  const std::int64_t lo = spec.law_lo;
  const std::int64_t hi = (spec.law_hi > 0) ? spec.law_hi : spec.n;
  if (lo > hi) throw ContractViolation("empty integer law");
  if (lo < 0) throw ContractViolation("integer law must be nonnegative");
  Rng rng(spec.seed);
  std::vector<double> table(dimension(spec.n));
  std::int64_t min_drawn = hi;
  for (auto& e : table) {
    const auto v = static_cast<std::int64_t>(
        rng.uniform_int(static_cast<std::uint64_t>(lo), static_cast<std::uint64_t>(hi)));
    min_drawn = std::min(min_drawn, v);
    e = static_cast<double>(v);
  }
  for (auto& e : table) e -= static_cast<double>(min_drawn);
  return Operator::diagonal(spec.n, std::move(table));
}

InterpolatingFamily make_family(std::string id, const TransverseFieldSpec& driver,
                                Operator h1) {
  Operator h0 = build_h0(driver);
  if (h0.n() != h1.n())
    throw ContractViolation("driver and final act on different qubit counts");
  return InterpolatingFamily(std::move(id), std::move(h0), std::move(h1));
}

}  // namespace adiaq

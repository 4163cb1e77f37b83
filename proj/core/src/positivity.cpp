#include "adiaq/positivity.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "adiaq/basis.hpp"
#include "adiaq/errors.hpp"
#include "adiaq/parallel.hpp"

namespace adiaq {

QubitBlock single_qubit_factor(double a, double tau) {
  if (a < 0.0 || tau < 0.0)
    throw ContractViolation("factor needs nonnegative coupling and time");
  // e^{-x} cosh x and e^{-x} sinh x with x = tau a / 2, written through
  // e^{-2x} so the pair sums to exactly 1.
  const double decay = std::exp(-tau * a);
  return QubitBlock{0.5 * (1.0 + decay), 0.5 * (1.0 - decay), 0.5 * (1.0 + decay)};
}

TrotterApproximant::TrotterApproximant(const InterpolatingFamily& family, double s,
                                       int m)
    : n_(family.n()), s_(s), m_(m) {
  if (!(s >= 0.0 && s <= 1.0))
    throw ContractViolation("interpolation parameter outside [0,1]");
  if (m < 1) throw ContractViolation("step count must be positive");
  if (!family.h0().is_separable())
    throw ContractViolation("product form needs a qubit-wise driver");
  if (!family.h1().is_diagonal())
    throw ContractViolation("product form needs a diagonal final Hamiltonian");

  const double tau0 = (1.0 - s) / m;
  h0_factors.reserve(static_cast<std::size_t>(n_));
  for (const auto& blk : family.h0().separable_blocks()) {
    // Each driver block is (a/2)(I - sigma_x); recover a from the diagonal.
    if (std::abs(blk.d0 - blk.d1) > 1e-14 || std::abs(blk.off + blk.d0) > 1e-14)
      throw ContractViolation("driver block is not of transverse-field form");
    h0_factors.push_back(single_qubit_factor(2.0 * blk.d0, tau0));
  }

  const auto& table = family.h1().diagonal_table();
  h1_scale.resize(table.size());
  const double tau1 = s / m;
  for (std::size_t k = 0; k < table.size(); ++k)
    h1_scale[k] = std::exp(-tau1 * table[k]);
}

void TrotterApproximant::apply(std::span<const double> in,
                               std::span<double> out) const {
  const std::uint64_t dim = dimension(n_);
  if (in.size() != dim || out.size() != dim)
    throw ContractViolation("vector length does not match operator dimension");
  std::copy(in.begin(), in.end(), out.begin());
  for (int step = 0; step < m_; ++step) {
    // Rightmost factor first: the driver exponential, then the diagonal.
    for (int j = 1; j <= n_; ++j) {
      const auto& b = h0_factors[static_cast<std::size_t>(j - 1)];
      const std::uint64_t stride = std::uint64_t{1} << (n_ - j);
      for (std::uint64_t base = 0; base < dim; base += 2 * stride)
        for (std::uint64_t k = base; k < base + stride; ++k) {
          const double lo = out[k];
          const double hi = out[k + stride];
          out[k] = b.d0 * lo + b.off * hi;
          out[k + stride] = b.off * lo + b.d1 * hi;
        }
    }
    for (std::uint64_t k = 0; k < dim; ++k) out[k] *= h1_scale[k];
  }
}

StateVector TrotterApproximant::apply(const StateVector& v) const {
  if (v.n() != n_) throw ContractViolation("state size does not match operator");
  const std::uint64_t dim = dimension(n_);
  std::vector<double> re(dim), im(dim), re_out(dim), im_out(dim);
  for (std::uint64_t k = 0; k < dim; ++k) {
    re[k] = v.amplitudes()[k].real();
    im[k] = v.amplitudes()[k].imag();
  }
  apply(re, re_out);
  apply(im, im_out);
  std::vector<cxd> amps(dim);
  for (std::uint64_t k = 0; k < dim; ++k) amps[k] = cxd{re_out[k], im_out[k]};
  return StateVector(n_, std::move(amps));
}

StateVector trotter_exp_action(const InterpolatingFamily& family, double s, int m,
                               const StateVector& v) {
  return TrotterApproximant(family, s, m).apply(v);
}

std::vector<double> TrotterApproximant::dense() const {
  if (n_ > kMaxPositivityQubits)
    throw SizeGuardError("dense product limited to 10 qubits");
  const std::uint64_t dim = dimension(n_);
  std::vector<double> mat(dim * dim);
  std::vector<double> e(dim, 0.0), col(dim);
  for (std::uint64_t j = 0; j < dim; ++j) {
    e[j] = 1.0;
    apply(e, col);
    e[j] = 0.0;
    for (std::uint64_t i = 0; i < dim; ++i) mat[i * dim + j] = col[i];
  }
  return mat;
}

PositivityReport verify_matrix_positivity(const InterpolatingFamily& family, double s,
                                         int m_start, int threads) {
  if (family.n() > kMaxPositivityQubits)
    throw SizeGuardError("matrix positivity check limited to 10 qubits");
  if (m_start < 1) throw ContractViolation("step count must be positive");

  const std::uint64_t dim = dimension(family.n());
  auto min_entry_at = [&](int m) {
    TrotterApproximant prod(family, s, m);
    std::vector<double> col_min(dim);
    parallel_for(0, static_cast<std::int64_t>(dim), threads, [&](std::int64_t j) {
      std::vector<double> e(dim, 0.0), col(dim);
      e[static_cast<std::uint64_t>(j)] = 1.0;
      prod.apply(e, col);
      col_min[static_cast<std::uint64_t>(j)] =
          *std::min_element(col.begin(), col.end());
    });
    return *std::min_element(col_min.begin(), col_min.end());
  };

  PositivityReport rep;
  rep.family_id = family.id();
  rep.s = s;
  rep.check = "matrix";
  rep.tolerance = kMatrixPositivityTol;

  int m = m_start;
  double lo = min_entry_at(m);
  bool verdict = lo > kMatrixPositivityTol;
  constexpr int kMaxSteps = 1 << 14;
  while (m < kMaxSteps) {
    const double lo2 = min_entry_at(2 * m);
    const bool verdict2 = lo2 > kMatrixPositivityTol;
    if (verdict2 == verdict) break;
    m *= 2;
    lo = lo2;
    verdict = verdict2;
  }
  rep.trotter_m = m;
  rep.min_entry = lo;
  rep.positive = verdict;
  return rep;
}

PositivityReport verify_ground_positivity(const InterpolatingFamily& family, double s,
                                         const LanczosOptions& opts) {
  if (!(s >= 0.0 && s < 1.0))
    throw ContractViolation("ground positivity is defined for s in [0,1)");

  PositivityReport rep;
  rep.family_id = family.id();
  rep.s = s;
  rep.check = "ground-vector";
  rep.tolerance = kVectorPositivityTol;

  auto r = lowest_two(family.at(s), opts);
  if (r.ground_degenerate) {
    rep.applicable = false;
    rep.ground_multiplicity = 2;  // at least; exact count needs the full spectrum
    return rep;
  }

  // Fix the gauge: the largest-magnitude amplitude is made positive.
  double big = 0.0;
  for (double x : r.v0)
    if (std::abs(x) > std::abs(big)) big = x;
  const double sign = big < 0.0 ? -1.0 : 1.0;
  double lo = sign * r.v0[0];
  for (double x : r.v0) lo = std::min(lo, sign * x);
  rep.min_entry = lo;
  rep.positive = lo > kVectorPositivityTol;
  return rep;
}

}  // namespace adiaq

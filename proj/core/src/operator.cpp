#include "adiaq/operator.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "adiaq/errors.hpp"

namespace adiaq {

std::pair<double, double> QubitBlock::eigenvalues() const {
  const double mean = 0.5 * (d0 + d1);
  const double r = std::hypot(0.5 * (d0 - d1), off);
  return {mean - r, mean + r};
}

CsrMatrix CsrMatrix::from_triplets(
    std::uint64_t dim,
    std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> triplets) {
  // Accumulate (i,j) and its mirror; duplicate coordinates sum.
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> entries;
  for (const auto& [i, j, v] : triplets) {
    if (i >= dim || j >= dim)
      throw ContractViolation("sparse triplet out of range");
    entries[{i, j}] += v;
    if (i != j) entries[{j, i}] += v;
  }
  CsrMatrix m;
  m.dim = dim;
  m.row_ptr.assign(dim + 1, 0);
  m.col.reserve(entries.size());
  m.val.reserve(entries.size());
  for (const auto& [ij, v] : entries) m.row_ptr[ij.first + 1]++;
  for (std::uint64_t r = 0; r < dim; ++r) m.row_ptr[r + 1] += m.row_ptr[r];
  for (const auto& [ij, v] : entries) {  // map iterates row-major sorted
    m.col.push_back(ij.second);
    m.val.push_back(v);
  }
  return m;
}

Operator Operator::diagonal(int n, std::vector<double> energies) {
  check_qubit_count(n);
  if (energies.size() != dimension(n))
    throw ContractViolation("diagonal form requires exactly 2^n entries");
  return Operator(n, Diagonal{std::make_shared<const std::vector<double>>(
                         std::move(energies))});
}

Operator Operator::separable(int n, std::vector<QubitBlock> blocks) {
  check_qubit_count(n);
  if (blocks.size() != static_cast<std::size_t>(n))
    throw ContractViolation("separable form requires exactly n blocks");
  return Operator(n, Separable{std::make_shared<const std::vector<QubitBlock>>(
                         std::move(blocks))});
}

Operator Operator::sparse(int n, CsrMatrix m) {
  check_qubit_count(n);
  if (m.dim != dimension(n))
    throw ContractViolation("sparse form dimension != 2^n");
  return Operator(n, Sparse{std::make_shared<const CsrMatrix>(std::move(m))});
}

bool Operator::is_diagonal() const {
  return std::holds_alternative<Diagonal>(form_);
}
bool Operator::is_separable() const {
  return std::holds_alternative<Separable>(form_);
}
bool Operator::is_sparse() const {
  return std::holds_alternative<Sparse>(form_);
}
bool Operator::is_sum() const { return std::holds_alternative<Sum>(form_); }

const std::vector<double>& Operator::diagonal_table() const {
  if (const auto* d = std::get_if<Diagonal>(&form_)) return *d->table;
  throw ContractViolation("operator is not in diagonal form");
}

const std::vector<QubitBlock>& Operator::separable_blocks() const {
  if (const auto* s = std::get_if<Separable>(&form_)) return *s->blocks;
  throw ContractViolation("operator is not in separable form");
}

namespace {

template <typename T>
void check_spans(std::uint64_t dim, std::span<const T> in, std::span<T> out) {
  if (in.size() != dim || out.size() != dim)
    throw ContractViolation("matvec dimension mismatch");
}

}  // namespace

template <typename T>
void Operator::apply_add_impl(double coeff, std::span<const T> in,
                              std::span<T> out) const {
  const std::uint64_t d = dim();
  check_spans<T>(d, in, out);
  if (const auto* dg = std::get_if<Diagonal>(&form_)) {
    const auto& t = *dg->table;
    for (std::uint64_t i = 0; i < d; ++i) out[i] += coeff * t[i] * in[i];
  } else if (const auto* sp = std::get_if<Separable>(&form_)) {
    const auto& blocks = *sp->blocks;
    for (int j = 1; j <= n_; ++j) {
      const QubitBlock b = blocks[j - 1];
      const double c00 = coeff * b.d0, c01 = coeff * b.off,
                   c11 = coeff * b.d1;
      const std::uint64_t stride = std::uint64_t{1} << (n_ - j);
      // Walk all index pairs (i, i|stride) with bit j clear in i.
      for (std::uint64_t base = 0; base < d; base += 2 * stride) {
        for (std::uint64_t k = base; k < base + stride; ++k) {
          const T lo = in[k], hi = in[k + stride];
          out[k] += c00 * lo + c01 * hi;
          out[k + stride] += c01 * lo + c11 * hi;
        }
      }
    }
  } else if (const auto* cs = std::get_if<Sparse>(&form_)) {
    const CsrMatrix& m = *cs->m;
    for (std::uint64_t r = 0; r < d; ++r) {
      T acc{};
      for (std::uint64_t p = m.row_ptr[r]; p < m.row_ptr[r + 1]; ++p)
        acc += m.val[p] * in[m.col[p]];
      out[r] += coeff * acc;
    }
  } else {
    const auto& s = std::get<Sum>(form_);
    s.a->apply_add_impl<T>(coeff * s.ca, in, out);
    s.b->apply_add_impl<T>(coeff * s.cb, in, out);
  }
}

void Operator::apply(std::span<const double> in, std::span<double> out) const {
  check_spans<double>(dim(), in, out);
  std::fill(out.begin(), out.end(), 0.0);
  apply_add_impl<double>(1.0, in, out);
}

void Operator::apply(std::span<const cxd> in, std::span<cxd> out) const {
  check_spans<cxd>(dim(), in, out);
  std::fill(out.begin(), out.end(), cxd{});
  apply_add_impl<cxd>(1.0, in, out);
}

void Operator::apply_add(double coeff, std::span<const double> in,
                         std::span<double> out) const {
  apply_add_impl<double>(coeff, in, out);
}

void Operator::apply_add(double coeff, std::span<const cxd> in,
                         std::span<cxd> out) const {
  apply_add_impl<cxd>(coeff, in, out);
}

std::vector<double> Operator::dense() const {
  if (n_ > kMaxDenseQubits)
    throw SizeGuardError("dense materialization capped at n <= " +
                         std::to_string(kMaxDenseQubits));
  const std::uint64_t d = dim();
  std::vector<double> m(d * d, 0.0);
  // Column-by-column through the matvec contract keeps every form on the
  // same code path the solvers use.
  std::vector<double> e(d, 0.0), col(d);
  for (std::uint64_t j = 0; j < d; ++j) {
    e[j] = 1.0;
    apply(std::span<const double>(e), std::span<double>(col));
    for (std::uint64_t i = 0; i < d; ++i) m[i * d + j] = col[i];
    e[j] = 0.0;
  }
  return m;
}

Operator linear_combine(double a, const Operator& op1, double b,
                        const Operator& op2) {
  if (op1.n() != op2.n())
    throw ContractViolation("linear_combine: qubit count mismatch");
  if (op1.is_diagonal() && op2.is_diagonal()) {
    const auto& t1 = op1.diagonal_table();
    const auto& t2 = op2.diagonal_table();
    std::vector<double> t(t1.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = a * t1[i] + b * t2[i];
    return Operator::diagonal(op1.n(), std::move(t));
  }
  if (op1.is_separable() && op2.is_separable()) {
    const auto& b1 = op1.separable_blocks();
    const auto& b2 = op2.separable_blocks();
    std::vector<QubitBlock> blocks(b1.size());
    for (std::size_t j = 0; j < blocks.size(); ++j)
      blocks[j] = a * b1[j] + b * b2[j];
    return Operator::separable(op1.n(), std::move(blocks));
  }
  return Operator(op1.n(),
                  Operator::Sum{a, b, std::make_shared<const Operator>(op1),
                                std::make_shared<const Operator>(op2)});
}

StateVector matvec(const Operator& op, const StateVector& v) {
  if (op.n() != v.n())
    throw ContractViolation("matvec: operator and state qubit counts differ");
  StateVector out = StateVector::zero(v.n());
  op.apply(std::span<const cxd>(v.amplitudes()),
           std::span<cxd>(out.amplitudes()));
  return out;
}

}  // namespace adiaq

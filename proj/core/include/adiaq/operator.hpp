#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "adiaq/basis.hpp"
#include "adiaq/state.hpp"

namespace adiaq {

/// Symmetric 2x2 block acting on one qubit: [[d0, off], [off, d1]],
/// rows/columns ordered (bit 0, bit 1).
struct QubitBlock {
  double d0 = 0.0;
  double off = 0.0;
  double d1 = 0.0;

  friend QubitBlock operator+(QubitBlock a, QubitBlock b) {
    return {a.d0 + b.d0, a.off + b.off, a.d1 + b.d1};
  }
  friend QubitBlock operator*(double c, QubitBlock b) {
    return {c * b.d0, c * b.off, c * b.d1};
  }
  /// Eigenvalues of the block, ascending.
  std::pair<double, double> eigenvalues() const;
};

/// Row-compressed real symmetric matrix. Built from triplets; the builder
/// mirrors every off-diagonal entry so (i,j) == (j,i) holds exactly.
struct CsrMatrix {
  std::uint64_t dim = 0;
  std::vector<std::uint64_t> row_ptr;  // dim+1 entries
  std::vector<std::uint32_t> col;
  std::vector<double> val;

  static CsrMatrix from_triplets(
      std::uint64_t dim,
      std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> triplets);
};

/// An n-qubit real symmetric operator in one of three structural forms
/// (plus the lazy sum produced by mixed-form linear combinations), all
/// sharing one matrix-vector product contract. Instances are immutable
/// and cheap to copy.
class Operator {
 public:
  static Operator diagonal(int n, std::vector<double> energies);
  /// sum_j I x ... x M_j x ... x I with M_j acting on qubit j (1-based).
  static Operator separable(int n, std::vector<QubitBlock> blocks);
  static Operator sparse(int n, CsrMatrix m);

  int n() const { return n_; }
  std::uint64_t dim() const { return dimension(n_); }

  bool is_diagonal() const;
  bool is_separable() const;
  bool is_sparse() const;
  bool is_sum() const;

  /// Diagonal energy table; throws unless is_diagonal().
  const std::vector<double>& diagonal_table() const;
  /// Single-qubit blocks; throws unless is_separable().
  const std::vector<QubitBlock>& separable_blocks() const;

  /// out = H * in. All forms agree with the dense matrix product.
  void apply(std::span<const double> in, std::span<double> out) const;
  void apply(std::span<const cxd> in, std::span<cxd> out) const;

  /// out += coeff * H * in.
  void apply_add(double coeff, std::span<const double> in,
                 std::span<double> out) const;
  void apply_add(double coeff, std::span<const cxd> in,
                 std::span<cxd> out) const;

  /// Dense symmetric 2^n x 2^n materialization, row-major. Guarded by
  /// the dense qubit cap.
  std::vector<double> dense() const;

 private:
  struct Diagonal {
    std::shared_ptr<const std::vector<double>> table;
  };
  struct Separable {
    std::shared_ptr<const std::vector<QubitBlock>> blocks;
  };
  struct Sparse {
    std::shared_ptr<const CsrMatrix> m;
  };
  struct Sum {  // ca * a + cb * b, applied lazily
    double ca, cb;
    std::shared_ptr<const Operator> a, b;
  };
  using Form = std::variant<Diagonal, Separable, Sparse, Sum>;

  Operator(int n, Form form) : n_(n), form_(std::move(form)) {}

  template <typename T>
  void apply_add_impl(double coeff, std::span<const T> in,
                      std::span<T> out) const;

  friend Operator linear_combine(double a, const Operator& op1, double b,
                                 const Operator& op2);

  int n_;
  Form form_;
};

/// a*op1 + b*op2. Diagonal+Diagonal stays Diagonal; Separable+Separable
/// combines blockwise; mixed forms produce a lazy sum that applies both
/// summands, never a dense materialization.
Operator linear_combine(double a, const Operator& op1, double b,
                        const Operator& op2);

/// op * v through the uniform matvec contract.
StateVector matvec(const Operator& op, const StateVector& v);

}  // namespace adiaq

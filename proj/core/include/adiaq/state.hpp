#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "adiaq/basis.hpp"
#include "adiaq/rng.hpp"

namespace adiaq {

using cxd = std::complex<double>;

/// An n-qubit state: 2^n complex amplitudes in basis-index order.
class StateVector {
 public:
  StateVector(int n, std::vector<cxd> amplitudes)
      : n_(n), amp_(std::move(amplitudes)) {
    check_qubit_count(n_);
    if (amp_.size() != dimension(n_))
      throw ContractViolation("StateVector: amplitude count != 2^n");
  }

  static StateVector zero(int n) {
    check_qubit_count(n);
    return StateVector(n, std::vector<cxd>(dimension(n)));
  }

  /// The uniform superposition: every amplitude 2^{-n/2}.
  static StateVector uniform(int n) {
    check_qubit_count(n);
    const double a = 1.0 / std::sqrt(static_cast<double>(dimension(n)));
    return StateVector(n, std::vector<cxd>(dimension(n), cxd(a, 0.0)));
  }

  static StateVector basis_state(int n, std::uint64_t index) {
    check_qubit_count(n);
    if (index >= dimension(n))
      throw ContractViolation("basis_state: index out of range");
    std::vector<cxd> a(dimension(n));
    a[index] = 1.0;
    return StateVector(n, std::move(a));
  }

  /// Seeded Gaussian state, normalized.
  static StateVector random(int n, std::uint64_t seed) {
    check_qubit_count(n);
    Rng rng(seed);
    std::vector<cxd> a(dimension(n));
    for (auto& x : a) x = cxd(rng.normal(), rng.normal());
    StateVector v(n, std::move(a));
    v.normalize();
    return v;
  }

  int n() const { return n_; }
  std::uint64_t dim() const { return amp_.size(); }
  const std::vector<cxd>& amplitudes() const { return amp_; }
  std::vector<cxd>& amplitudes() { return amp_; }
  cxd operator[](std::uint64_t i) const { return amp_[i]; }

  double squared_norm() const {
    double s = 0.0;
    for (const auto& x : amp_) s += std::norm(x);
    return s;
  }
  double norm() const { return std::sqrt(squared_norm()); }

  void normalize() {
    const double nrm = norm();
    if (nrm == 0.0) throw ContractViolation("cannot normalize a zero state");
    for (auto& x : amp_) x /= nrm;
  }

  /// <this|other>, conjugating this.
  cxd inner(const StateVector& other) const {
    if (other.n_ != n_) throw ContractViolation("inner: qubit count mismatch");
    cxd s = 0.0;
    for (std::uint64_t i = 0; i < amp_.size(); ++i)
      s += std::conj(amp_[i]) * other.amp_[i];
    return s;
  }

 private:
  int n_;
  std::vector<cxd> amp_;
};

}  // namespace adiaq

#pragma once

#include <optional>
#include <string>

#include "adiaq/operator.hpp"

namespace adiaq {

/// A basis-state search target t_1..t_n, stored as a basis index.
struct TargetState {
  int n = 0;
  std::uint64_t index = 0;

  void validate() const {
    check_qubit_count(n);
    if (index >= dimension(n))
      throw ContractViolation("target index out of range");
  }
};

/// The pair (H0, H1) with evaluation H(s) = (1-s) H0 + s H1.
///
/// When both endpoints act qubit-wise (the exactly solvable family),
/// `h1_separable` holds H1's single-qubit form so H(s) stays in separable
/// form for every s; otherwise H(s) is a lazy two-term sum.
class InterpolatingFamily {
 public:
  InterpolatingFamily(std::string id, Operator h0, Operator h1,
                      std::optional<Operator> h1_separable = std::nullopt);

  const std::string& id() const { return id_; }
  int n() const { return h0_.n(); }
  const Operator& h0() const { return h0_; }
  const Operator& h1() const { return h1_; }

  Operator at(double s) const;

  /// True when H1 is diagonal with more than one minimal entry, i.e. the
  /// final ground space is degenerate. The gap of such a family must
  /// close as s -> 1.
  bool final_ground_degenerate() const { return final_ground_degenerate_; }

 private:
  std::string id_;
  Operator h0_, h1_;
  std::optional<Operator> h1_separable_;
  bool final_ground_degenerate_ = false;
};

}  // namespace adiaq

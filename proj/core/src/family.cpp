#include "adiaq/family.hpp"

#include <cmath>
#include <utility>

#include "adiaq/errors.hpp"

namespace adiaq {

namespace {

bool diagonal_ground_degenerate(const Operator& h1) {
  if (!h1.is_diagonal()) return false;
  const auto& table = h1.diagonal_table();
  double lo = table[0];
  for (double e : table) lo = std::min(lo, e);
  std::uint64_t hits = 0;
  const double tol = 1e-12 * std::max(1.0, std::abs(lo));
  for (double e : table)
    if (e - lo <= tol) ++hits;
  return hits > 1;
}

}  // namespace

InterpolatingFamily::InterpolatingFamily(std::string id, Operator h0, Operator h1,
                                         std::optional<Operator> h1_separable)
    : id_(std::move(id)),
      h0_(std::move(h0)),
      h1_(std::move(h1)),
      h1_separable_(std::move(h1_separable)) {
  if (h0_.n() != h1_.n())
    throw ContractViolation("family endpoints act on different qubit counts");
  if (h1_separable_) {
    if (!h1_separable_->is_separable() || h1_separable_->n() != h1_.n())
      throw ContractViolation("separable form of H1 does not match H1");
  }
  final_ground_degenerate_ = diagonal_ground_degenerate(h1_);
}

Operator InterpolatingFamily::at(double s) const {
  if (!(s >= 0.0 && s <= 1.0))
    throw ContractViolation("interpolation parameter outside [0,1]");
  if (h1_separable_ && h0_.is_separable())
    return linear_combine(1.0 - s, h0_, s, *h1_separable_);
  return linear_combine(1.0 - s, h0_, s, h1_);
}

}  // namespace adiaq

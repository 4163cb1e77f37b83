#pragma once

// Test-side oracles, written against Eigen directly so they share no code
// with the library paths they check.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "adiaq/operator.hpp"
#include "adiaq/sat.hpp"

namespace oracles {

// Dense symmetric matrix of an operator, assembled entry by entry from
// basis-vector applications.
Eigen::MatrixXd dense_of(const adiaq::Operator& op);

// exp(scale * M) for symmetric M via its eigendecomposition.
Eigen::MatrixXd sym_exp(const Eigen::MatrixXd& m, double scale);

// Violated-clause count evaluated clause by clause from the bit pattern.
int brute_force_violations(const adiaq::SatInstance& inst, std::uint64_t index);

// Sorted eigenvalues of a symmetric matrix.
Eigen::VectorXd sym_eigenvalues(const Eigen::MatrixXd& m);

// All 2^n subset sums of the couplings, sorted ascending.
std::vector<double> subset_sums(const std::vector<double>& couplings);

}  // namespace oracles

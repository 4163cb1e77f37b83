#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "adiaq/builders.hpp"

namespace adiaq {

/// A literal: variable index in [1, n], positive or negated.
struct Literal {
  int var = 0;
  bool positive = true;

  friend bool operator==(const Literal&, const Literal&) = default;
};

struct Clause {
  Literal lits[3];
};

/// A 3-SAT instance over n variables. The clause count is capped at
/// 8 * C(n,3), the number of distinct 3-variable clauses, which keeps the
/// maximum energy O(n^3).
class SatInstance {
 public:
  SatInstance(int num_vars, std::vector<Clause> clauses);

  int num_vars() const { return n_; }
  const std::vector<Clause>& clauses() const { return clauses_; }

  /// True when `assignment` (bit j of the basis index, bit value 0 = true)
  /// satisfies every clause.
  bool satisfied_by(std::uint64_t assignment_index) const;

  /// Number of clauses violated by the assignment.
  int violated_count(std::uint64_t assignment_index) const;

 private:
  int n_;
  std::vector<Clause> clauses_;
};

/// Parse DIMACS CNF text. Clauses must have exactly three literals over
/// distinct variables; violations raise FormatError with the line number.
SatInstance parse_dimacs(std::istream& in);
SatInstance parse_dimacs_file(const std::string& path);

std::string to_dimacs(const SatInstance& inst);

/// Energy table of violated-clause counts, one entry per assignment.
/// The assignment encoding matches basis indices: qubit j holds variable
/// j, bit value 0 means the variable is true.
CostSpec encode_energy(const SatInstance& inst);

/// Uniform random instance: each clause picks three distinct variables
/// uniformly and independent sign flips. Deterministic in the seed.
SatInstance random_instance(int num_vars, int num_clauses, std::uint64_t seed);

}  // namespace adiaq

#pragma once

#include <cstdint>
#include <vector>

#include "adiaq/errors.hpp"

namespace adiaq {

/// Computational-basis conventions used throughout the library.
///
/// A basis state |k_1 ... k_n> is stored as the integer whose MOST
/// significant bit (within the low n bits) is k_1, so lexicographic
/// enumeration of bit strings matches ascending index order. Bit value 0
/// corresponds to the sigma_z eigenvalue +1.
inline constexpr int kMaxQubits = 24;      // matvec / state-vector cap
inline constexpr int kMaxDenseQubits = 14; // dense materialization cap

inline std::uint64_t dimension(int n) { return std::uint64_t{1} << n; }

inline void check_qubit_count(int n) {
  if (n < 1 || n > kMaxQubits)
    throw ContractViolation("qubit count must be in [1, " +
                            std::to_string(kMaxQubits) + "], got " +
                            std::to_string(n));
}

/// Value of bit k_j (1-based qubit label) of basis index `idx`.
inline int bit_of(std::uint64_t idx, int j, int n) {
  return static_cast<int>((idx >> (n - j)) & 1u);
}

/// Number of 0-bits among k_1..k_n (i.e. qubits with sigma_z = +1).
inline int zero_bits(std::uint64_t idx, int n) {
  return n - static_cast<int>(__builtin_popcountll(idx));
}

inline std::vector<int> index_to_bits(std::uint64_t idx, int n) {
  std::vector<int> bits(n);
  for (int j = 1; j <= n; ++j) bits[j - 1] = bit_of(idx, j, n);
  return bits;
}

inline std::uint64_t bits_to_index(const std::vector<int>& bits) {
  std::uint64_t idx = 0;
  for (int b : bits) idx = (idx << 1) | static_cast<std::uint64_t>(b & 1);
  return idx;
}

}  // namespace adiaq

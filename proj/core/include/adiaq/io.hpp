#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "adiaq/evolution.hpp"
#include "adiaq/positivity.hpp"
#include "adiaq/spectral.hpp"

namespace adiaq {

/// Shortest round-trip decimal form (17 significant digits).
std::string format_double(double x);

std::uint64_t fnv1a64(std::span<const unsigned char> bytes);
std::uint64_t fnv1a64(const std::string& text);
std::uint64_t file_checksum(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

/// Gap profiles. The CSV holds the per-sample table; the JSON adds g_min,
/// s_star, the refinement record and solver totals, and can be read back
/// for comparisons.
std::string gap_profile_csv(const GapProfile& profile);
std::string gap_profile_json(const GapProfile& profile);
GapProfile parse_gap_profile_json(const std::string& text);

/// Energy tables: text form is one value per line; binary form is a small
/// tagged container (magic, version, count, raw little-endian doubles).
std::string energy_table_csv(std::span<const double> table);
std::vector<double> parse_energy_table_csv(const std::string& text);
void write_energy_table_binary(const std::string& path, std::span<const double> table);
std::vector<double> read_energy_table_binary(const std::string& path);

std::string evolution_trace_csv(const EvolutionResult& result);

std::string positivity_json_line(const PositivityReport& report);

std::string scaling_csv(const ScalingStudy& study);
std::string scaling_json(const ScalingStudy& study);

std::string spectrum_levels_csv(const SpectrumResult& spectrum);

struct CompareReport {
  bool grids_match = false;
  double max_gap_diff = 0.0;
  double s_at_max_diff = 0.0;
  double g_min_ratio = 0.0;   // b over a
  double s_star_shift = 0.0;  // b minus a
};

/// Pointwise comparison of two profiles over the same grid; differing
/// grids raise GridMismatchError.
CompareReport compare_profiles(const GapProfile& a, const GapProfile& b);
std::string compare_report_json(const CompareReport& report, const std::string& a_id,
                                const std::string& b_id);

}  // namespace adiaq

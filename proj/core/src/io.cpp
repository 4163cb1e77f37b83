#include "adiaq/io.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "adiaq/errors.hpp"

namespace adiaq {

using nlohmann::json;

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::uint64_t fnv1a64(std::span<const unsigned char> bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t fnv1a64(const std::string& text) {
  return fnv1a64(std::span<const unsigned char>(
      reinterpret_cast<const unsigned char*>(text.data()), text.size()));
}

std::uint64_t file_checksum(const std::string& path) {
  return fnv1a64(read_text_file(path));
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw FormatError("write to '" + path + "' failed");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string gap_profile_csv(const GapProfile& profile) {
  std::ostringstream out;
  out << "s,e0,e1,gap,residual0,residual1\n";
  for (const auto& p : profile.samples)
    out << format_double(p.s) << ',' << format_double(p.e0) << ','
        << format_double(p.e1) << ',' << format_double(p.e1 - p.e0) << ','
        << format_double(p.residual0) << ',' << format_double(p.residual1) << '\n';
  return out.str();
}

namespace {

json profile_to_json(const GapProfile& p) {
  json samples = json::array();
  for (const auto& s : p.samples)
    samples.push_back({{"s", s.s},
                       {"e0", s.e0},
                       {"e1", s.e1},
                       {"residual0", s.residual0},
                       {"residual1", s.residual1}});
  return json{{"format", "adiaq-gap-profile/1"},
              {"family", p.family_id},
              {"g_min", p.g_min},
              {"s_star", p.s_star},
              {"samples", samples},
              {"refinement",
               {{"bracket_lo", p.refinement.bracket_lo},
                {"bracket_hi", p.refinement.bracket_hi},
                {"iterations", p.refinement.iterations},
                {"extra_evaluations", p.refinement.extra_evaluations},
                {"densified", p.refinement.densified},
                {"converged_on_gap", p.refinement.converged_on_gap}}},
              {"solver", {{"matvecs", p.total_stats.matvecs},
                          {"restarts", p.total_stats.restarts}}}};
}

}  // namespace

std::string gap_profile_json(const GapProfile& profile) {
  return profile_to_json(profile).dump(2) + "\n";
}

GapProfile parse_gap_profile_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("bad profile JSON: ") + e.what());
  }
  if (j.value("format", "") != "adiaq-gap-profile/1")
    throw FormatError("not a gap profile file");
  GapProfile p;
  p.family_id = j.value("family", "");
  p.g_min = j.at("g_min").get<double>();
  p.s_star = j.at("s_star").get<double>();
  for (const auto& s : j.at("samples"))
    p.samples.push_back(GapSample{s.at("s").get<double>(), s.at("e0").get<double>(),
                                  s.at("e1").get<double>(),
                                  s.value("residual0", 0.0),
                                  s.value("residual1", 0.0)});
  if (j.contains("refinement")) {
    const auto& r = j["refinement"];
    p.refinement.bracket_lo = r.value("bracket_lo", 0.0);
    p.refinement.bracket_hi = r.value("bracket_hi", 0.0);
    p.refinement.iterations = r.value("iterations", 0);
    p.refinement.extra_evaluations = r.value("extra_evaluations", 0);
    p.refinement.densified = r.value("densified", false);
    p.refinement.converged_on_gap = r.value("converged_on_gap", false);
  }
  return p;
}

std::string energy_table_csv(std::span<const double> table) {
  std::ostringstream out;
  for (double e : table) out << format_double(e) << '\n';
  return out.str();
}

std::vector<double> parse_energy_table_csv(const std::string& text) {
  std::vector<double> table;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    double v = 0.0;
    const char* b = line.data() + first;
    const char* e = line.data() + line.size();
    const auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || ptr != e)
      throw FormatError("expected one number per line", lineno);
    table.push_back(v);
  }
  if (table.empty()) throw FormatError("empty energy table");
  return table;
}

namespace {

constexpr char kTableMagic[4] = {'A', 'Q', 'T', 'B'};
constexpr std::uint32_t kTableVersion = 1;

}  // namespace

void write_energy_table_binary(const std::string& path,
                               std::span<const double> table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  const std::uint64_t count = table.size();
  out.write(kTableMagic, 4);
  out.write(reinterpret_cast<const char*>(&kTableVersion), 4);
  out.write(reinterpret_cast<const char*>(&count), 8);
  out.write(reinterpret_cast<const char*>(table.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
  if (!out) throw FormatError("write to '" + path + "' failed");
}

std::vector<double> read_energy_table_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'");
  char magic[4];
  std::uint32_t version = 0;
  std::uint64_t count = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&version), 4);
  in.read(reinterpret_cast<char*>(&count), 8);
  if (!in || std::memcmp(magic, kTableMagic, 4) != 0)
    throw FormatError("not an energy table file");
  if (version != kTableVersion) throw FormatError("unsupported table version");
  if (count == 0 || count > (std::uint64_t{1} << 30))
    throw FormatError("implausible table length");
  std::vector<double> table(count);
  in.read(reinterpret_cast<char*>(table.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (!in) throw FormatError("truncated energy table file");
  return table;
}

std::string evolution_trace_csv(const EvolutionResult& result) {
  std::ostringstream out;
  out << "t,s,ground_overlap,norm_drift\n";
  for (const auto& p : result.trace)
    out << format_double(p.t) << ',' << format_double(p.s) << ','
        << format_double(p.ground_overlap) << ',' << format_double(p.norm_drift)
        << '\n';
  return out.str();
}

std::string positivity_json_line(const PositivityReport& r) {
  json j{{"family", r.family_id}, {"s", r.s},         {"check", r.check},
         {"applicable", r.applicable}, {"positive", r.positive},
         {"min_entry", r.min_entry},   {"tolerance", r.tolerance}};
  if (r.check == "matrix") j["trotter_m"] = r.trotter_m;
  if (!r.applicable) j["ground_multiplicity"] = r.ground_multiplicity;
  return j.dump() + "\n";
}

std::string scaling_csv(const ScalingStudy& study) {
  std::ostringstream out;
  out << "n,g_min,s_star,t_star,bracketed,reduced_sector,fidelity_at_t_star\n";
  for (const auto& p : study.points)
    out << p.n << ',' << format_double(p.g_min) << ',' << format_double(p.s_star)
        << ',' << format_double(p.t_star) << ',' << (p.bracketed ? 1 : 0) << ','
        << (p.reduced_sector ? 1 : 0) << ','
        << format_double(p.fidelity_at_t_star) << '\n';
  return out.str();
}

std::string scaling_json(const ScalingStudy& study) {
  json points = json::array();
  for (const auto& p : study.points) {
    json curve = json::array();
    for (const auto& [t, f] : p.fidelity_curve) curve.push_back({{"t", t}, {"f", f}});
    points.push_back({{"n", p.n},
                      {"g_min", p.g_min},
                      {"s_star", p.s_star},
                      {"t_star", p.t_star},
                      {"bracketed", p.bracketed},
                      {"reduced_sector", p.reduced_sector},
                      {"fidelity_at_t_star", p.fidelity_at_t_star},
                      {"fidelity_curve", curve}});
  }
  json j{{"format", "adiaq-scaling/1"},
         {"points", points},
         {"regression",
          {{"slope_log2t_vs_n", study.slope_log2t_vs_n},
           {"slope_logt_vs_log_inv_gap", study.slope_logt_vs_log_inv_gap},
           {"intercept_logt", study.intercept_logt}}}};
  return j.dump(2) + "\n";
}

std::string spectrum_levels_csv(const SpectrumResult& spectrum) {
  std::ostringstream out;
  out << "level,energy,multiplicity\n";
  for (std::size_t k = 0; k < spectrum.levels.size(); ++k)
    out << k << ',' << format_double(spectrum.levels[k].first) << ','
        << spectrum.levels[k].second << '\n';
  return out.str();
}

CompareReport compare_profiles(const GapProfile& a, const GapProfile& b) {
  if (a.samples.size() != b.samples.size())
    throw GridMismatchError("profiles sampled on different grids");
  for (std::size_t i = 0; i < a.samples.size(); ++i)
    if (a.samples[i].s != b.samples[i].s)
      throw GridMismatchError("profiles sampled on different grids");
  CompareReport rep;
  rep.grids_match = true;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    const double ga = a.samples[i].e1 - a.samples[i].e0;
    const double gb = b.samples[i].e1 - b.samples[i].e0;
    if (std::abs(gb - ga) >= rep.max_gap_diff) {
      rep.max_gap_diff = std::abs(gb - ga);
      rep.s_at_max_diff = a.samples[i].s;
    }
  }
  rep.g_min_ratio = a.g_min != 0.0 ? b.g_min / a.g_min
                                   : std::numeric_limits<double>::infinity();
  rep.s_star_shift = b.s_star - a.s_star;
  return rep;
}

std::string compare_report_json(const CompareReport& rep, const std::string& a_id,
                                const std::string& b_id) {
  json j{{"format", "adiaq-compare/1"},
         {"a", a_id},
         {"b", b_id},
         {"grids_match", rep.grids_match},
         {"max_gap_diff", rep.max_gap_diff},
         {"s_at_max_diff", rep.s_at_max_diff},
         {"g_min_ratio", rep.g_min_ratio},
         {"s_star_shift", rep.s_star_shift}};
  return j.dump(2) + "\n";
}

}  // namespace adiaq

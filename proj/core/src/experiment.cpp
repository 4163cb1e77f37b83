#include "adiaq/experiment.hpp"

#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <string_view>

#include "adiaq/builders.hpp"
#include "adiaq/errors.hpp"
#include "adiaq/evolution.hpp"
#include "adiaq/io.hpp"
#include "adiaq/positivity.hpp"
#include "adiaq/sat.hpp"
#include "adiaq/spectral.hpp"
#include "adiaq/version.hpp"

namespace adiaq {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr std::string_view kConfigFormat = "adiaq-config/1";

const std::vector<std::string>& known_kinds() {
  static const std::vector<std::string> kinds{
      "gap-sweep",  "separable", "grover-search", "gh1-search",    "shift-search",
      "random-final", "sat-gap", "positivity",    "evolve",        "scaling-study"};
  return kinds;
}

std::string trim(std::string_view sv) {
  const auto b = sv.find_first_not_of(" \t");
  if (b == std::string_view::npos) return "";
  const auto e = sv.find_last_not_of(" \t");
  return std::string(sv.substr(b, e - b + 1));
}

template <typename T>
T parse_number(const std::string& value, std::size_t lineno) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw FormatError("bad number '" + value + "'", lineno);
  return out;
}

double parse_float(const std::string& value, std::size_t lineno) {
  try {
    std::size_t used = 0;
    const double out = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("");
    return out;
  } catch (const std::exception&) {
    throw FormatError("bad number '" + value + "'", lineno);
  }
}

std::vector<double> parse_float_list(const std::string& value, std::size_t lineno) {
  std::vector<double> out;
  std::istringstream in(value);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) throw FormatError("empty list entry", lineno);
    out.push_back(parse_float(item, lineno));
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool saw_format = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw FormatError("expected 'key = value'", lineno);
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (!saw_format) {
      if (key != "format" || value != kConfigFormat)
        throw FormatError("first entry must be 'format = adiaq-config/1'", lineno);
      saw_format = true;
      continue;
    }
    if (key == "kind") c.kind = value;
    else if (key == "family") c.family = value;
    else if (key == "n") c.n = parse_number<int>(value, lineno);
    else if (key == "n_lo") c.n_lo = parse_number<int>(value, lineno);
    else if (key == "n_hi") c.n_hi = parse_number<int>(value, lineno);
    else if (key == "target") c.target = parse_number<std::uint64_t>(value, lineno);
    else if (key == "seed") c.seed = parse_number<std::uint64_t>(value, lineno);
    else if (key == "cnf") c.cnf = value;
    else if (key == "clauses") c.clauses = parse_number<int>(value, lineno);
    else if (key == "law_lo") c.law_lo = parse_number<std::int64_t>(value, lineno);
    else if (key == "law_hi") c.law_hi = parse_number<std::int64_t>(value, lineno);
    else if (key == "grid") c.grid = parse_number<int>(value, lineno);
    else if (key == "tol") c.tol = parse_float(value, lineno);
    else if (key == "total_time") c.total_time = parse_float(value, lineno);
    else if (key == "f_star") c.f_star = parse_float(value, lineno);
    else if (key == "trotter_m") c.trotter_m = parse_number<int>(value, lineno);
    else if (key == "s_values") c.s_values = parse_float_list(value, lineno);
    else if (key == "trace_samples") c.trace_samples = parse_number<int>(value, lineno);
    else if (key == "threads") c.threads = parse_number<int>(value, lineno);
    else if (key == "out") c.out_dir = value;
    else throw FormatError("unknown key '" + key + "'", lineno);
  }
  if (!saw_format) throw FormatError("missing 'format = adiaq-config/1' line");
  if (c.kind.empty()) throw FormatError("config sets no kind");
  return c;
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "format = " << kConfigFormat << '\n';
  out << "kind = " << c.kind << '\n';
  if (!c.family.empty()) out << "family = " << c.family << '\n';
  out << "n = " << c.n << '\n';
  out << "n_lo = " << c.n_lo << '\n';
  out << "n_hi = " << c.n_hi << '\n';
  out << "target = " << c.target << '\n';
  out << "seed = " << c.seed << '\n';
  if (!c.cnf.empty()) out << "cnf = " << c.cnf << '\n';
  out << "clauses = " << c.clauses << '\n';
  out << "law_lo = " << c.law_lo << '\n';
  out << "law_hi = " << c.law_hi << '\n';
  out << "grid = " << c.grid << '\n';
  out << "tol = " << format_double(c.tol) << '\n';
  out << "total_time = " << format_double(c.total_time) << '\n';
  out << "f_star = " << format_double(c.f_star) << '\n';
  out << "trotter_m = " << c.trotter_m << '\n';
  if (!c.s_values.empty()) {
    out << "s_values = ";
    for (std::size_t i = 0; i < c.s_values.size(); ++i)
      out << (i ? "," : "") << format_double(c.s_values[i]);
    out << '\n';
  }
  out << "trace_samples = " << c.trace_samples << '\n';
  out << "threads = " << c.threads << '\n';
  out << "out = " << c.out_dir << '\n';
  return out.str();
}

ExperimentConfig load_config_file(const std::string& path) {
  return parse_config(read_text_file(path));
}

namespace {

std::string default_family(const std::string& kind) {
  if (kind == "grover-search") return "grover";
  if (kind == "gh1-search") return "gh1";
  if (kind == "shift-search") return "shift";
  if (kind == "random-final") return "random";
  if (kind == "sat-gap") return "sat";
  if (kind == "scaling-study") return "shift";
  return "separable";
}

std::vector<double> zero_count_table(int n) {
  std::vector<double> table(dimension(n));
  for (std::uint64_t k = 0; k < table.size(); ++k)
    table[k] = static_cast<double>(zero_bits(k, n));
  return table;
}

}  // namespace

InterpolatingFamily family_from_config(const ExperimentConfig& c, int n) {
  const std::string name = c.family.empty() ? default_family(c.kind) : c.family;
  const TransverseFieldSpec driver{n, {}};
  const TargetState target{n, c.target};
  const std::string tn = "n=" + std::to_string(n);

  if (name == "separable") return build_separable_pair(n);
  if (name == "grover") {
    return make_family("grover(" + tn + ",t=" + std::to_string(c.target) + ")",
                       driver, build_grover_generator(target));
  }
  if (name == "gh1") {
    auto base = Operator::diagonal(n, zero_count_table(n));
    return make_family("gh1(" + tn + ",t=" + std::to_string(c.target) + ")", driver,
                       apply_grover_sign(base, target));
  }
  if (name == "shift") {
    auto base = Operator::diagonal(n, zero_count_table(n));
    return make_family("shift(" + tn + ",t=" + std::to_string(c.target) + ")", driver,
                       shift_variant(base, target));
  }
  if (name == "random") {
    RandomFinalSpec spec{n, c.law_lo, c.law_hi, c.seed};
    return make_family("random(" + tn + ",seed=" + std::to_string(c.seed) + ")",
                       driver, build_random_final(spec));
  }
  if (name == "sat") {
    SatInstance inst = !c.cnf.empty()
                           ? parse_dimacs_file(c.cnf)
                           : random_instance(n, c.clauses > 0 ? c.clauses : 4 * n,
                                             c.seed);
    if (inst.num_vars() != n)
      throw ContractViolation("instance variable count does not match n");
    auto table = encode_energy(inst);
    // The raw violated-count table is the final Hamiltonian; its minimum
    // is zero exactly when the instance is satisfiable.
    auto h1 = Operator::diagonal(table.n, std::move(table.energies));
    const std::string id =
        !c.cnf.empty()
            ? "sat(" + tn + ",file=" + fs::path(c.cnf).filename().string() + ")"
            : "sat(" + tn + ",m=" + std::to_string(inst.clauses().size()) +
                  ",seed=" + std::to_string(c.seed) + ")";
    return make_family(id, TransverseFieldSpec{n, {}}, std::move(h1));
  }
  throw ContractViolation("unknown family '" + name + "'");
}

namespace {

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const DegenerateBuilderError*>(&e)) return "degenerate-builder";
  if (dynamic_cast<const FlipNoEffectError*>(&e)) return "flip-no-effect";
  if (dynamic_cast<const GridMismatchError*>(&e)) return "grid-mismatch";
  if (dynamic_cast<const ContractViolation*>(&e)) return "contract-violation";
  if (dynamic_cast<const SizeGuardError*>(&e)) return "size-guard";
  if (dynamic_cast<const FormatError*>(&e)) return "format-error";
  if (dynamic_cast<const ConvergenceError*>(&e)) return "convergence-failure";
  if (dynamic_cast<const RankToleranceError*>(&e)) return "rank-tolerance";
  if (dynamic_cast<const StiffnessError*>(&e)) return "stiffness";
  if (dynamic_cast<const IntegratorError*>(&e)) return "integrator-failure";
  if (dynamic_cast<const Error*>(&e)) return "error";
  return "unexpected";
}

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
  return buf;
}

class Sink {
 public:
  explicit Sink(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  void emit(const std::string& name, const std::string& content) {
    write_text_file((dir_ / name).string(), content);
    outputs_.push_back({{"file", name},
                        {"bytes", content.size()},
                        {"fnv1a64", hex64(fnv1a64(content))}});
  }

  void emit_binary_table(const std::string& name, std::span<const double> table) {
    const auto path = (dir_ / name).string();
    write_energy_table_binary(path, table);
    const std::string bytes = read_text_file(path);
    outputs_.push_back({{"file", name},
                        {"bytes", bytes.size()},
                        {"fnv1a64", hex64(fnv1a64(bytes))}});
  }

  const fs::path& dir() const { return dir_; }
  const json& outputs() const { return outputs_; }

 private:
  fs::path dir_;
  json outputs_;
};

SweepOptions sweep_options(const ExperimentConfig& c) {
  SweepOptions opts;
  opts.solver.tol = c.tol;
  opts.threads = c.threads;
  return opts;
}

json profile_summary(const GapProfile& p) {
  return json{{"family", p.family_id},
              {"g_min", p.g_min},
              {"s_star", p.s_star},
              {"samples", p.samples.size()}};
}

void run_sweep_kind(const ExperimentConfig& c, Sink& sink, json& summary) {
  auto family = family_from_config(c, c.n);
  GapProfile profile;
  bool reduced = false;

  const bool search_kind = c.kind == "grover-search" || c.kind == "gh1-search" ||
                           c.kind == "shift-search";
  if (search_kind) {
    try {
      ReducedSearchSubspace red(family, TargetState{c.n, c.target});
      profile = reduced_gap_profile(red, uniform_grid(c.grid));
      profile.family_id = family.id() + "/reduced";
      reduced = true;
    } catch (const RankToleranceError&) {
      if (c.n > 16) throw;  // full sweep would be too large to fall back to
      profile = gap_sweep(family, uniform_grid(c.grid), sweep_options(c));
    }
  } else {
    profile = gap_sweep(family, uniform_grid(c.grid), sweep_options(c));
  }

  sink.emit("gap_profile.csv", gap_profile_csv(profile));
  sink.emit("gap_profile.json", gap_profile_json(profile));
  summary = profile_summary(profile);
  summary["reduced_sector"] = reduced;

  if (c.kind == "random-final" || c.kind == "sat-gap") {
    const auto& table = family.h1().diagonal_table();
    sink.emit("energy_table.csv", energy_table_csv(table));
    sink.emit_binary_table("energy_table.bin", table);
    summary["ground_multiplicity"] = ground_multiplicity(family.h1());
    summary["final_ground_degenerate"] = family.final_ground_degenerate();
    double top = table[0];
    for (double e : table) top = std::max(top, e);
    summary["max_energy"] = top;
  }
  if (c.kind == "sat-gap") {
    double lo = family.h1().diagonal_table()[0];
    for (double e : family.h1().diagonal_table()) lo = std::min(lo, e);
    summary["satisfiable"] = lo == 0.0;
    if (c.cnf.empty()) {
      SatInstance inst = random_instance(c.n, c.clauses > 0 ? c.clauses : 4 * c.n,
                                         c.seed);
      sink.emit("instance.cnf", to_dimacs(inst));
      summary["clauses"] = inst.clauses().size();
    }
  }
}

void run_separable_kind(const ExperimentConfig& c, Sink& sink, json& summary) {
  const auto grid = uniform_grid(c.grid);
  GapProfile profile;
  profile.family_id = "separable(n=" + std::to_string(c.n) + ")/closed-form";
  profile.samples.reserve(grid.size());
  for (double s : grid) {
    const double q = 1.0 - 2.0 * s + 2.0 * s * s;
    const double root = std::sqrt(q);
    const double e0 = 0.5 * c.n * (1.0 - root);
    profile.samples.push_back(GapSample{s, e0, e0 + root, 0.0, 0.0});
  }
  profile.g_min = std::sqrt(0.5);
  profile.s_star = 0.5;
  profile.refinement.bracket_lo = 0.5;
  profile.refinement.bracket_hi = 0.5;
  sink.emit("gap_profile.csv", gap_profile_csv(profile));
  sink.emit("gap_profile.json", gap_profile_json(profile));
  sink.emit("levels_mid.csv", spectrum_levels_csv(separable_closed_form(c.n, 0.5)));
  summary = profile_summary(profile);

  if (c.n <= kMaxDenseSpectrumQubits) {
    // Cross-check the closed form against dense spectra on a coarse grid.
    auto family = build_separable_pair(c.n);
    double worst = 0.0;
    for (int k = 0; k <= 8; ++k) {
      const double s = k / 8.0;
      const auto dense = dense_spectrum(family.at(s));
      const auto exact = separable_closed_form(c.n, s);
      for (std::size_t i = 0; i < dense.eigenvalues.size(); ++i)
        worst = std::max(worst, std::abs(dense.eigenvalues[i] - exact.eigenvalues[i]));
    }
    summary["closed_vs_dense_max_dev"] = worst;
  }
}

void run_positivity_kind(const ExperimentConfig& c, Sink& sink, json& summary) {
  auto family = family_from_config(c, c.n);
  std::vector<double> points = c.s_values;
  if (points.empty())
    points = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99, 1.0};

  std::string lines;
  bool all_matrix_below_one = true;
  bool matrix_at_one = true;
  bool saw_one = false;
  for (double s : points) {
    auto matrix = verify_matrix_positivity(family, s, c.trotter_m, c.threads);
    lines += positivity_json_line(matrix);
    if (s < 1.0) {
      if (!matrix.positive) all_matrix_below_one = false;
      LanczosOptions lo;
      lo.tol = std::min(c.tol, 1e-12);
      auto ground = verify_ground_positivity(family, s, lo);
      lines += positivity_json_line(ground);
    } else {
      saw_one = true;
      matrix_at_one = matrix.positive;
    }
  }
  sink.emit("positivity.jsonl", lines);
  summary = json{{"family", family.id()},
                 {"points", points.size()},
                 {"all_matrix_positive_below_1", all_matrix_below_one}};
  if (saw_one) summary["matrix_positive_at_1"] = matrix_at_one;
}

void run_evolve_kind(const ExperimentConfig& c, Sink& sink, json& summary) {
  if (!(c.total_time > 0.0))
    throw ContractViolation("evolve needs total_time > 0");
  auto family = family_from_config(c, c.n);
  EvolutionSpec spec;
  spec.total_time = c.total_time;
  spec.tol = c.tol;
  spec.trace_samples = c.trace_samples;
  auto result = evolve(family, StateVector::uniform(c.n), spec);
  sink.emit("trace.csv", evolution_trace_csv(result));
  summary = json{{"family", family.id()},
                 {"total_time", c.total_time},
                 {"final_fidelity", result.final_fidelity},
                 {"final_norm_drift", result.final_norm_drift},
                 {"steps", result.stats.steps},
                 {"rejected", result.stats.rejected},
                 {"matvecs", result.stats.matvecs}};
}

void run_scaling_kind(const ExperimentConfig& c, Sink& sink, json& summary) {
  if (c.n_lo < 2 || c.n_lo > c.n_hi)
    throw ContractViolation("bad size range");
  if (c.n_hi > 12)
    throw SizeGuardError("scaling study capped at 12 qubits per point");
  std::vector<int> sizes;
  for (int n = c.n_lo; n <= c.n_hi; ++n) sizes.push_back(n);

  ScalingOptions opts;
  opts.f_star = c.f_star;
  opts.sweep_points = std::min(c.grid, 65);
  opts.solver.tol = c.tol;
  const std::string family_name =
      c.family.empty() ? default_family(c.kind) : c.family;
  if (family_name == "grover" || family_name == "gh1" || family_name == "shift")
    opts.sector_target = c.target;
  auto study = runtime_scaling_study(
      [&](int n) { return family_from_config(c, n); }, sizes, opts);

  sink.emit("scaling.csv", scaling_csv(study));
  sink.emit("scaling.json", scaling_json(study));
  summary = json{{"points", study.points.size()},
                 {"slope_log2t_vs_n", study.slope_log2t_vs_n},
                 {"slope_logt_vs_log_inv_gap", study.slope_logt_vs_log_inv_gap}};
}

}  // namespace

int run_experiment(const ExperimentConfig& c) {
  const auto t0 = std::chrono::steady_clock::now();
  try {
    bool known = false;
    for (const auto& k : known_kinds()) known = known || k == c.kind;
    if (!known) throw ContractViolation("unknown experiment kind '" + c.kind + "'");

    Sink sink{fs::path(c.out_dir)};
    json summary;
    if (c.kind == "separable") run_separable_kind(c, sink, summary);
    else if (c.kind == "positivity") run_positivity_kind(c, sink, summary);
    else if (c.kind == "evolve") run_evolve_kind(c, sink, summary);
    else if (c.kind == "scaling-study") run_scaling_kind(c, sink, summary);
    else run_sweep_kind(c, sink, summary);

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json manifest{{"format", "adiaq-manifest/1"},
                  {"kind", c.kind},
                  {"library_version", kVersion},
                  {"seed", c.seed},
                  {"wall_seconds", wall},
                  {"config", serialize_config(c)},
                  {"summary", summary},
                  {"outputs", sink.outputs()}};
    write_text_file((sink.dir() / "manifest.json").string(), manifest.dump(2) + "\n");
    return 0;
  } catch (const std::exception& e) {
    try {
      fs::create_directories(c.out_dir);
      json err{{"error", error_kind(e)}, {"message", e.what()}};
      write_text_file((fs::path(c.out_dir) / "error.json").string(),
                      err.dump(2) + "\n");
    } catch (...) {
      // the error record is best effort; the nonzero exit stands either way
    }
    return 1;
  }
}

}  // namespace adiaq

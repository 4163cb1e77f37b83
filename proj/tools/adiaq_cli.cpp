#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "adiaq/experiment.hpp"
#include "adiaq/io.hpp"
#include "adiaq/version.hpp"

namespace {

using adiaq::ExperimentConfig;

// Flags shared by every experiment subcommand. Values only override the
// config file when actually given on the command line.
struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int threads = 0;
  int grid = 0;
  double tol = 0.0;

  CLI::Option* opt_out = nullptr;
  CLI::Option* opt_seed = nullptr;
  CLI::Option* opt_threads = nullptr;
  CLI::Option* opt_grid = nullptr;
  CLI::Option* opt_tol = nullptr;

  void attach(CLI::App* sub) {
    sub->add_option("--config", config_path, "config file (adiaq-config/1)")
        ->check(CLI::ExistingFile);
    opt_out = sub->add_option("--out", out_dir, "output directory");
    opt_seed = sub->add_option("--seed", seed, "random seed");
    opt_threads = sub->add_option("--threads", threads, "worker threads");
    opt_grid = sub->add_option("--grid", grid, "s-grid point count");
    opt_tol = sub->add_option(
        "--tol", tol, "solver residual tolerance (evolve: integrator budget)");
  }

  ExperimentConfig resolve(const std::string& kind) const {
    ExperimentConfig c;
    if (!config_path.empty()) c = adiaq::load_config_file(config_path);
    c.kind = kind;
    if (opt_out->count()) c.out_dir = out_dir;
    if (opt_seed->count()) c.seed = seed;
    if (opt_threads->count()) c.threads = threads;
    if (opt_grid->count()) c.grid = grid;
    if (opt_tol->count()) c.tol = tol;
    return c;
  }
};

int finish(const ExperimentConfig& config) {
  const int rc = adiaq::run_experiment(config);
  namespace fs = std::filesystem;
  if (rc == 0) {
    const auto manifest = nlohmann::json::parse(
        adiaq::read_text_file((fs::path(config.out_dir) / "manifest.json").string()));
    std::printf("%s: %s\n", config.kind.c_str(),
                manifest["summary"].dump().c_str());
    std::printf("artifacts in %s (see manifest.json)\n", config.out_dir.c_str());
  } else {
    try {
      const auto err = nlohmann::json::parse(
          adiaq::read_text_file((fs::path(config.out_dir) / "error.json").string()));
      std::fprintf(stderr, "error (%s): %s\n",
                   err.value("error", "unknown").c_str(),
                   err.value("message", "").c_str());
    } catch (const std::exception&) {
      std::fprintf(stderr, "experiment failed and no error record was written\n");
    }
  }
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adiabatic interpolation toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", adiaq::kVersion);

  struct SubState {
    CommonFlags common;
    ExperimentConfig flags;  // kind-specific values land here
    CLI::Option* opt_n = nullptr;
    CLI::Option* opt_family = nullptr;
    CLI::Option* opt_target = nullptr;
    CLI::Option* opt_cnf = nullptr;
    CLI::Option* opt_clauses = nullptr;
    CLI::Option* opt_law_lo = nullptr;
    CLI::Option* opt_law_hi = nullptr;
    CLI::Option* opt_total_time = nullptr;
    CLI::Option* opt_f_star = nullptr;
    CLI::Option* opt_trotter_m = nullptr;
    CLI::Option* opt_s_values = nullptr;
    CLI::Option* opt_trace = nullptr;
    CLI::Option* opt_n_lo = nullptr;
    CLI::Option* opt_n_hi = nullptr;
  };
  std::vector<std::unique_ptr<SubState>> states;

  auto make_sub = [&](const std::string& name, const std::string& help) {
    auto* sub = app.add_subcommand(name, help);
    states.push_back(std::make_unique<SubState>());
    auto* st = states.back().get();
    st->common.attach(sub);
    st->opt_n = sub->add_option("-n,--qubits", st->flags.n, "qubit count");
    st->opt_family = sub->add_option(
        "--family", st->flags.family,
        "family: separable, grover, gh1, shift, random, sat");
    st->opt_target = sub->add_option("--target", st->flags.target, "marked state");
    sub->callback([st, name] {
      ExperimentConfig c = st->common.resolve(name);
      if (st->opt_n->count()) c.n = st->flags.n;
      if (st->opt_family->count()) c.family = st->flags.family;
      if (st->opt_target && st->opt_target->count()) c.target = st->flags.target;
      if (st->opt_cnf && st->opt_cnf->count()) c.cnf = st->flags.cnf;
      if (st->opt_clauses && st->opt_clauses->count()) c.clauses = st->flags.clauses;
      if (st->opt_law_lo && st->opt_law_lo->count()) c.law_lo = st->flags.law_lo;
      if (st->opt_law_hi && st->opt_law_hi->count()) c.law_hi = st->flags.law_hi;
      if (st->opt_total_time && st->opt_total_time->count())
        c.total_time = st->flags.total_time;
      if (st->opt_f_star && st->opt_f_star->count()) c.f_star = st->flags.f_star;
      if (st->opt_trotter_m && st->opt_trotter_m->count())
        c.trotter_m = st->flags.trotter_m;
      if (st->opt_s_values && st->opt_s_values->count())
        c.s_values = st->flags.s_values;
      if (st->opt_trace && st->opt_trace->count())
        c.trace_samples = st->flags.trace_samples;
      if (st->opt_n_lo && st->opt_n_lo->count()) c.n_lo = st->flags.n_lo;
      if (st->opt_n_hi && st->opt_n_hi->count()) c.n_hi = st->flags.n_hi;
      std::exit(finish(c));
    });
    return std::pair{sub, st};
  };

  make_sub("gap-sweep", "sweep the spectral gap over s");
  make_sub("separable", "closed-form spectrum of the qubit-wise family");
  const std::pair<const char*, const char*> searches[] = {
      {"grover-search", "marked-state generator family"},
      {"gh1-search", "sign-flipped final family"},
      {"shift-search", "shifted-spectrum search family"}};
  for (const auto& [name, help] : searches) make_sub(name, help);
  {
    auto [sub, st] = make_sub("random-final", "random diagonal final Hamiltonian");
    st->opt_law_lo = sub->add_option("--law-lo", st->flags.law_lo, "smallest energy");
    st->opt_law_hi =
        sub->add_option("--law-hi", st->flags.law_hi, "largest energy (0: use n)");
  }
  {
    auto [sub, st] = make_sub("sat-gap", "gap profile of a 3-SAT cost function");
    st->opt_cnf = sub->add_option("--cnf", st->flags.cnf, "DIMACS CNF file")
                      ->check(CLI::ExistingFile);
    st->opt_clauses =
        sub->add_option("--clauses", st->flags.clauses, "random clause count");
  }
  {
    auto [sub, st] = make_sub("positivity", "product-form positivity checks");
    st->opt_trotter_m =
        sub->add_option("--trotter-m", st->flags.trotter_m, "initial step count");
    st->opt_s_values = sub->add_option("--s-values", st->flags.s_values,
                                       "s checkpoints (comma separated)")
                           ->delimiter(',');
  }
  {
    auto [sub, st] = make_sub("evolve", "integrate the interpolated dynamics");
    st->opt_total_time =
        sub->add_option("--total-time", st->flags.total_time, "total time T");
    st->opt_trace =
        sub->add_option("--trace-samples", st->flags.trace_samples, "trace points");
  }
  {
    auto [sub, st] = make_sub("scaling-study", "minimum time to target fidelity vs n");
    st->opt_n_lo = sub->add_option("--n-lo", st->flags.n_lo, "smallest size");
    st->opt_n_hi = sub->add_option("--n-hi", st->flags.n_hi, "largest size");
    st->opt_f_star = sub->add_option("--f-star", st->flags.f_star, "target fidelity");
  }
  {
    auto* sub = app.add_subcommand("compare", "compare two gap profile JSON files");
    static std::string a, b, out;
    sub->add_option("a", a, "first profile")->required()->check(CLI::ExistingFile);
    sub->add_option("b", b, "second profile")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory");
    sub->callback([] {
      try {
        const auto pa = adiaq::parse_gap_profile_json(adiaq::read_text_file(a));
        const auto pb = adiaq::parse_gap_profile_json(adiaq::read_text_file(b));
        const auto rep = adiaq::compare_profiles(pa, pb);
        const auto text =
            adiaq::compare_report_json(rep, pa.family_id, pb.family_id);
        if (!out.empty()) {
          std::filesystem::create_directories(out);
          adiaq::write_text_file(
              (std::filesystem::path(out) / "compare.json").string(), text);
        }
        std::printf("%s", text.c_str());
        std::printf("max gap difference %.3g at s=%.6f\n", rep.max_gap_diff,
                    rep.s_at_max_diff);
        std::exit(0);
      } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        std::exit(1);
      }
    });
  }

  CLI11_PARSE(app, argc, argv);
  return 0;
}

#include <doctest.h>

#include <cmath>
#include <vector>

#include "adiaq/builders.hpp"
#include "adiaq/sat.hpp"
#include "adiaq/spectral.hpp"

#include "oracles.hpp"

using namespace adiaq;

namespace {

InterpolatingFamily sat_family(int n, int m, std::uint64_t seed) {
  auto inst = random_instance(n, m, seed);
  auto table = encode_energy(inst);
  return make_family("sat-test", TransverseFieldSpec{n, {}},
                     Operator::diagonal(table.n, std::move(table.energies)));
}

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("lowest_two agrees with the dense oracle across forms") {
  auto fam = sat_family(6, 24, 3);
  for (double s : {0.2, 0.5, 0.8}) {
    auto h = fam.at(s);
    auto eig = oracles::sym_eigenvalues(oracles::dense_of(h));
    auto r = lowest_two(h);
    CHECK(r.e0 == doctest::Approx(eig[0]).epsilon(1e-10));
    CHECK(r.e1 == doctest::Approx(eig[1]).epsilon(1e-10));

    // Residual check through the operator itself.
    std::vector<double> hv(h.dim());
    h.apply(r.v0, hv);
    double res = 0.0;
    for (std::size_t i = 0; i < hv.size(); ++i) {
      const double d = hv[i] - r.e0 * r.v0[i];
      res += d * d;
    }
    CHECK(std::sqrt(res) <= 1e-8);
  }
}

TEST_CASE("lowest_two handles the iterative path above the dense cutoff") {
  // n=7 gives dimension 128, above the dense fallback at 64.
  auto fam = sat_family(7, 28, 9);
  auto h = fam.at(0.4);
  auto eig = oracles::sym_eigenvalues(oracles::dense_of(h));
  auto r = lowest_two(h);
  CHECK(r.stats.matvecs > 0);
  CHECK(r.e0 == doctest::Approx(eig[0]).epsilon(1e-9));
  CHECK(r.e1 == doctest::Approx(eig[1]).epsilon(1e-9));
}

TEST_CASE("warm started solves converge to the same pair") {
  auto fam = sat_family(7, 28, 4);
  auto first = lowest_two(fam.at(0.50));
  LanczosOptions opts;
  opts.warm0 = &first.v0;
  opts.warm1 = &first.v1;
  auto second = lowest_two(fam.at(0.52), opts);
  CHECK(second.stats.warm_started);
  auto eig = oracles::sym_eigenvalues(oracles::dense_of(fam.at(0.52)));
  CHECK(second.e0 == doctest::Approx(eig[0]).epsilon(1e-9));
  CHECK(second.e1 == doctest::Approx(eig[1]).epsilon(1e-9));
}

TEST_CASE("dense spectrum groups degenerate levels") {
  auto fam = build_separable_pair(4);
  auto spec = dense_spectrum(fam.at(0.0));
  // Subset sums of unit couplings: binomial multiplicities.
  REQUIRE(spec.levels.size() == 5);
  const std::int64_t expect[] = {1, 4, 6, 4, 1};
  for (int k = 0; k < 5; ++k) {
    CHECK(spec.levels[static_cast<std::size_t>(k)].first ==
          doctest::Approx(static_cast<double>(k)).epsilon(1e-12));
    CHECK(spec.levels[static_cast<std::size_t>(k)].second == expect[k]);
  }
  CHECK_THROWS_AS(
      dense_spectrum(Operator::diagonal(
          kMaxDenseSpectrumQubits + 1,
          std::vector<double>(dimension(kMaxDenseSpectrumQubits + 1), 0.0))),
      SizeGuardError);
}

TEST_CASE("closed form matches dense diagonalization") {
  const int n = 6;
  auto fam = build_separable_pair(n);
  for (double s : {0.0, 0.25, 0.5, 0.9, 1.0}) {
    auto closed = separable_closed_form(n, s);
    auto eig = oracles::sym_eigenvalues(oracles::dense_of(fam.at(s)));
    REQUIRE(closed.eigenvalues.size() == static_cast<std::size_t>(eig.size()));
    for (int i = 0; i < eig.size(); ++i)
      CHECK(closed.eigenvalues[static_cast<std::size_t>(i)] ==
            doctest::Approx(eig[i]).epsilon(1e-10));
  }
}

TEST_CASE("golden minimize brackets a smooth minimum") {
  auto f = [](double x) { return (x - 0.3) * (x - 0.3) + 1.0; };
  auto r = golden_minimize(f, 0.0, 1.0, 1e-8, 0.0);
  CHECK(r.x == doctest::Approx(0.3).epsilon(1e-6));
  CHECK(r.f == doctest::Approx(1.0));
  CHECK(r.evaluations > 0);

  // The reported minimum is never above any probed value.
  auto g = [](double x) { return std::cos(8.0 * x); };
  auto rg = golden_minimize(g, 0.0, 1.0, 1e-10, 0.0);
  CHECK(rg.f <= g(rg.x) + 1e-15);
}

TEST_CASE("gap sweep finds the separable minimum") {
  auto fam = build_separable_pair(5);
  auto profile = gap_sweep(fam, uniform_grid(21));
  CHECK(profile.s_star == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(profile.g_min == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-8));
  REQUIRE(profile.samples.size() == 21);

  // g_min is a floor under every evaluation, and the s=0 gap equals the
  // smallest positive subset sum of the couplings.
  for (const auto& sample : profile.samples)
    CHECK(profile.g_min <= sample.e1 - sample.e0 + 1e-12);
  auto sums = oracles::subset_sums(std::vector<double>(5, 1.0));
  double smallest_positive = 0.0;
  for (double v : sums)
    if (v > 1e-12) {
      smallest_positive = v;
      break;
    }
  CHECK(profile.samples.front().e1 - profile.samples.front().e0 ==
        doctest::Approx(smallest_positive).epsilon(1e-9));
}

TEST_CASE("gap sweep is deterministic and thread-count invariant") {
  auto fam = sat_family(6, 24, 8);
  auto a = gap_sweep(fam, uniform_grid(11));
  auto b = gap_sweep(fam, uniform_grid(11));
  CHECK(a.g_min == b.g_min);
  CHECK(a.s_star == b.s_star);

  SweepOptions threaded;
  threaded.threads = 4;
  auto c = gap_sweep(fam, uniform_grid(11), threaded);
  CHECK(c.g_min == doctest::Approx(a.g_min).epsilon(1e-9));
  CHECK(c.s_star == doctest::Approx(a.s_star).epsilon(1e-6));
}

TEST_CASE("degenerate final ground closes the gap at s=1") {
  auto h1 = Operator::diagonal(3, {0.0, 1.0, 2.0, 1.0, 3.0, 1.0, 2.0, 0.0});
  auto fam = make_family("deg", TransverseFieldSpec{3, {}}, h1);
  REQUIRE(fam.final_ground_degenerate());
  auto profile = gap_sweep(fam, uniform_grid(21));
  CHECK(profile.samples.back().e1 - profile.samples.back().e0 <= 1e-12);
  CHECK(profile.g_min <= 1e-12);
}

TEST_CASE("reduced subspace closes at dimension n+1") {
  const int n = 7;
  auto fam = make_family("grover", TransverseFieldSpec{n, {}},
                         build_grover_generator(TargetState{n, 5}));
  ReducedSearchSubspace red(fam, TargetState{n, 5});
  CHECK(red.full_n() == n);
  CHECK(red.dim() == n + 1);

  // Reduced eigenvalues are a subset of the dense spectrum.
  for (double s : {0.3, 0.7}) {
    auto flat = red.reduced_matrix(s);
    Eigen::MatrixXd rm(red.dim(), red.dim());
    for (int i = 0; i < red.dim(); ++i)
      for (int j = 0; j < red.dim(); ++j)
        rm(i, j) = flat[static_cast<std::size_t>(i * red.dim() + j)];
    auto reig = oracles::sym_eigenvalues(rm);
    auto full = oracles::sym_eigenvalues(oracles::dense_of(fam.at(s)));
    for (int i = 0; i < reig.size(); ++i) {
      double best = 1e9;
      for (int j = 0; j < full.size(); ++j)
        best = std::min(best, std::abs(reig[i] - full[j]));
      CHECK(best <= 1e-9);
    }
    auto [e0, e1] = red.lowest_two_reduced(s);
    CHECK(e0 == doctest::Approx(full[0]).epsilon(1e-10));
    CHECK(e1 >= e0);
  }
}

TEST_CASE("asymmetric tables refuse the sector closure") {
  const int n = 6;
  std::vector<double> table(dimension(n));
  for (std::uint64_t k = 0; k < table.size(); ++k)
    table[k] = static_cast<double>(zero_bits(k, n));
  auto fam = make_family("gh1-offcenter", TransverseFieldSpec{n, {}},
                         apply_grover_sign(Operator::diagonal(n, table),
                                           TargetState{n, 5}));
  CHECK_THROWS_AS(ReducedSearchSubspace(fam, TargetState{n, 5}),
                  RankToleranceError);
}

TEST_CASE("reduced profile matches the full sweep for the search family") {
  const int n = 6;
  auto fam = make_family("grover", TransverseFieldSpec{n, {}},
                         build_grover_generator(TargetState{n, 0}));
  ReducedSearchSubspace red(fam, TargetState{n, 0});
  auto reduced = reduced_gap_profile(red, uniform_grid(41));
  auto full = gap_sweep(fam, uniform_grid(41));
  CHECK(reduced.g_min == doctest::Approx(full.g_min).epsilon(1e-8));
  CHECK(reduced.s_star == doctest::Approx(full.s_star).epsilon(1e-4));
}

TEST_CASE("crossing detection separates true from avoided") {
  // Two diagonal levels (1-s) and 2s cross exactly at s = 1/3.
  InterpolatingFamily toy("toy-crossing", Operator::diagonal(1, {1.0, 0.0}),
                          Operator::diagonal(1, {0.0, 2.0}));
  CrossingOptions opts;
  opts.tracked_levels = 2;
  auto events = detect_crossings(toy, uniform_grid(41), opts);
  REQUIRE(events.size() >= 1);
  CHECK(events[0].true_crossing);
  CHECK(events[0].s == doctest::Approx(1.0 / 3.0).epsilon(1e-6));

  // A weak transverse-field driver couples two diagonal levels; the
  // single-qubit gap sqrt(s^2 + 0.01 (1-s)^2) dips near s = 0.01 without
  // ever closing, so the event is classified as avoided.
  auto fam = make_family("avoided", TransverseFieldSpec{1, {0.1}},
                         Operator::diagonal(1, {1.0, 0.0}));
  CrossingOptions aopts;
  aopts.tracked_levels = 2;
  aopts.window = 0.2;
  auto avoided = detect_crossings(fam, uniform_grid(81), aopts);
  REQUIRE(avoided.size() >= 1);
  CHECK(!avoided[0].true_crossing);
  CHECK(avoided[0].min_separation > 1e-6);
  CHECK(avoided[0].min_separation < 0.2);
}

}  // TEST_SUITE

#include <doctest.h>

#include <cmath>
#include <vector>

#include "adiaq/builders.hpp"
#include "adiaq/positivity.hpp"
#include "adiaq/sat.hpp"

#include "oracles.hpp"

using namespace adiaq;

namespace {

InterpolatingFamily sat_family(int n, int m, std::uint64_t seed) {
  auto inst = random_instance(n, m, seed);
  auto table = encode_energy(inst);
  return make_family("sat-test", TransverseFieldSpec{n, {}},
                     Operator::diagonal(table.n, std::move(table.energies)));
}

double max_abs_diff(const std::vector<double>& a, const Eigen::MatrixXd& b) {
  double worst = 0.0;
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j)
      worst = std::max(worst,
                       std::abs(a[static_cast<std::size_t>(i * b.cols() + j)] - b(i, j)));
  return worst;
}

}  // namespace

TEST_SUITE("positivity") {

TEST_CASE("single qubit factor matches the closed form") {
  auto f = single_qubit_factor(1.0, 1.0);
  const double e = std::exp(-1.0);
  CHECK(f.d0 == doctest::Approx((1.0 + e) / 2.0).epsilon(1e-15));
  CHECK(f.d1 == f.d0);
  CHECK(f.off == doctest::Approx((1.0 - e) / 2.0).epsilon(1e-15));

  // Rows sum to exactly one by construction, not just approximately.
  for (double a : {0.3, 1.0, 2.5})
    for (double tau : {0.01, 0.5, 3.0}) {
      auto g = single_qubit_factor(a, tau);
      CHECK(g.d0 + g.off == 1.0);
      CHECK(g.d0 > 0.0);
      CHECK(g.off > 0.0);
    }

  // A dead qubit contributes the identity.
  auto id = single_qubit_factor(0.0, 1.7);
  CHECK(id.d0 == 1.0);
  CHECK(id.off == 0.0);

  CHECK_THROWS_AS(single_qubit_factor(-1.0, 0.5), ContractViolation);
}

TEST_CASE("trotter product converges to the exponential like 1/m") {
  auto fam = sat_family(5, 20, 11);
  const double s = 0.5;
  Eigen::MatrixXd exact = oracles::sym_exp(oracles::dense_of(fam.at(s)), -1.0);

  double prev = 0.0;
  bool first = true;
  for (int m = 16; m <= 256; m *= 4) {
    TrotterApproximant t(fam, s, m);
    CHECK(t.steps() == m);
    double err = max_abs_diff(t.dense(), exact);
    if (!first) {
      // Quartering the step size should cut the error by about four;
      // allow slack for the subleading terms.
      CHECK(err < prev);
      CHECK(prev / err > 2.5);
      CHECK(prev / err < 6.0);
    }
    prev = err;
    first = false;
  }
}

TEST_CASE("product action matches the dense product") {
  auto fam = build_separable_pair(4);
  TrotterApproximant t(fam, 0.3, 32);
  auto dense = t.dense();
  auto v = StateVector::random(4, 7);
  auto out = t.apply(v);
  const auto dim = v.dim();
  for (std::uint64_t i = 0; i < dim; ++i) {
    cxd acc = 0.0;
    for (std::uint64_t j = 0; j < dim; ++j) acc += dense[i * dim + j] * v[j];
    CHECK(std::abs(out[i] - acc) <= 1e-12);
  }
}

TEST_CASE("endpoint products collapse to single factors") {
  auto fam = sat_family(4, 16, 2);

  // s = 0: the product is exactly exp(-H0) regardless of m.
  auto v = StateVector::uniform(4);
  auto a0 = trotter_exp_action(fam, 0.0, 1, v);
  Eigen::MatrixXd e0 = oracles::sym_exp(oracles::dense_of(fam.h0()), -1.0);
  for (std::uint64_t i = 0; i < a0.dim(); ++i) {
    double acc = 0.0;
    for (std::uint64_t j = 0; j < a0.dim(); ++j)
      acc += e0(static_cast<int>(i), static_cast<int>(j)) * v[j].real();
    CHECK(a0[i].real() == doctest::Approx(acc).epsilon(1e-12));
    CHECK(a0[i].imag() == 0.0);
  }

  // s = 1: a diagonal scale, so basis states stay basis states.
  auto b = StateVector::basis_state(4, 9);
  auto a1 = trotter_exp_action(fam, 1.0, 1, b);
  for (std::uint64_t i = 0; i < a1.dim(); ++i) {
    if (i == 9) continue;
    CHECK(std::abs(a1[i]) == 0.0);
  }
  CHECK(a1[9].real() > 0.0);
}

TEST_CASE("product action on positive input stays strictly positive below s=1") {
  auto fam = sat_family(4, 16, 5);
  auto v = StateVector::uniform(4);
  for (double s : {0.0, 0.4, 0.9}) {
    auto out = trotter_exp_action(fam, s, 64, v);
    for (std::uint64_t i = 0; i < out.dim(); ++i) CHECK(out[i].real() > 0.0);
  }
}

TEST_CASE("matrix positivity holds in the interior and fails at s=1") {
  auto separable = build_separable_pair(4);
  auto sat = sat_family(4, 16, 3);
  for (const auto* fam : {&separable, &sat}) {
    for (double s : {0.1, 0.5, 0.9}) {
      auto report = verify_matrix_positivity(*fam, s);
      CHECK(report.check == "matrix");
      CHECK(report.applicable);
      CHECK(report.positive);
      CHECK(report.min_entry > kMatrixPositivityTol);
      CHECK(report.trotter_m >= 64);
    }
    auto at_one = verify_matrix_positivity(*fam, 1.0);
    CHECK(!at_one.positive);
  }
}

TEST_CASE("matrix positivity verdict is thread-count invariant") {
  auto fam = sat_family(5, 20, 7);
  auto serial = verify_matrix_positivity(fam, 0.5, 64, 1);
  auto parallel = verify_matrix_positivity(fam, 0.5, 64, 4);
  CHECK(serial.positive == parallel.positive);
  CHECK(serial.trotter_m == parallel.trotter_m);
  CHECK(serial.min_entry == doctest::Approx(parallel.min_entry).epsilon(1e-12));
}

TEST_CASE("ground vector positivity in the Perron gauge") {
  auto fam = sat_family(6, 24, 13);
  for (double s : {0.1, 0.5, 0.9}) {
    auto report = verify_ground_positivity(fam, s);
    CHECK(report.check == "ground-vector");
    CHECK(report.applicable);
    CHECK(report.positive);
    CHECK(report.min_entry > kVectorPositivityTol);
    CHECK(report.ground_multiplicity == 1);
  }
  CHECK_THROWS_AS(verify_ground_positivity(fam, 1.0), ContractViolation);
}

TEST_CASE("degenerate ground level is reported as not applicable") {
  // Qubit 2 carries no coupling and no cost, so every level is doubly
  // degenerate at every s, including the ground level.
  auto fam = make_family("decoupled", TransverseFieldSpec{2, {1.0, 0.0}},
                         Operator::diagonal(2, {0.0, 0.0, 1.0, 1.0}));
  auto report = verify_ground_positivity(fam, 0.5);
  CHECK(!report.applicable);
  CHECK(report.ground_multiplicity == 2);
}

TEST_CASE("size guard rejects oversized positivity checks") {
  const int n = kMaxPositivityQubits + 1;
  std::vector<double> table(dimension(n), 1.0);
  table[0] = 0.0;
  auto fam = make_family("big", TransverseFieldSpec{n, {}},
                         Operator::diagonal(n, std::move(table)));
  CHECK_THROWS_AS(verify_matrix_positivity(fam, 0.5), SizeGuardError);
}

}  // TEST_SUITE

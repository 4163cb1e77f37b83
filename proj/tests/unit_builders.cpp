#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "adiaq/builders.hpp"
#include "adiaq/family.hpp"

#include "oracles.hpp"

using namespace adiaq;

TEST_SUITE("builders") {

TEST_CASE("driver blocks and ground state") {
  auto h0 = build_h0(TransverseFieldSpec{3, {1.0, 0.5, 2.0}});
  REQUIRE(h0.is_separable());
  const auto& blocks = h0.separable_blocks();
  CHECK(blocks[0].d0 == doctest::Approx(0.5));
  CHECK(blocks[0].off == doctest::Approx(-0.5));
  CHECK(blocks[1].off == doctest::Approx(-0.25));
  CHECK(blocks[2].d1 == doctest::Approx(1.0));

  // The uniform state is annihilated: each term has the uniform 2-vector
  // in its kernel.
  auto m = oracles::dense_of(h0);
  Eigen::VectorXd uniform = Eigen::VectorXd::Constant(8, 1.0 / std::sqrt(8.0));
  CHECK((m * uniform).norm() == doctest::Approx(0.0).epsilon(1e-12));

  // Eigenvalues are the subset sums of the couplings.
  auto eig = oracles::sym_eigenvalues(m);
  auto sums = oracles::subset_sums({1.0, 0.5, 2.0});
  for (int i = 0; i < 8; ++i)
    CHECK(eig[i] == doctest::Approx(sums[static_cast<std::size_t>(i)]).epsilon(1e-12));
}

TEST_CASE("driver rejects useless couplings") {
  CHECK_THROWS_AS(build_h0(TransverseFieldSpec{2, {0.0, 0.0}}),
                  DegenerateBuilderError);
  CHECK_THROWS_AS(build_h0(TransverseFieldSpec{2, {1.0, -0.5}}), ContractViolation);
  CHECK_THROWS_AS(build_h0(TransverseFieldSpec{2, {1.0}}), ContractViolation);
  // A single dead qubit is allowed as long as one coupling is live.
  CHECK_NOTHROW(build_h0(TransverseFieldSpec{2, {1.0, 0.0}}));
}

TEST_CASE("cost table validation") {
  CHECK_NOTHROW(build_cost(CostSpec{2, {0.0, 1.0, 2.0, 1.0}}));
  CHECK_THROWS_AS(build_cost(CostSpec{2, {0.5, 1.0, 2.0, 1.0}}), ContractViolation);
  CHECK_THROWS_AS(build_cost(CostSpec{2, {0.0, -1.0, 2.0, 1.0}}), ContractViolation);
  CHECK_THROWS_AS(build_cost(CostSpec{2, {0.0, 1.0}}), ContractViolation);

  auto op = build_cost(CostSpec{2, {0.0, 1.0, 0.0, 3.0}});
  CHECK(ground_multiplicity(op) == 2);
}

TEST_CASE("grover generator marks one state") {
  auto g = build_grover_generator(TargetState{3, 5});
  REQUIRE(g.is_diagonal());
  const auto& t = g.diagonal_table();
  for (std::uint64_t k = 0; k < 8; ++k)
    CHECK(t[k] == (k == 5 ? 0.0 : 1.0));
  CHECK(ground_multiplicity(g) == 1);
}

TEST_CASE("sign flip negates exactly one entry") {
  auto base = Operator::diagonal(2, {2.0, 1.0, 3.0, 4.0});
  auto flipped = apply_grover_sign(base, TargetState{2, 2});
  CHECK(flipped.diagonal_table() == std::vector<double>{2.0, 1.0, -3.0, 4.0});

  auto zero_entry = Operator::diagonal(2, {2.0, 0.0, 3.0, 4.0});
  CHECK_THROWS_AS(apply_grover_sign(zero_entry, TargetState{2, 1}), FlipNoEffectError);
  auto negative = Operator::diagonal(2, {2.0, -1.0, 3.0, 4.0});
  CHECK_THROWS_AS(apply_grover_sign(negative, TargetState{2, 1}), ContractViolation);
}

TEST_CASE("shift variant opens a unit gap") {
  auto base = Operator::diagonal(2, {2.0, 1.0, 3.0, 0.0});
  auto shifted = shift_variant(base, TargetState{2, 1});
  CHECK(shifted.diagonal_table() == std::vector<double>{3.0, 0.0, 4.0, 1.0});
  CHECK(ground_multiplicity(shifted) == 1);
}

TEST_CASE("separable pair interpolates in separable form") {
  auto fam = build_separable_pair(4);
  CHECK(fam.n() == 4);
  CHECK(!fam.final_ground_degenerate());
  auto h = fam.at(0.3);
  CHECK(h.is_separable());

  // H1 counts zero bits: the all-ones index has energy 0, the all-zeros
  // index has energy n.
  const auto& t = fam.h1().diagonal_table();
  CHECK(t[0] == 4.0);
  CHECK(t[15] == 0.0);
  CHECK(t[0b0101] == 2.0);

  CHECK_THROWS_AS(fam.at(-0.1), ContractViolation);
  CHECK_THROWS_AS(fam.at(1.1), ContractViolation);
}

TEST_CASE("random final law and determinism") {
  auto a = build_random_final(RandomFinalSpec{4, 0, 0, 11});
  auto b = build_random_final(RandomFinalSpec{4, 0, 0, 11});
  auto c = build_random_final(RandomFinalSpec{4, 0, 0, 12});
  CHECK(a.diagonal_table() == b.diagonal_table());
  CHECK(a.diagonal_table() != c.diagonal_table());

  const auto& t = a.diagonal_table();
  const double lo = *std::min_element(t.begin(), t.end());
  const double hi = *std::max_element(t.begin(), t.end());
  CHECK(lo == 0.0);
  CHECK(hi <= 4.0);  // law_hi <= 0 selects [0, n]
  for (double e : t) CHECK(e == std::floor(e));
}

TEST_CASE("separable family exponential factorizes") {
  const int n = 4;
  const double s = 0.35;
  auto fam = build_separable_pair(n);
  auto h = fam.at(s);
  REQUIRE(h.is_separable());

  // Qubit 1 is the most significant, so fold the Kronecker product from
  // the last block outward.
  Eigen::MatrixXd product = Eigen::MatrixXd::Identity(1, 1);
  const auto& blocks = h.separable_blocks();
  for (auto it = blocks.rbegin(); it != blocks.rend(); ++it) {
    Eigen::MatrixXd block(2, 2);
    block << it->d0, it->off, it->off, it->d1;
    Eigen::MatrixXd eb = oracles::sym_exp(block, -1.0);
    Eigen::MatrixXd next(product.rows() * 2, product.cols() * 2);
    next << eb(0, 0) * product, eb(0, 1) * product,
            eb(1, 0) * product, eb(1, 1) * product;
    product = std::move(next);
  }
  Eigen::MatrixXd direct = oracles::sym_exp(oracles::dense_of(h), -1.0);
  CHECK((product - direct).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("make_family wires ids and degeneracy") {
  auto h1 = Operator::diagonal(2, {0.0, 2.0, 2.0, 0.0});
  auto fam = make_family("toy", TransverseFieldSpec{2, {}}, h1);
  CHECK(fam.id() == "toy");
  CHECK(fam.final_ground_degenerate());
  CHECK(fam.h0().is_separable());
}

}  // TEST_SUITE

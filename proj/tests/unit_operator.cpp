#include <doctest.h>

#include <cmath>
#include <vector>

#include "adiaq/builders.hpp"
#include "adiaq/operator.hpp"
#include "adiaq/rng.hpp"

#include "oracles.hpp"

using namespace adiaq;

namespace {

Eigen::VectorXd random_vec(int dim, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = rng.normal();
  return v;
}

// Compare op * v against the oracle dense matrix product.
void check_matvec_matches(const Operator& op, std::uint64_t seed) {
  const auto m = oracles::dense_of(op);
  const int dim = static_cast<int>(op.dim());
  Eigen::VectorXd v = random_vec(dim, seed);
  std::vector<double> in(v.data(), v.data() + dim), out(dim);
  op.apply(in, out);
  Eigen::VectorXd expect = m * v;
  for (int i = 0; i < dim; ++i)
    CHECK(out[static_cast<std::size_t>(i)] ==
          doctest::Approx(expect[i]).epsilon(1e-12));
}

}  // namespace

TEST_SUITE("operator") {

TEST_CASE("diagonal form") {
  std::vector<double> table{0.0, 1.5, 2.0, 0.25};
  auto op = Operator::diagonal(2, table);
  CHECK(op.is_diagonal());
  CHECK(op.diagonal_table() == table);
  check_matvec_matches(op, 1);

  auto m = oracles::dense_of(op);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      CHECK(m(i, j) == (i == j ? table[static_cast<std::size_t>(i)] : 0.0));
}

TEST_CASE("separable form is a Kronecker sum") {
  // One block per qubit, distinct values so qubit order mistakes show up.
  std::vector<QubitBlock> blocks{{0.1, 0.7, -0.3}, {1.0, -0.2, 0.4}, {0.0, 2.0, 0.0}};
  auto op = Operator::separable(3, blocks);
  CHECK(op.is_separable());
  check_matvec_matches(op, 2);

  // Entry (0, 4) flips qubit 1 only, so it must equal blocks[0].off.
  auto m = oracles::dense_of(op);
  CHECK(m(0, 4) == doctest::Approx(0.7));
  CHECK(m(0, 1) == doctest::Approx(2.0));   // flips qubit 3
  CHECK(m(0, 2) == doctest::Approx(-0.2));  // flips qubit 2
  CHECK(m(0, 0) == doctest::Approx(0.1 + 1.0 + 0.0));
  CHECK(m(7, 7) == doctest::Approx(-0.3 + 0.4 + 0.0));
  CHECK(m(0, 7) == 0.0);  // three bit flips apart
}

TEST_CASE("sparse form mirrors off-diagonal triplets") {
  CsrMatrix csr = CsrMatrix::from_triplets(
      4, {{0, 0, 1.0}, {0, 2, -0.5}, {1, 3, 2.0}, {3, 3, 0.75}});
  auto op = Operator::sparse(2, csr);
  CHECK(op.is_sparse());
  check_matvec_matches(op, 3);

  auto m = oracles::dense_of(op);
  CHECK(m(0, 2) == doctest::Approx(-0.5));
  CHECK(m(2, 0) == doctest::Approx(-0.5));
  CHECK(m(1, 3) == doctest::Approx(2.0));
  CHECK(m(3, 1) == doctest::Approx(2.0));
  CHECK((m - m.transpose()).norm() == 0.0);
}

TEST_CASE("linear_combine preserves closed forms") {
  auto d1 = Operator::diagonal(2, {1.0, 2.0, 3.0, 4.0});
  auto d2 = Operator::diagonal(2, {0.5, 0.0, -1.0, 2.0});
  auto d = linear_combine(2.0, d1, -1.0, d2);
  CHECK(d.is_diagonal());
  CHECK(d.diagonal_table() == std::vector<double>{1.5, 4.0, 7.0, 6.0});

  auto s1 = Operator::separable(2, {{1.0, 0.5, 0.0}, {0.0, 0.25, 1.0}});
  auto s2 = Operator::separable(2, {{0.0, 0.5, 2.0}, {1.0, 0.75, 0.0}});
  auto s = linear_combine(1.0, s1, 1.0, s2);
  CHECK(s.is_separable());
  check_matvec_matches(s, 4);

  auto mixed = linear_combine(0.3, s1, 0.7, d1);
  CHECK(mixed.is_sum());
  Eigen::MatrixXd expect =
      0.3 * oracles::dense_of(s1) + 0.7 * oracles::dense_of(d1);
  CHECK((oracles::dense_of(mixed) - expect).norm() ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("complex apply equals real apply on both components") {
  auto op = build_h0(TransverseFieldSpec{3, {1.0, 0.5, 2.0}});
  Rng rng(5);
  std::vector<cxd> in(8), out(8);
  std::vector<double> re(8), im(8), re_out(8), im_out(8);
  for (int i = 0; i < 8; ++i) {
    re[static_cast<std::size_t>(i)] = rng.normal();
    im[static_cast<std::size_t>(i)] = rng.normal();
    in[static_cast<std::size_t>(i)] = cxd(re[static_cast<std::size_t>(i)],
                                          im[static_cast<std::size_t>(i)]);
  }
  op.apply(in, out);
  op.apply(std::span<const double>(re), std::span<double>(re_out));
  op.apply(std::span<const double>(im), std::span<double>(im_out));
  for (int i = 0; i < 8; ++i) {
    CHECK(out[static_cast<std::size_t>(i)].real() ==
          doctest::Approx(re_out[static_cast<std::size_t>(i)]).epsilon(1e-13));
    CHECK(out[static_cast<std::size_t>(i)].imag() ==
          doctest::Approx(im_out[static_cast<std::size_t>(i)]).epsilon(1e-13));
  }
}

TEST_CASE("apply_add accumulates") {
  auto op = Operator::diagonal(1, {2.0, -1.0});
  std::vector<double> in{1.0, 1.0}, out{10.0, 20.0};
  op.apply_add(0.5, in, out);
  CHECK(out[0] == doctest::Approx(11.0));
  CHECK(out[1] == doctest::Approx(19.5));
}

TEST_CASE("dense materialization is guarded") {
  auto big = Operator::diagonal(kMaxDenseQubits + 1,
                                std::vector<double>(dimension(kMaxDenseQubits + 1), 0.0));
  CHECK_THROWS_AS(big.dense(), SizeGuardError);

  auto small = Operator::separable(2, {{1.0, 0.5, 0.0}, {0.0, 0.25, 1.0}});
  auto flat = small.dense();
  auto m = oracles::dense_of(small);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      CHECK(flat[static_cast<std::size_t>(4 * i + j)] == doctest::Approx(m(i, j)));
}

TEST_CASE("matvec on a StateVector") {
  auto op = Operator::diagonal(2, {0.0, 1.0, 2.0, 3.0});
  auto v = StateVector::uniform(2);
  auto w = matvec(op, v);
  for (std::uint64_t i = 0; i < 4; ++i)
    CHECK(w[i].real() == doctest::Approx(0.5 * static_cast<double>(i)));
}

TEST_CASE("qubit block eigenvalues") {
  QubitBlock b{1.0, 2.0, 3.0};
  auto [lo, hi] = b.eigenvalues();
  // Oracle: eigenvalues of [[1,2],[2,3]] are 2 -+ sqrt(5).
  CHECK(lo == doctest::Approx(2.0 - std::sqrt(5.0)));
  CHECK(hi == doctest::Approx(2.0 + std::sqrt(5.0)));
}

}  // TEST_SUITE

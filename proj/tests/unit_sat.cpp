#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "adiaq/sat.hpp"

#include "oracles.hpp"

using namespace adiaq;

TEST_SUITE("sat") {

TEST_CASE("energy table matches clause-by-clause counting") {
  for (std::uint64_t seed : {1, 2, 3}) {
    auto inst = random_instance(6, 25, seed);
    auto spec = encode_energy(inst);
    REQUIRE(spec.energies.size() == 64);
    for (std::uint64_t k = 0; k < 64; ++k) {
      const int expect = oracles::brute_force_violations(inst, k);
      CHECK(spec.energies[k] == static_cast<double>(expect));
      CHECK(inst.violated_count(k) == expect);
      CHECK(inst.satisfied_by(k) == (expect == 0));
    }
  }
}

TEST_CASE("dimacs round trip") {
  auto inst = random_instance(8, 30, 7);
  auto text = to_dimacs(inst);
  std::istringstream in(text);
  auto back = parse_dimacs(in);
  CHECK(back.num_vars() == inst.num_vars());
  REQUIRE(back.clauses().size() == inst.clauses().size());
  for (std::size_t c = 0; c < inst.clauses().size(); ++c)
    for (int j = 0; j < 3; ++j)
      CHECK(back.clauses()[c].lits[j] == inst.clauses()[c].lits[j]);
}

TEST_CASE("dimacs parsing accepts comments and the SATLIB trailer") {
  const std::string text =
      "c a comment\n"
      "p cnf 4 2\n"
      "1 -2 3 0\n"
      "c interleaved comment\n"
      "-1 2 4 0\n"
      "%\n"
      "0\n";
  std::istringstream in(text);
  auto inst = parse_dimacs(in);
  CHECK(inst.num_vars() == 4);
  CHECK(inst.clauses().size() == 2);
  CHECK(inst.clauses()[0].lits[1].var == 2);
  CHECK(!inst.clauses()[0].lits[1].positive);
}

TEST_CASE("dimacs parse errors carry line numbers") {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return parse_dimacs(in);
  };

  // Clause with a repeated variable on line 3.
  try {
    parse("c x\np cnf 4 1\n1 1 2 0\n");
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(e.line() == 3);
  }

  // Two-literal clause.
  CHECK_THROWS_AS(parse("p cnf 4 1\n1 2 0\n"), FormatError);
  // Variable out of range.
  CHECK_THROWS_AS(parse("p cnf 4 1\n1 2 5 0\n"), FormatError);
  // Header promises more clauses than given.
  CHECK_THROWS_AS(parse("p cnf 4 2\n1 2 3 0\n"), FormatError);
  // Missing header.
  CHECK_THROWS_AS(parse("1 2 3 0\n"), FormatError);
}

TEST_CASE("instance validation") {
  std::vector<Clause> one{Clause{{Literal{1, true}, Literal{2, true}, Literal{3, false}}}};
  CHECK_NOTHROW(SatInstance(3, one));
  CHECK_THROWS_AS(SatInstance(2, one), ContractViolation);

  // n=3 admits at most 8 distinct-variable clauses.
  std::vector<Clause> many;
  for (int i = 0; i < 9; ++i)
    many.push_back(Clause{{Literal{1, (i & 1) != 0}, Literal{2, (i & 2) != 0},
                           Literal{3, (i & 4) != 0}}});
  CHECK_THROWS_AS(SatInstance(3, many), ContractViolation);
  many.pop_back();
  CHECK_NOTHROW(SatInstance(3, many));
}

TEST_CASE("random instances are deterministic in the seed") {
  auto a = random_instance(10, 42, 5);
  auto b = random_instance(10, 42, 5);
  auto c = random_instance(10, 42, 6);
  CHECK(to_dimacs(a) == to_dimacs(b));
  CHECK(to_dimacs(a) != to_dimacs(c));
  for (const auto& clause : a.clauses()) {
    CHECK(clause.lits[0].var != clause.lits[1].var);
    CHECK(clause.lits[0].var != clause.lits[2].var);
    CHECK(clause.lits[1].var != clause.lits[2].var);
  }
}

}  // TEST_SUITE

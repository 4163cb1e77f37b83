#include "adiaq/sat.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <utility>

#include "adiaq/basis.hpp"
#include "adiaq/errors.hpp"
#include "adiaq/rng.hpp"

namespace adiaq {

namespace {

std::int64_t max_clause_count(int n) {
  const std::int64_t nn = n;
  return 4 * nn * (nn - 1) * (nn - 2) / 3;  // 8 * C(n,3)
}

// Bit position (from the LSB) of variable v in a basis index.
int bit_position(int var, int n) { return n - var; }

bool literal_satisfied(const Literal& lit, std::uint64_t idx, int n) {
  const bool var_true = bit_of(idx, lit.var, n) == 0;
  return lit.positive == var_true;
}

}  // namespace

SatInstance::SatInstance(int num_vars, std::vector<Clause> clauses)
    : n_(num_vars), clauses_(std::move(clauses)) {
  check_qubit_count(n_);
  if (n_ < 3) throw ContractViolation("3-SAT needs at least three variables");
  if (static_cast<std::int64_t>(clauses_.size()) > max_clause_count(n_))
    throw ContractViolation("clause count exceeds the distinct-clause bound 8*C(n,3)");
  for (const auto& c : clauses_) {
    for (int i = 0; i < 3; ++i) {
      if (c.lits[i].var < 1 || c.lits[i].var > n_)
        throw ContractViolation("literal variable out of range");
      for (int j = i + 1; j < 3; ++j)
        if (c.lits[i].var == c.lits[j].var)
          throw ContractViolation("clause repeats a variable");
    }
  }
}

bool SatInstance::satisfied_by(std::uint64_t idx) const {
  return violated_count(idx) == 0;
}

int SatInstance::violated_count(std::uint64_t idx) const {
  int bad = 0;
  for (const auto& c : clauses_) {
    bool sat = false;
    for (const auto& lit : c.lits)
      if (literal_satisfied(lit, idx, n_)) {
        sat = true;
        break;
      }
    if (!sat) ++bad;
  }
  return bad;
}

namespace {

long parse_int(const std::string& tok, std::size_t lineno) {
  long v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw FormatError("expected an integer, got '" + tok + "'", lineno);
  return v;
}

}  // namespace

SatInstance parse_dimacs(std::istream& in) {
  int n = -1;
  long declared = -1;
  std::vector<Clause> clauses;
  std::vector<long> cur;
  std::size_t lineno = 0;
  std::string line;
  bool ended = false;

  while (!ended && std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == 'c') continue;
    if (line[first] == '%') break;  // SATLIB end-of-file marker
    if (line[first] == 'p') {
      if (n >= 0) throw FormatError("duplicate problem line", lineno);
      std::istringstream ls(line);
      std::string p, fmt;
      long nv = 0, nc = 0;
      if (!(ls >> p >> fmt >> nv >> nc) || fmt != "cnf")
        throw FormatError("malformed problem line", lineno);
      if (nv < 3 || nv > kMaxQubits)
        throw FormatError("variable count out of range", lineno);
      if (nc < 0) throw FormatError("negative clause count", lineno);
      n = static_cast<int>(nv);
      declared = nc;
      continue;
    }
    if (n < 0) throw FormatError("clause data before problem line", lineno);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      if (tok == "%") {
        ended = true;
        break;
      }
      const long v = parse_int(tok, lineno);
      if (v == 0) {
        if (cur.size() != 3)
          throw FormatError("clause width must be exactly 3", lineno);
        Clause c;
        for (int i = 0; i < 3; ++i) {
          const long var = cur[i] > 0 ? cur[i] : -cur[i];
          if (var > n) throw FormatError("literal exceeds variable count", lineno);
          c.lits[i] = Literal{static_cast<int>(var), cur[i] > 0};
          for (int j = 0; j < i; ++j)
            if (c.lits[j].var == c.lits[i].var)
              throw FormatError("clause repeats a variable", lineno);
        }
        clauses.push_back(c);
        cur.clear();
      } else {
        if (cur.size() == 3)
          throw FormatError("clause width must be exactly 3", lineno);
        cur.push_back(v);
      }
    }
  }
  if (!cur.empty()) throw FormatError("unterminated clause at end of input", lineno);
  if (n < 0) throw FormatError("missing problem line", lineno);
  if (declared != static_cast<long>(clauses.size()))
    throw FormatError("clause count does not match problem line", lineno);
  return SatInstance(n, std::move(clauses));
}

SatInstance parse_dimacs_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  return parse_dimacs(in);
}

std::string to_dimacs(const SatInstance& inst) {
  std::ostringstream out;
  out << "p cnf " << inst.num_vars() << ' ' << inst.clauses().size() << '\n';
  for (const auto& c : inst.clauses()) {
    for (const auto& lit : c.lits) out << (lit.positive ? lit.var : -lit.var) << ' ';
    out << "0\n";
  }
  return out.str();
}

CostSpec encode_energy(const SatInstance& inst) {
  const int n = inst.num_vars();
  std::vector<double> table(dimension(n), 0.0);
  for (const auto& c : inst.clauses()) {
    // The clause is violated exactly when all three literals are false:
    // bit 1 for a positive literal, bit 0 for a negated one.
    std::uint64_t mask = 0, value = 0;
    for (const auto& lit : c.lits) {
      const int p = bit_position(lit.var, n);
      mask |= std::uint64_t{1} << p;
      if (lit.positive) value |= std::uint64_t{1} << p;
    }
    const std::uint64_t cmask = (dimension(n) - 1) & ~mask;
    std::uint64_t sub = cmask;
    while (true) {
      table[value | sub] += 1.0;
      if (sub == 0) break;
      sub = (sub - 1) & cmask;
    }
  }
  return CostSpec{n, std::move(table)};
}

SatInstance random_instance(int num_vars, int num_clauses, std::uint64_t seed) {
  check_qubit_count(num_vars);
  if (num_vars < 3) throw ContractViolation("3-SAT needs at least three variables");
  if (num_clauses < 1) throw ContractViolation("need at least one clause");
  if (num_clauses > max_clause_count(num_vars))
    throw ContractViolation("clause count exceeds the distinct-clause bound 8*C(n,3)");
  Rng rng(seed);
  std::vector<Clause> clauses;
  clauses.reserve(static_cast<std::size_t>(num_clauses));
  const auto nv = static_cast<std::uint64_t>(num_vars);
  for (int k = 0; k < num_clauses; ++k) {
    int vars[3];
    for (int i = 0; i < 3; ++i) {
      int v;
      bool fresh;
      do {
        v = static_cast<int>(rng.uniform_int(1, nv));
        fresh = true;
        for (int j = 0; j < i; ++j) fresh = fresh && vars[j] != v;
      } while (!fresh);
      vars[i] = v;
    }
    Clause c;
    for (int i = 0; i < 3; ++i)
      c.lits[i] = Literal{vars[i], rng.uniform_int(0, 1) == 1};
    clauses.push_back(c);
  }
  return SatInstance(num_vars, std::move(clauses));
}

}  // namespace adiaq

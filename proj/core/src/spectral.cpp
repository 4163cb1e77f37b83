#include "adiaq/spectral.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "adiaq/basis.hpp"
#include "adiaq/errors.hpp"
#include "adiaq/parallel.hpp"
#include "adiaq/rng.hpp"

namespace adiaq {

namespace {

constexpr std::uint64_t kDenseFallbackDim = 64;

using RowMajorMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::MatrixXd dense_matrix(const Operator& op) {
  const auto d = op.dense();
  const auto dim = static_cast<Eigen::Index>(op.dim());
  return Eigen::Map<const RowMajorMatrix>(d.data(), dim, dim);
}

double residual_norm(const Operator& op, const std::vector<double>& v, double theta) {
  std::vector<double> w(v.size());
  op.apply(v, w);
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double r = w[i] - theta * v[i];
    acc += r * r;
  }
  return std::sqrt(acc);
}

bool nearly_equal_level(double a, double b) {
  return std::abs(b - a) <= 1e-8 * std::max(1.0, std::abs(a));
}

// Two-pass modified Gram-Schmidt of column j of V against columns [0, j).
// Returns the norm that remained after orthogonalization.
double orthogonalize_column(Eigen::MatrixXd& V, Eigen::Index j) {
  for (int pass = 0; pass < 2; ++pass)
    for (Eigen::Index i = 0; i < j; ++i)
      V.col(j) -= V.col(i).dot(V.col(j)) * V.col(i);
  return V.col(j).norm();
}

void fill_random(Eigen::VectorXd& v, Rng& rng) {
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.normal();
}

}  // namespace

std::vector<std::pair<double, std::int64_t>> group_levels(
    const std::vector<double>& eigenvalues) {
  std::vector<std::pair<double, std::int64_t>> levels;
  for (double e : eigenvalues) {
    if (!levels.empty() && nearly_equal_level(levels.back().first, e))
      ++levels.back().second;
    else
      levels.emplace_back(e, 1);
  }
  return levels;
}

LowestTwoResult lowest_two(const Operator& op, const LanczosOptions& opts) {
  const std::uint64_t dim = op.dim();
  if (dim < 2) throw ContractViolation("need dimension at least 2");

  LowestTwoResult out;
  if (dim <= kDenseFallbackDim) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_matrix(op));
    out.e0 = es.eigenvalues()[0];
    out.e1 = es.eigenvalues()[1];
    out.v0.assign(es.eigenvectors().col(0).data(),
                  es.eigenvectors().col(0).data() + dim);
    out.v1.assign(es.eigenvectors().col(1).data(),
                  es.eigenvectors().col(1).data() + dim);
    out.stats.matvecs = 2;
    out.stats.residual0 = residual_norm(op, out.v0, out.e0);
    out.stats.residual1 = residual_norm(op, out.v1, out.e1);
    out.ground_degenerate = nearly_equal_level(out.e0, out.e1);
    return out;
  }

  // Memory guard: V and W together stay within ~1.2 GB.
  const auto budget_cols =
      static_cast<int>(std::max<std::uint64_t>(6, 1'200'000'000 / (16 * dim)));
  const int mb = std::max(6, std::min(opts.max_basis, budget_cols));
  const int keep = std::max(2, std::min(opts.keep, mb - 3));

  Eigen::MatrixXd V(static_cast<Eigen::Index>(dim), mb);
  Eigen::MatrixXd W(static_cast<Eigen::Index>(dim), mb);
  Rng rng(opts.seed);

  // Seed block: warm vectors when given, otherwise the uniform vector plus
  // a small deterministic perturbation and one random direction.
  Eigen::VectorXd s0(static_cast<Eigen::Index>(dim)), s1(static_cast<Eigen::Index>(dim));
  if (opts.warm0 && opts.warm0->size() == dim) {
    s0 = Eigen::Map<const Eigen::VectorXd>(opts.warm0->data(),
                                           static_cast<Eigen::Index>(dim));
    out.stats.warm_started = true;
  } else {
    const double u = 1.0 / std::sqrt(static_cast<double>(dim));
    for (Eigen::Index i = 0; i < s0.size(); ++i) s0[i] = u * (1.0 + 1e-3 * rng.normal());
  }
  if (opts.warm1 && opts.warm1->size() == dim) {
    s1 = Eigen::Map<const Eigen::VectorXd>(opts.warm1->data(),
                                           static_cast<Eigen::Index>(dim));
  } else {
    fill_random(s1, rng);
  }

  auto matvec_col = [&](Eigen::Index j) {
    std::span<const double> in(V.col(j).data(), dim);
    std::span<double> outw(W.col(j).data(), dim);
    op.apply(in, outw);
    ++out.stats.matvecs;
  };

  // Seed columns for the current restart cycle; starts as the seed block,
  // later the kept Ritz vectors followed by the two residual directions.
  std::vector<Eigen::VectorXd> seeds{s0, s1};
  double best_res = std::numeric_limits<double>::infinity();

  while (true) {
    int nv = 0;
    for (auto& s : seeds) {
      V.col(nv) = s;
      double nrm = orthogonalize_column(V, nv);
      if (nrm < 1e-12) {
        Eigen::VectorXd tmp(static_cast<Eigen::Index>(dim));
        fill_random(tmp, rng);
        V.col(nv) = tmp;
        nrm = orthogonalize_column(V, nv);
        if (nrm < 1e-12) continue;
      }
      V.col(nv) /= nrm;
      matvec_col(nv);
      ++nv;
    }
    // Expand pairwise so both residual directions grow Krylov spaces.
    while (nv < mb) {
      V.col(nv) = W.col(nv - 2);
      double nrm = orthogonalize_column(V, nv);
      if (nrm < 1e-10 * W.col(nv - 2).norm() || nrm < 1e-300) {
        Eigen::VectorXd tmp(static_cast<Eigen::Index>(dim));
        fill_random(tmp, rng);
        V.col(nv) = tmp;
        nrm = orthogonalize_column(V, nv);
        if (nrm < 1e-12) break;
      }
      V.col(nv) /= nrm;
      matvec_col(nv);
      ++nv;
    }
    if (nv < 2) throw ConvergenceError("basis collapsed", best_res);

    Eigen::MatrixXd T = V.leftCols(nv).transpose() * W.leftCols(nv);
    T = 0.5 * (T + T.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);

    const int kritz = std::min(keep, nv);
    Eigen::MatrixXd X = V.leftCols(nv) * es.eigenvectors().leftCols(kritz);
    Eigen::MatrixXd HX = W.leftCols(nv) * es.eigenvectors().leftCols(kritz);
    const double th0 = es.eigenvalues()[0];
    const double th1 = es.eigenvalues()[1];
    Eigen::VectorXd r0 = HX.col(0) - th0 * X.col(0);
    Eigen::VectorXd r1 = HX.col(1) - th1 * X.col(1);
    const double res0 = r0.norm();
    const double res1 = r1.norm();
    best_res = std::min(best_res, std::max(res0, res1));

    const double bound0 = opts.tol * std::max(1.0, std::abs(th0));
    const double bound1 = opts.tol * std::max(1.0, std::abs(th1));
    if (res0 <= bound0 && res1 <= bound1) {
      out.e0 = th0;
      out.e1 = th1;
      out.v0.assign(X.col(0).data(), X.col(0).data() + dim);
      out.v1.assign(X.col(1).data(), X.col(1).data() + dim);
      out.stats.residual0 = res0;
      out.stats.residual1 = res1;
      out.ground_degenerate = nearly_equal_level(th0, th1);
      return out;
    }
    if (out.stats.matvecs >= opts.max_matvecs)
      throw ConvergenceError("eigensolver hit the matvec budget", best_res);

    ++out.stats.restarts;
    seeds.clear();
    for (int i = 0; i < kritz; ++i) seeds.emplace_back(X.col(i));
    if (res0 > 1e-300) seeds.emplace_back(r0 / res0);
    if (res1 > 1e-300) seeds.emplace_back(r1 / res1);
  }
}

SpectrumResult dense_spectrum(const Operator& op, bool want_vectors) {
  if (op.n() > kMaxDenseSpectrumQubits)
    throw SizeGuardError("dense spectrum limited to 12 qubits");
  SpectrumResult out;
  out.n = op.n();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.compute(dense_matrix(op),
             want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  out.eigenvalues.assign(es.eigenvalues().data(),
                         es.eigenvalues().data() + es.eigenvalues().size());
  if (want_vectors)
    out.eigenvectors.assign(es.eigenvectors().data(),
                            es.eigenvectors().data() + es.eigenvectors().size());
  out.levels = group_levels(out.eigenvalues);
  return out;
}

SpectrumResult separable_closed_form(int n, double s) {
  check_qubit_count(n);
  if (!(s >= 0.0 && s <= 1.0))
    throw ContractViolation("interpolation parameter outside [0,1]");
  const double q = 1.0 - 2.0 * s + 2.0 * s * s;
  const double root = std::sqrt(q);
  const double e0 = 0.5 * n * (1.0 - root);
  SpectrumResult out;
  out.n = n;
  out.levels.reserve(static_cast<std::size_t>(n) + 1);
  std::int64_t binom = 1;
  for (int k = 0; k <= n; ++k) {
    out.levels.emplace_back(e0 + k * root, binom);
    binom = binom * (n - k) / (k + 1);
  }
  if (n <= kMaxDenseSpectrumQubits) {
    out.eigenvalues.reserve(dimension(n));
    for (const auto& [e, mult] : out.levels)
      out.eigenvalues.insert(out.eigenvalues.end(), static_cast<std::size_t>(mult), e);
  }
  return out;
}

MinimizeResult golden_minimize(const std::function<double(double)>& f, double a,
                               double b, double x_tol, double f_tol,
                               int max_iterations) {
  if (!(a < b)) throw ContractViolation("empty bracket");
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - gr * (b - a);
  double x2 = a + gr * (b - a);
  double f1 = f(x1), f2 = f(x2);
  MinimizeResult out;
  out.evaluations = 2;
  if (f1 <= f2) {
    out.x = x1;
    out.f = f1;
  } else {
    out.x = x2;
    out.f = f2;
  }
  double window_best = out.f;
  for (int it = 0; it < max_iterations; ++it) {
    if (b - a <= x_tol) break;
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = f(x1);
      if (f1 < out.f) {
        out.f = f1;
        out.x = x1;
      }
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = f(x2);
      if (f2 < out.f) {
        out.f = f2;
        out.x = x2;
      }
    }
    ++out.evaluations;
    ++out.iterations;
    if (out.iterations % 4 == 0) {
      if (window_best - out.f < f_tol && out.iterations >= 8) {
        out.converged_on_f = true;
        break;
      }
      window_best = out.f;
    }
  }
  return out;
}

std::vector<double> uniform_grid(int points) {
  if (points < 2) throw ContractViolation("grid needs at least two points");
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i)
    grid[static_cast<std::size_t>(i)] = static_cast<double>(i) / (points - 1);
  grid.front() = 0.0;
  grid.back() = 1.0;
  return grid;
}

namespace {

void validate_grid(const std::vector<double>& grid) {
  if (grid.size() < 3) throw ContractViolation("sweep grid needs at least 3 points");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0 && grid[i] <= 1.0))
      throw ContractViolation("grid point outside [0,1]");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw ContractViolation("grid must be strictly increasing");
  }
}

}  // namespace

GapProfile gap_sweep(const InterpolatingFamily& family, std::vector<double> grid,
                     const SweepOptions& opts) {
  validate_grid(grid);
  GapProfile profile;
  profile.family_id = family.id();
  profile.samples.resize(grid.size());

  if (opts.threads > 1) {
    std::vector<SolverStats> stats(grid.size());
    parallel_for(0, static_cast<std::int64_t>(grid.size()), opts.threads,
                 [&](std::int64_t i) {
                   const auto idx = static_cast<std::size_t>(i);
                   auto r = lowest_two(family.at(grid[idx]), opts.solver);
                   profile.samples[idx] =
                       GapSample{grid[idx], r.e0, r.e1, r.stats.residual0,
                                 r.stats.residual1};
                   stats[idx] = r.stats;
                 });
    for (const auto& st : stats) {
      profile.total_stats.matvecs += st.matvecs;
      profile.total_stats.restarts += st.restarts;
    }
  } else {
    std::vector<double> prev0, prev1;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      LanczosOptions local = opts.solver;
      if (opts.warm_start && !prev0.empty()) {
        local.warm0 = &prev0;
        local.warm1 = &prev1;
      }
      auto r = lowest_two(family.at(grid[i]), local);
      profile.samples[i] =
          GapSample{grid[i], r.e0, r.e1, r.stats.residual0, r.stats.residual1};
      profile.total_stats.matvecs += r.stats.matvecs;
      profile.total_stats.restarts += r.stats.restarts;
      if (opts.warm_start) {
        prev0 = std::move(r.v0);
        prev1 = std::move(r.v1);
      }
    }
  }

  std::size_t kmin = 0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double g = profile.samples[i].e1 - profile.samples[i].e0;
    if (g < profile.samples[kmin].e1 - profile.samples[kmin].e0) kmin = i;
  }
  profile.g_min = profile.samples[kmin].e1 - profile.samples[kmin].e0;
  profile.s_star = profile.samples[kmin].s;

  if (!opts.refine) return profile;

  // Golden refinement around the smallest sample, warm-starting each
  // evaluation from the previous one.
  std::vector<double> warm0, warm1;
  auto eval_gap = [&](double s) {
    LanczosOptions local = opts.solver;
    if (opts.warm_start && !warm0.empty()) {
      local.warm0 = &warm0;
      local.warm1 = &warm1;
    }
    auto r = lowest_two(family.at(s), local);
    profile.total_stats.matvecs += r.stats.matvecs;
    profile.total_stats.restarts += r.stats.restarts;
    if (opts.warm_start) {
      warm0 = std::move(r.v0);
      warm1 = std::move(r.v1);
    }
    return r.e1 - r.e0;
  };

  double a = grid[kmin == 0 ? 0 : kmin - 1];
  double b = grid[std::min(kmin + 1, grid.size() - 1)];
  RefinementRecord rec;

  // A bracket whose interior beats neither endpoint neighborhood hints at
  // structure the grid missed; densify it tenfold before trusting golden
  // section's unimodality assumption.
  {
    const double ga = kmin == 0 ? profile.g_min
                                : profile.samples[kmin - 1].e1 - profile.samples[kmin - 1].e0;
    const double gb = kmin + 1 >= grid.size()
                          ? profile.g_min
                          : profile.samples[kmin + 1].e1 - profile.samples[kmin + 1].e0;
    const double probe1 = eval_gap(a + 0.382 * (b - a));
    const double probe2 = eval_gap(a + 0.618 * (b - a));
    rec.extra_evaluations += 2;
    if (std::min(probe1, probe2) > std::max({profile.g_min, ga, gb}) + 1e-13) {
      rec.densified = true;
      double best_s = profile.s_star, best_g = profile.g_min;
      for (int k = 1; k < 10; ++k) {
        const double s = a + (b - a) * k / 10.0;
        const double g = eval_gap(s);
        ++rec.extra_evaluations;
        if (g < best_g) {
          best_g = g;
          best_s = s;
        }
      }
      profile.g_min = std::min(profile.g_min, best_g);
      const double h = (b - a) / 10.0;
      a = std::max(a, best_s - h);
      b = std::min(b, best_s + h);
    } else {
      profile.g_min = std::min({profile.g_min, probe1, probe2});
    }
  }

  auto res = golden_minimize(eval_gap, a, b, opts.s_tol, opts.gap_tol, 200);
  rec.bracket_lo = a;
  rec.bracket_hi = b;
  rec.iterations = res.iterations;
  rec.extra_evaluations += res.evaluations;
  rec.converged_on_gap = res.converged_on_f;
  if (res.f < profile.g_min) {
    profile.g_min = res.f;
    profile.s_star = res.x;
  }
  profile.refinement = rec;
  return profile;
}

ReducedSearchSubspace::ReducedSearchSubspace(const InterpolatingFamily& family,
                                           const TargetState& target, double rank_tol)
    : n_(family.n()), family_(family) {
  target.validate();
  if (target.n != n_) throw ContractViolation("target size does not match family");
  if (!family.h1().is_diagonal())
    throw ContractViolation("reduction expects a diagonal final Hamiltonian");

  const std::uint64_t dim = dimension(n_);
  const int cap = n_ + 2;
  std::vector<std::vector<double>> basis;
  basis.emplace_back(dim, 0.0);
  basis[0][target.index] = 1.0;

  const Operator* gens[2] = {&family.h0(), &family.h1()};
  std::vector<double> w(dim);
  // Largest image norm seen so far. A basis vector can land in a
  // generator's kernel, where its image is rounding dust rather than an
  // exact zero; judging such a candidate by the relative residual alone
  // would promote noise to a basis direction, so anything negligible on
  // this scale is dropped outright.
  double image_scale = 0.0;
  for (std::size_t head = 0; head < basis.size(); ++head) {
    for (const Operator* g : gens) {
      g->apply(basis[head], w);
      double before = 0.0;
      for (double x : w) before += x * x;
      before = std::sqrt(before);
      image_scale = std::max(image_scale, before);
      if (before <= rank_tol * image_scale) continue;
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& bvec : basis) {
          double dot = 0.0;
          for (std::uint64_t i = 0; i < dim; ++i) dot += bvec[i] * w[i];
          for (std::uint64_t i = 0; i < dim; ++i) w[i] -= dot * bvec[i];
        }
      double after = 0.0;
      for (double x : w) after += x * x;
      after = std::sqrt(after);
      if (after <= rank_tol * before) continue;
      if (static_cast<int>(basis.size()) >= cap)
        throw RankToleranceError(
            "closure dimension exceeds n+2; family lacks the search symmetry");
      auto& nb = basis.emplace_back(w);
      for (auto& x : nb) x /= after;
    }
  }
  basis_ = std::move(basis);
}

std::vector<double> ReducedSearchSubspace::reduced_matrix(double s) const {
  const int k = dim();
  const std::uint64_t full = dimension(n_);
  const Operator h = family_.at(s);
  std::vector<double> r(static_cast<std::size_t>(k) * k, 0.0);
  std::vector<double> w(full);
  for (int j = 0; j < k; ++j) {
    h.apply(basis_[static_cast<std::size_t>(j)], w);
    for (int i = 0; i <= j; ++i) {
      double dot = 0.0;
      const auto& bi = basis_[static_cast<std::size_t>(i)];
      for (std::uint64_t p = 0; p < full; ++p) dot += bi[p] * w[p];
      r[static_cast<std::size_t>(i) * k + j] = dot;
      r[static_cast<std::size_t>(j) * k + i] = dot;
    }
  }
  return r;
}

std::pair<double, double> ReducedSearchSubspace::lowest_two_reduced(double s) const {
  const int k = dim();
  const auto r = reduced_matrix(s);
  Eigen::Map<const RowMajorMatrix> M(r.data(), k, k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.compute(M, Eigen::EigenvaluesOnly);
  return {es.eigenvalues()[0], es.eigenvalues()[1]};
}

GapProfile reduced_gap_profile(const ReducedSearchSubspace& problem,
                               std::vector<double> grid, double s_tol,
                               double gap_tol) {
  validate_grid(grid);
  // H0 and H1 compress once; every evaluation is then a k x k solve.
  const int k = problem.dim();
  const auto r0 = problem.reduced_matrix(0.0);
  const auto r1 = problem.reduced_matrix(1.0);
  Eigen::Map<const RowMajorMatrix> R0(r0.data(), k, k);
  Eigen::Map<const RowMajorMatrix> R1(r1.data(), k, k);

  auto lowest_pair = [&](double s) {
    Eigen::MatrixXd M = (1.0 - s) * R0 + s * R1;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.compute(M, Eigen::EigenvaluesOnly);
    return std::pair<double, double>{es.eigenvalues()[0], es.eigenvalues()[1]};
  };

  GapProfile profile;
  profile.family_id = "reduced";
  profile.samples.resize(grid.size());
  std::size_t kmin = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto [e0, e1] = lowest_pair(grid[i]);
    profile.samples[i] = GapSample{grid[i], e0, e1, 0.0, 0.0};
    if (e1 - e0 < profile.samples[kmin].e1 - profile.samples[kmin].e0) kmin = i;
  }
  profile.g_min = profile.samples[kmin].e1 - profile.samples[kmin].e0;
  profile.s_star = profile.samples[kmin].s;

  const double a = grid[kmin == 0 ? 0 : kmin - 1];
  const double b = grid[std::min(kmin + 1, grid.size() - 1)];
  auto res = golden_minimize(
      [&](double s) {
        const auto [e0, e1] = lowest_pair(s);
        return e1 - e0;
      },
      a, b, s_tol, gap_tol, 200);
  profile.refinement.bracket_lo = a;
  profile.refinement.bracket_hi = b;
  profile.refinement.iterations = res.iterations;
  profile.refinement.extra_evaluations = res.evaluations;
  profile.refinement.converged_on_gap = res.converged_on_f;
  if (res.f < profile.g_min) {
    profile.g_min = res.f;
    profile.s_star = res.x;
  }
  return profile;
}

std::vector<CrossingEvent> detect_crossings(const InterpolatingFamily& family,
                                            const std::vector<double>& grid,
                                            const CrossingOptions& opts) {
  if (family.n() > kMaxDenseSpectrumQubits)
    throw SizeGuardError("crossing detection runs on the dense path (n <= 12)");
  validate_grid(grid);
  const auto dim = dimension(family.n());
  const int tracked =
      std::min<int>(opts.tracked_levels, static_cast<int>(dim) - 1);
  if (tracked < 1) throw ContractViolation("need at least one tracked separation");

  auto values_at = [&](double s) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.compute(dense_matrix(family.at(s)), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  };
  auto vectors_at = [&](double s) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.compute(dense_matrix(family.at(s)));
    return es;
  };

  std::vector<Eigen::VectorXd> values;
  values.reserve(grid.size());
  for (double s : grid) values.push_back(values_at(s));

  std::vector<CrossingEvent> events;
  for (int lvl = 0; lvl < tracked; ++lvl) {
    auto sep = [&](std::size_t j) { return values[j][lvl + 1] - values[j][lvl]; };
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const bool left_ok = j == 0 || sep(j) <= sep(j - 1);
      const bool right_ok = j + 1 == grid.size() || sep(j) <= sep(j + 1);
      if (!(left_ok && right_ok) || sep(j) >= opts.window) continue;
      const double a = grid[j == 0 ? 0 : j - 1];
      const double b = grid[std::min(j + 1, grid.size() - 1)];
      if (!(a < b)) continue;
      auto res = golden_minimize(
          [&](double s) {
            const auto ev = values_at(s);
            return ev[lvl + 1] - ev[lvl];
          },
          a, b, opts.s_tol, 0.0, 300);
      double s_star = res.x;
      double min_sep = std::min(res.f, sep(j));
      if (res.f > sep(j)) s_star = grid[j];
      if (min_sep >= opts.window) continue;

      CrossingEvent ev;
      ev.s = s_star;
      ev.lower_level = lvl;
      ev.min_separation = min_sep;
      const auto full = vectors_at(s_star);
      const double scale = std::max(1.0, std::abs(full.eigenvalues()[lvl]));
      // A true crossing refined to within s_tol of the node still shows a
      // separation up to the local slope times s_tol, so the threshold has
      // to scale with the slope; an avoided crossing keeps a floor of
      // twice the coupling no matter how tight the bracket gets. The
      // eigenvector characters must also exchange across the node.
      const double delta = std::min({16.0 * opts.s_tol, s_star, 1.0 - s_star});
      bool swapped = true;
      double slope_est = 0.0;
      if (delta > 0.0) {
        const auto below = vectors_at(s_star - delta);
        const auto above = vectors_at(s_star + delta);
        const double sep_below =
            below.eigenvalues()[lvl + 1] - below.eigenvalues()[lvl];
        const double sep_above =
            above.eigenvalues()[lvl + 1] - above.eigenvalues()[lvl];
        slope_est = std::max(
            {0.0, (sep_below - min_sep) / delta, (sep_above - min_sep) / delta});
        const double kept = std::abs(
            below.eigenvectors().col(lvl).dot(above.eigenvectors().col(lvl)));
        const double crossed = std::abs(
            below.eigenvectors().col(lvl).dot(above.eigenvectors().col(lvl + 1)));
        swapped = crossed > kept;
      }
      const double resolution =
          std::max(1e-9 * scale, 4.0 * slope_est * opts.s_tol);
      ev.true_crossing =
          min_sep <= 1e-9 * scale || (min_sep <= resolution && swapped);
      if (opts.target) {
        if (*opts.target >= dim) throw ContractViolation("target index out of range");
        const double amp = full.eigenvectors()(
            static_cast<Eigen::Index>(*opts.target), lvl);
        ev.target_overlap = amp * amp;
      }
      // Local minima on adjacent grid points refine to the same event.
      bool duplicate = false;
      for (auto& prev : events)
        if (prev.lower_level == lvl && std::abs(prev.s - ev.s) <= 16 * opts.s_tol) {
          duplicate = true;
          if (ev.min_separation < prev.min_separation) prev = ev;
          break;
        }
      if (!duplicate) events.push_back(ev);
    }
  }
  std::sort(events.begin(), events.end(),
            [](const CrossingEvent& x, const CrossingEvent& y) { return x.s < y.s; });
  return events;
}

}  // namespace adiaq

#include "curvcomplex/simplex.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace curvcomplex;

TEST_CASE("random LPs match vertex enumeration") {
  std::mt19937_64 rng(2024);
  int feasible = 0;
  for (int k = 0; k < 40; ++k) {
    const int n = 2 + static_cast<int>(rng() % 5);
    const int m = 1 + static_cast<int>(rng() % 4);
    const LinearModel lp = fixtures::random_lp(rng, n, m);
    const oracle::VertexOptimum ref = oracle::enumerate_vertices(lp);
    const LPSolution s = solve(lp);
    CAPTURE(k);
    REQUIRE(ref.feasible);
    REQUIRE(s.optimal());
    ++feasible;
    CHECK(std::abs(s.objective - ref.objective) <= 1e-8 * std::max(1.0, std::abs(ref.objective)));
    CHECK(lp.max_row_violation(s.primal) <= 1e-9);
    CHECK(lp.max_bound_violation(s.primal) <= 1e-9);
  }
  CHECK(feasible == 40);
}

TEST_CASE("infeasible and unbounded programs") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 5; ++k) {
    const LinearModel lp = fixtures::random_lp(rng, 4, 3, false);
    CHECK_FALSE(oracle::enumerate_vertices(lp).feasible);
    CHECK(solve(lp).status == SolveStatus::Infeasible);
  }
  LinearModel ray;
  ray.add_variable(-1.0, 0.0, kInfinity, false, {});
  ray.add_variable(0.0, 0.0, kInfinity, false, {});
  ray.add_row(std::vector<Index>{0, 1}, std::vector<double>{1.0, -1.0}, Relation::LessEqual, 2.0, {});
  CHECK(solve(ray).status == SolveStatus::Unbounded);
}

TEST_CASE("Beale's cycling example terminates at the optimum") {
  const LinearModel lp = fixtures::beale();
  for (bool perturb : {true, false}) {
    SimplexOptions o;
    o.perturb = perturb;
    const LPSolution s = solve(lp, o);
    REQUIRE(s.optimal());
    CHECK(s.objective == doctest::Approx(-1.25).epsilon(1e-12));
  }
  CHECK(oracle::enumerate_vertices(lp).objective == doctest::Approx(-1.25));
}

TEST_CASE("warm re-solves agree with cold solves") {
  std::mt19937_64 rng(77);
  for (int k = 0; k < 10; ++k) {
    const LinearModel lp = fixtures::random_lp(rng, 6, 4);
    const LPSolution first = solve(lp);
    REQUIRE(first.optimal());
    std::vector<BoundChange> changes{{0, lp.lower(0), lp.lower(0)}, {3, lp.upper(3), lp.upper(3)}};
    const LPSolution warm = resolve_with_bounds(lp, first, changes);
    LinearModel fixed = lp;
    for (const auto& c : changes) fixed.set_bounds(c.variable, c.lower, c.upper);
    const LPSolution cold = solve(fixed);
    REQUIRE(warm.status == cold.status);
    if (cold.optimal()) CHECK(warm.objective == doctest::Approx(cold.objective).epsilon(1e-10));
  }
}

TEST_CASE("appended rows reuse the previous basis") {
  std::mt19937_64 rng(9);
  LinearModel lp = fixtures::random_lp(rng, 5, 2);
  const LPSolution first = solve(lp);
  REQUIRE(first.optimal());
  std::vector<Index> cols{0, 1, 2, 3, 4};
  lp.add_row(cols, std::vector<double>{1, 1, 1, 1, 1}, Relation::LessEqual, first.primal.sum() - 0.5, {});
  const LPSolution warm = solve(lp, {}, &first.basis);
  const LPSolution cold = solve(lp);
  REQUIRE(warm.status == cold.status);
  if (cold.optimal()) CHECK(warm.objective == doctest::Approx(cold.objective).epsilon(1e-10));
}

TEST_CASE("iteration limit is reported") {
  std::mt19937_64 rng(3);
  const LinearModel lp = fixtures::random_lp(rng, 6, 4);
  SimplexOptions o;
  o.iteration_limit = 0;
  const LPSolution s = solve(lp, o);
  CHECK((s.status == SolveStatus::IterationLimit || s.status == SolveStatus::Optimal));
  CHECK(to_string(SolveStatus::Infeasible) == "infeasible");
}

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "hmt/cm_bounds.hpp"
#include "hmt/generators/beta_mixture.hpp"
#include "hmt/polish.hpp"

using namespace hmt;

namespace {

MomentSequence seq(std::vector<XReal> v) { return MomentSequence(std::move(v)); }

MomentSequence uniform_moments(int n) {
  std::vector<XReal> m;
  for (int k = 0; k <= n; ++k) m.push_back(XReal(1) / XReal(k + 1));
  return MomentSequence(std::move(m));
}

MomentSequence five_atoms(int n) {
  const std::vector<XReal> atoms{XReal(1) / XReal(8), XReal(1) / XReal(3), XReal(1) / XReal(2),
                                 XReal(2) / XReal(3), XReal(4) / XReal(5)};
  const std::vector<XReal> weights(5, XReal(1) / XReal(5));
  return discrete_moments(atoms, weights, n);
}

void check_band_invariants(const CMBand& band) {
  for (std::size_t i = 0; i < band.grid.size(); ++i) {
    CHECK(band.inf[i] >= 0.0);
    CHECK(band.inf[i] <= band.sup[i]);
    CHECK(band.sup[i] <= 1.0);
    if (i > 0) {
      CHECK(band.inf[i] >= band.inf[i - 1]);
      CHECK(band.sup[i] >= band.sup[i - 1]);
    }
  }
  if (band.grid.back() == 1.0) {
    CHECK(std::fabs(band.inf.back() - 1.0) <= band.lp_tol);
    CHECK(std::fabs(band.sup.back() - 1.0) <= band.lp_tol);
  }
}

}  // namespace

TEST_CASE("one-moment Markov bounds", "[cm_bounds]") {
  const auto m = seq({XReal(1), XReal(0.5)});
  const auto band = cm_band(m, {0.25, 0.75});
  CHECK(band.inf[0] == Catch::Approx(0.0).margin(1e-6));
  CHECK(band.sup[0] == Catch::Approx(2.0 / 3).margin(1e-6));
  CHECK(band.inf[1] == Catch::Approx(1.0 / 3).margin(1e-6));
  CHECK(band.sup[1] == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("x^2 leaves the band of the uniform moments", "[cm_bounds_x2]") {
  const auto grid = uniform_grid(50);
  const auto band = cm_band(uniform_moments(2), grid);
  bool outside = false;
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    const double f = grid[i] * grid[i];
    if (f < band.inf[i] - band.lp_tol || f > band.sup[i] + band.lp_tol) outside = true;
  }
  CHECK(outside);
}

TEST_CASE("band width examples", "[cm_bounds]") {
  const auto grid = uniform_grid(50);
  const auto b4 = cm_band(uniform_moments(4), grid);
  const auto b10 = cm_band(uniform_moments(10), grid);
  const auto w4 = band_width(b4);
  const auto w10 = band_width(b10);
  CHECK(w4.back() == 0.0);
  CHECK(w10.back() == 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(w10[i] <= w4[i] + b4.lp_tol);
  check_band_invariants(b4);
  check_band_invariants(b10);
}

TEST_CASE("five-atom sequence is recovered at n = 10", "[cm_bounds]") {
  const auto m = five_atoms(10);
  REQUIRE(hankel_report(m).classification == Validity::UniqueDiscrete);
  const auto mu = recover_discrete(m);
  REQUIRE(mu.atoms.size() == 5);
  const std::vector<double> atoms{0.125, 1.0 / 3, 0.5, 2.0 / 3, 0.8};
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(mu.atoms[i] == Catch::Approx(atoms[i]).margin(1e-12));
    CHECK(mu.weights[i] == Catch::Approx(0.2).margin(1e-12));
  }
  const auto grid = uniform_grid(50);
  const auto band = cm_band(m, grid);
  const auto width = band_width(band);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const bool jump = std::fabs(grid[i] - 0.5) < 1e-12 || std::fabs(grid[i] - 0.8) < 1e-12;
    if (jump) {
      CHECK(width[i] == Catch::Approx(0.2).margin(1e-9));
    } else {
      CHECK(width[i] <= 1e-3);
    }
  }
  check_band_invariants(band);
}

TEST_CASE("five-atom sequence at n = 8 leaves a wide band", "[cm_bounds]") {
  const auto m = five_atoms(8);
  REQUIRE(hankel_report(m).classification == Validity::Interior);
  const auto band = cm_band(m, uniform_grid(50));
  const auto width = band_width(band);
  CHECK(*std::max_element(width.begin(), width.end()) > 0.05);
  check_band_invariants(band);
}

TEST_CASE("two-point sequence gives the cdf and its left limit", "[cm_bounds]") {
  const auto band = cm_band(seq({XReal(1), XReal(0.5), XReal(0.5)}), {0.0, 0.3, 1.0});
  CHECK(band.inf == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(band.sup == std::vector<double>{0.5, 0.5, 1.0});
  CHECK(band.achieved_tol == 0.0);
}

TEST_CASE("cm_band errors", "[cm_bounds]") {
  CHECK_THROWS_AS(cm_band(seq({XReal(1), XReal(0.5), XReal(0.2)}), uniform_grid(4)), InfeasibleMoments);
  CmBandOptions small;
  small.support_grid_size = 30;
  CHECK_THROWS_AS(cm_band(uniform_moments(4), uniform_grid(4), small), DomainError);
  CHECK_THROWS_AS(cm_band(uniform_moments(2), {0.5, 0.2}), DomainError);
  CHECK_THROWS_AS(cm_band(uniform_moments(2), {}), DomainError);

  CmBandOptions strict;
  strict.lp_tol = 1e-15;
  strict.max_doublings = 1;
  Rng rng(41);
  const auto spec = random_beta_mixture(rng);
  try {
    cm_band(beta_mixture_moments(spec, 6), uniform_grid(10), strict);
    SUCCEED("converged at the strict tolerance");
  } catch (const NoConvergence& e) {
    CHECK_FALSE(e.band().converged);
    CHECK(e.band().achieved_tol > strict.lp_tol);
    CHECK(e.band().inf.size() == 11);
    check_band_invariants(e.band());
  }
}

TEST_CASE("bands contain the exact cdf of beta mixtures", "[cm_bounds]") {
  Rng rng(42);
  const auto grid = uniform_grid(50);
  for (int trial = 0; trial < 100; ++trial) {
    const auto spec = random_beta_mixture(rng);
    const auto m = beta_mixture_moments(spec, 10);
    for (int n : {4, 6, 8, 10}) {
      const auto band = cm_band(m.prefix(n), grid);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double f = beta_mixture_cdf(spec, grid[i]);
        CHECK(f >= band.inf[i] - band.lp_tol);
        CHECK(f <= band.sup[i] + band.lp_tol);
      }
    }
  }
}

TEST_CASE("bands shrink as moments are added", "[cm_bounds]") {
  Rng rng(43);
  const auto grid = uniform_grid(50);
  for (int trial = 0; trial < 20; ++trial) {
    const auto spec = random_beta_mixture(rng);
    const auto m = beta_mixture_moments(spec, 10);
    std::vector<CMBand> bands;
    for (int n : {4, 6, 8, 10}) bands.push_back(cm_band(m.prefix(n), grid));
    for (std::size_t b = 1; b < bands.size(); ++b) {
      for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(bands[b].inf[i] >= bands[b - 1].inf[i] - 2e-6);
        CHECK(bands[b].sup[i] <= bands[b - 1].sup[i] + 2e-6);
      }
      check_band_invariants(bands[b]);
    }
  }
}

TEST_CASE("every LP optimum is a measure with the given moments", "[cm_bounds]") {
  Rng rng(44);
  for (int trial = 0; trial < 5; ++trial) {
    const auto spec = random_beta_mixture(rng);
    const int n = 4 + 2 * trial;
    const auto m = beta_mixture_moments(spec, n);
    auto support = uniform_grid(2000);
    CmSolver solver(m, support, 1e-6);
    for (double x0 : {0.1, 0.37, 0.5, 0.82}) {
      for (Sense sense : {Sense::Minimize, Sense::Maximize}) {
        solver.add_points({x0});
        const auto sol = solver.solve(x0, sense);
        const auto mu = solver.measure();
        CHECK(mu.atoms.size() <= static_cast<std::size_t>(n + 1));
        double mass_left = 0.0;
        for (int k = 0; k <= n; ++k) {
          double mk = 0.0;
          for (std::size_t i = 0; i < mu.atoms.size(); ++i) mk += mu.weights[i] * std::pow(mu.atoms[i], k);
          CHECK(std::fabs(mk - m[k].to_double()) <= 1e-6);
        }
        for (std::size_t i = 0; i < mu.atoms.size(); ++i) {
          if (mu.atoms[i] <= x0 + CmSolver::kSame) mass_left += mu.weights[i];
        }
        CHECK(std::fabs(std::clamp(mass_left, 0.0, 1.0) - sol.value) <= 1e-9);
        CHECK(solver.residual() <= 1e-6);
      }
    }
  }
}

TEST_CASE("band CSV export", "[cm_bounds]") {
  CMBand band;
  band.grid = {0.0, 0.5, 1.0};
  band.inf = {0.0, 0.25, 1.0};
  band.sup = {0.5, 0.75, 1.0};
  CHECK(band_to_csv(band) == "x,inf,sup,width\n0,0,0.5,0.5\n0.5,0.25,0.75,0.5\n1,1,1,0\n");
}

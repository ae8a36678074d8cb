#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <vector>

#include "hmt/generators/beta_mixture.hpp"
#include "hmt/generators/canonical.hpp"
#include "hmt/generators/decay.hpp"
#include "hmt/polish.hpp"
#include "hmt/transforms.hpp"

using namespace hmt;

namespace {

RationalMoments rational_moments(std::vector<Rational> v) { return RationalMoments(std::move(v)); }

// m_k = int x^k d(x^d) = d / (k + d)
RationalMoments power_cdf_moments(int d, int n) {
  std::vector<Rational> m;
  for (int k = 0; k <= n; ++k) m.emplace_back(Rational(d, k + d));
  return RationalMoments(std::move(m));
}

MomentSequence uniform_moments(int n) {
  std::vector<XReal> m;
  for (int k = 0; k <= n; ++k) m.push_back(XReal(1) / XReal(k + 1));
  return MomentSequence(std::move(m));
}

std::vector<double> doubles(const std::vector<Rational>& v) {
  std::vector<double> out;
  for (const auto& q : v) out.push_back(to_double(q));
  return out;
}

std::vector<double> doubles(const std::vector<XReal>& v) {
  std::vector<double> out;
  for (const auto& x : v) out.push_back(x.to_double());
  return out;
}

std::complex<double> uniform_imag(double s) { return 1.0 / std::complex<double>(1.0, s); }

// 1/xi - 1/(e^xi - 1) is the mean of the density proportional to exp(-xi x)
double truncated_exponential_root(double mean) {
  auto f = [&](double xi) { return 1.0 / xi - 1.0 / std::expm1(xi) - mean; };
  double lo = -60.0;
  double hi = -1e-6;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(lo) * f(mid) <= 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

// ---------------------------------------------------------------- BM

TEST_CASE("bm_matrix examples", "[transforms]") {
  const auto a2 = bm_matrix(2);
  const std::vector<Rational> want2{1, -2, 1, 0, 2, -2, 0, 0, 1};
  CHECK(a2->exact == want2);
  const auto a1 = bm_matrix(1);
  CHECK(a1->exact == std::vector<Rational>{1, -1, 0, 1});
}

TEST_CASE("bm_matrix(150) largest entry follows the 3^n/n law", "[transforms]") {
  const auto a = bm_matrix(150);
  Rational biggest(0);
  for (const auto& q : a->exact) biggest = std::max(biggest, q < 0 ? Rational(-q) : q);
  const double predicted = std::sqrt(27.0) / (2.0 * M_PI) * std::pow(3.0, 150) / 150.0;
  const double ratio = to_double(biggest) / predicted;
  CHECK(ratio > 0.8);
  CHECK(ratio < 1.2);
}

TEST_CASE("bm_transform examples", "[transforms]") {
  const auto h = bm_transform(rational_moments({1, Rational(1, 2), Rational(1, 3)}));
  CHECK(h == std::vector<Rational>{Rational(1, 3), Rational(1, 3), Rational(1, 3)});
  const Rational m1(2, 7);
  CHECK(bm_transform(rational_moments({1, m1})) == std::vector<Rational>{1 - m1, m1});
  CHECK(bm_transform(rational_moments({1, m1}), LinearMode::Direct) == std::vector<Rational>{1 - m1, m1});
}

TEST_CASE("bm_cdf examples", "[transforms]") {
  const std::vector<double> h{1.0 / 3, 1.0 / 3, 1.0 / 3};
  CHECK(bm_cdf(h, 0.5) == Catch::Approx(2.0 / 3).epsilon(1e-15));
  CHECK(bm_cdf(h, 0.0) == 0.0);
  CHECK(bm_cdf(h, 1.0) == Catch::Approx(1.0).epsilon(1e-15));
  CHECK(bm_cdf(h, 0.49) == Catch::Approx(1.0 / 3).epsilon(1e-15));
}

TEST_CASE("BM masses form a probability vector", "[transforms]") {
  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 20;
    const auto m = generate_canonical(n, rng);
    const auto h = bm_transform(m);
    XReal total(0);
    for (const auto& v : h) {
      CHECK(v.to_double() >= -1e-12);
      total += v;
    }
    CHECK(std::fabs(total.to_double() - 1.0) <= 1e-12);
  }
}

TEST_CASE("BM and FL matrix paths equal the direct sums", "[transforms]") {
  Rng rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 30;
    const auto m = generate_canonical(n, rng);
    const auto hm = bm_transform(m, LinearMode::Matrix);
    const auto hd = bm_transform(m, LinearMode::Direct);
    for (int k = 0; k <= n; ++k) {
      const double d = hd[k].to_double();
      CHECK(std::fabs(hm[k].to_double() - d) <= 1e-12 * std::max(1.0, std::fabs(d)));
    }
    const auto cm = fl_coeffs(m, LinearMode::Matrix);
    const auto cd = fl_coeffs(m, LinearMode::Direct);
    for (std::size_t k = 0; k < cm.size(); ++k) {
      const double d = cd[k].to_double();
      CHECK(std::fabs(cm[k].to_double() - d) <= 1e-12 * std::max(1.0, std::fabs(d)));
    }
  }
}

TEST_CASE("BM needs the required digits at n = 60", "[transforms]") {
  Rng rng(23);
  const auto m = generate_canonical(60, rng);
  const int need = required_digits(MatrixKind::BM, 60);
  {
    ScopedDigits low(15);
    CHECK_THROWS_AS(bm_transform(m), PrecisionInsufficient);
    const auto h = bm_transform_unchecked(m);
    XReal total(0);
    for (const auto& v : h) total += v;
    CHECK(std::fabs(total.to_double() - 1.0) > 1e-3);
  }
  {
    ScopedDigits enough(need);
    const auto h = bm_transform(m);
    XReal total(0);
    for (const auto& v : h) {
      CHECK(v.to_double() >= -1e-12);
      total += v;
    }
    CHECK(std::fabs(total.to_double() - 1.0) <= 1e-12);
  }
}

// ---------------------------------------------------------------- FL

TEST_CASE("fl_matrix examples", "[transforms]") {
  const auto a1 = fl_matrix(1);
  CHECK(a1->exact == std::vector<Rational>{1, 0, -3, 3});
  CHECK(fl_matrix(0)->exact == std::vector<Rational>{1});
  const auto a = fl_matrix(12);
  for (int k = 0; k <= 12; ++k)
    for (int l = k + 1; l <= 12; ++l) CHECK(a->exact[k * 13 + l] == 0);
}

TEST_CASE("fl_matrix(50) respects the entry bound", "[transforms]") {
  const auto a = fl_matrix(50);
  Rational biggest(0);
  for (const auto& q : a->exact) biggest = std::max(biggest, q < 0 ? Rational(-q) : q);
  CHECK(biggest <= Rational(binomial_exact(100, 50) * binomial_exact(50, 16)));
}

TEST_CASE("fl_coeffs examples", "[transforms]") {
  const auto uniform = rational_moments({1, Rational(1, 2), Rational(1, 3)});
  CHECK(fl_coeffs(uniform) == std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
  CHECK(fl_coeffs(uniform, LinearMode::Direct) == std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
  const auto square = power_cdf_moments(2, 3);
  const std::vector<Rational> want{Rational(1, 3), Rational(1, 2), Rational(1, 6)};
  CHECK(fl_coeffs(square) == want);
  CHECK(fl_coeffs(square, LinearMode::Direct) == want);
}

TEST_CASE("fl_cdf examples", "[transforms]") {
  const std::vector<double> c{0.5, 0.5};
  CHECK(fl_cdf(c, 0.25) == Catch::Approx(0.25).epsilon(1e-15));
  CHECK(fl_cdf(c, 1.0) == Catch::Approx(1.0).epsilon(1e-15));
  CHECK(std::fabs(fl_cdf(c, 0.0)) <= 1e-15);
}

TEST_CASE("FL reproduces polynomial cdfs", "[transforms]") {
  for (int d = 1; d <= 5; ++d) {
    for (int n = d; n <= d + 6; ++n) {
      const auto c = doubles(fl_coeffs(power_cdf_moments(d, n + 1)));
      REQUIRE(c.size() == static_cast<std::size_t>(n + 1));
      for (double x : uniform_grid(100)) CHECK(std::fabs(fl_cdf(c, x) - std::pow(x, d)) <= 1e-8);
    }
  }
}

TEST_CASE("FL and BM refuse too little precision", "[transforms]") {
  const auto m = uniform_moments(50);
  ScopedDigits low(30);
  CHECK_THROWS_AS(fl_coeffs(m), PrecisionInsufficient);
  CHECK_NOTHROW(bm_transform(uniform_moments(40)));
}

// ---------------------------------------------------------------- FC

TEST_CASE("FC normalization constants", "[transforms]") {
  CHECK(fc_norm_factor(0).to_double() == Catch::Approx(1.0 / M_PI).epsilon(1e-15));
  CHECK(fc_norm_factor(1).to_double() == Catch::Approx(8.0 / M_PI).epsilon(1e-15));
  // 2 (Gamma(m+1) / Gamma(m+1/2))^2
  for (int m = 2; m <= 10; ++m) {
    const double g = std::exp(std::lgamma(m + 1.0) - std::lgamma(m + 0.5));
    CHECK(fc_norm_factor(m).to_double() == Catch::Approx(2.0 * g * g).epsilon(1e-13));
  }
}

TEST_CASE("fc_cdf examples", "[transforms]") {
  for (int order = 1; order <= 20; ++order) {
    const auto c = doubles(fc_coeffs(uniform_moments(order + 1)));
    CHECK(fc_cdf(c, 0.0) == 0.0);
    CHECK(fc_cdf(c, 1.0) == 1.0);
  }
}

TEST_CASE("FC matrix path equals the direct sums", "[transforms]") {
  Rng rng(24);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = generate_canonical(2 + trial, rng);
    const auto a = fc_coeffs(m, LinearMode::Matrix);
    const auto b = fc_coeffs(m, LinearMode::Direct);
    for (std::size_t k = 0; k < a.size(); ++k) {
      CHECK(std::fabs((a[k] - b[k]).to_double()) <= 1e-12 * std::max(1.0, std::fabs(b[k].to_double())));
    }
  }
}

TEST_CASE("FC on uniform moments is within 1e-3 of 1/2 at x = 1/2 for order 9 and up", "[transforms_fc_uniform]") {
  for (int order = 9; order <= 20; ++order) {
    const auto c = doubles(fc_coeffs(uniform_moments(order + 1)));
    CHECK(std::fabs(fc_cdf(c, 0.5) - 0.5) <= 1e-3);
  }
}

TEST_CASE("FC on uniform moments matches x within 1e-3 on U_20", "[transforms_fc_uniform]") {
  const auto out = fc_approx(uniform_moments(20));
  const auto f = polish(out.samples);
  for (double x : uniform_grid(20)) CHECK(std::fabs(f(x) - x) <= 1e-3);
}

// ---------------------------------------------------------------- ME

TEST_CASE("ME on uniform moments gives the zero vector", "[transforms]") {
  for (int n = 1; n <= 8; ++n) {
    const auto p = me_solve(uniform_moments(n));
    CHECK(p.converged());
    CHECK(p.gradient_norm <= 1e-8);
    for (double v : p.xi) CHECK(std::fabs(v) <= 1e-8);
    for (double x : {0.25, 0.5, 0.75}) CHECK(me_cdf(p, x) == Catch::Approx(x).margin(1e-12));
    CHECK(me_cdf(p, 0.0) == 0.0);
    CHECK(std::fabs(me_cdf(p, 1.0) - 1.0) <= 1e-10);
  }
}

TEST_CASE("ME with one moment solves the truncated exponential equation", "[transforms]") {
  // Beta(2,1): m_1 = 2/3
  const MomentSequence m(std::vector<XReal>{XReal(1), XReal(2) / XReal(3)});
  const auto p = me_solve(m);
  REQUIRE(p.converged());
  CHECK(p.xi[1] == Catch::Approx(truncated_exponential_root(2.0 / 3.0)).epsilon(1e-8));
  CHECK(std::fabs(me_cdf(p, 1.0) - 1.0) <= 1e-10);
}

TEST_CASE("ME reports failure by type, never a false convergence", "[transforms]") {
  Rng rng(25);
  int failures = 0;
  for (int trial = 0; trial < 5; ++trial) {
    const auto spec = random_decay_spec(DecayClass::Power, rng);
    const auto m = cm_moments(spec, 40);
    MeOptions opt;
    const auto p = me_solve(m, opt);
    if (p.converged()) {
      CHECK(p.gradient_norm <= opt.tol);
      CHECK_NOTHROW(me_approx(m, opt));
    } else {
      ++failures;
      bool typed = false;
      try {
        me_approx(m, opt);
      } catch (const NotConverged& e) {
        typed = e.residual() > opt.tol;
      } catch (const IllConditioned& e) {
        typed = e.condition() > opt.max_condition;
      }
      CHECK(typed);
    }
  }
  INFO("non-converged power-law cases at n = 40: " << failures);
  SUCCEED();
}

// ---------------------------------------------------------------- GP

TEST_CASE("gp_cdf examples", "[transforms]") {
  CHECK(std::fabs(gp_cdf(uniform_imag, 0.5, 0.1, 1000) - 0.5) <= 1e-3);
  CHECK(std::fabs(gp_cdf(uniform_imag, 1.0, 0.1, 1000) - 1.0) <= 1e-3);
  const double lh = std::log(0.5);
  auto atom = [lh](double s) { return std::exp(std::complex<double>(0.0, s * lh)); };
  CHECK(std::fabs(gp_cdf(atom, 0.5, 0.1, 1000) - 0.5) <= 1e-3);
  CHECK(gp_cdf(uniform_imag, 0.0, 0.1, 1000) == 0.0);
}

TEST_CASE("GP trapezoid is stable under halving the step", "[transforms]") {
  const GpTable coarse(uniform_imag, 0.1, 1000);
  const GpTable fine(uniform_imag, 0.05, 1000);
  for (double x : uniform_grid(150)) {
    if (x == 0.0) continue;
    CHECK(std::fabs(coarse.cdf(x) - fine.cdf(x)) <= 1e-4);
  }
}

TEST_CASE("gp_dynamic examples", "[transforms]") {
  const auto uni = gp_dynamic(uniform_imag, uniform_grid(150));
  CHECK(uni.refinements == 0);
  CHECK(uni.ds == 0.1);
  CHECK(uni.upsilon == 1000.0);

  // point mass at e^-10, sampled next to the jump where the trapezoid sum
  // overshoots
  auto atom = [](double s) { return std::exp(std::complex<double>(0.0, -10.0 * s)); };
  auto grid = uniform_grid(150);
  grid.insert(grid.begin() + 1, std::exp(-10.0 + M_PI / 1000.0));
  GpDynamicOptions opt;
  opt.max_points = 1e6;
  try {
    const auto res = gp_dynamic(atom, grid, opt);
    CHECK(res.refinements >= 1);
  } catch (const MemoryGuardError& e) {
    CHECK(e.upsilon() > 1000.0);
  }

  // values that never enter [0, 1] exhaust the guard
  auto wild = [](double) { return std::complex<double>(0.0, 5.0); };
  CHECK_THROWS_AS(gp_dynamic(wild, uniform_grid(10), opt), MemoryGuardError);
}

// ---------------------------------------------------------------- FJ

TEST_CASE("fj_params examples", "[transforms]") {
  const auto u = fj_params(XReal(0.5), XReal(1) / XReal(3));
  CHECK(std::fabs(u.alpha.to_double()) <= 1e-15);
  CHECK(std::fabs(u.beta.to_double()) <= 1e-15);
  const auto a = fj_params(XReal(0.5), XReal(0.375));
  CHECK(a.alpha.to_double() == Catch::Approx(-0.5).epsilon(1e-15));
  CHECK(a.beta.to_double() == Catch::Approx(-0.5).epsilon(1e-15));
  CHECK_THROWS_AS(fj_params(XReal(0.5), XReal(0.25)), Degenerate);
  CHECK_THROWS_AS(fj_params(XReal(0), XReal(0)), Degenerate);
}

TEST_CASE("FJ of order 1 and 2 is the beta approximation", "[transforms]") {
  Rng rng(26);
  for (int trial = 0; trial < 10; ++trial) {
    const auto spec = random_beta_mixture(rng);
    const auto m = beta_mixture_moments(spec, 2);
    const auto p = fj_params(m[1], m[2]);
    const double a = p.alpha.to_double();
    const double b = p.beta.to_double();
    for (int n : {1, 2}) {
      const auto out = fj_approx(m, n);
      for (std::size_t i = 0; i < out.samples.grid.size(); ++i) {
        const double x = out.samples.grid[i];
        const double want = x <= 0.0 ? 0.0 : x >= 1.0 ? 1.0 : incomplete_beta(b + 1.0, a + 1.0, x);
        CHECK(out.samples.values[i] == Catch::Approx(want).margin(1e-12));
      }
    }
  }
  const auto uni = fj_approx(uniform_moments(2), 2);
  for (std::size_t i = 0; i < uni.samples.grid.size(); ++i) {
    CHECK(uni.samples.values[i] == Catch::Approx(uni.samples.grid[i]).margin(1e-12));
  }
}

TEST_CASE("FJ annihilates the first two coefficients", "[transforms]") {
  Rng rng(27);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto m = generate_canonical(2 + trial % 10, rng);
    try {
      const auto fit = fj_coeffs(m);
      CHECK(std::fabs(fit.c[1].to_double()) + std::fabs(fit.c[2].to_double()) <= 1e-8);
      ++checked;
    } catch (const Degenerate&) {
      // alpha or beta at or below -1
    }
  }
  CHECK(checked > 50);
}

// ---------------------------------------------------------------- CM average

TEST_CASE("cm_average examples", "[transforms]") {
  CMBand band;
  band.grid = {0.5};
  band.inf = {0.2};
  band.sup = {0.6};
  CHECK(cm_average(band).values[0] == Catch::Approx(0.4).epsilon(1e-15));

  const MomentSequence half(std::vector<XReal>{XReal(1), XReal(0.5)});
  const auto b = cm_band(half, {0.25, 1.0});
  CHECK(cm_average(b).values[0] == Catch::Approx(1.0 / 3).margin(1e-6));
}

TEST_CASE("F_CM,1 has mean m_1 only when m_1 = 1/2", "[transforms]") {
  auto mean_of_average = [](double m1) {
    const MomentSequence m(std::vector<XReal>{XReal(1), XReal(m1)});
    const auto grid = uniform_grid(400);
    const auto avg = cm_average(cm_band(m, grid));
    // mean = int_0^1 (1 - F)
    double area = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
      area += 0.5 * (grid[i] - grid[i - 1]) * (2.0 - avg.values[i] - avg.values[i - 1]);
    }
    return area;
  };
  CHECK(std::fabs(mean_of_average(0.5) - 0.5) <= 2e-3);
  CHECK(std::fabs(mean_of_average(0.3) - 0.3) > 1e-2);
}

TEST_CASE("CM average stays within half the band width", "[transforms]") {
  Rng rng(28);
  for (int trial = 0; trial < 5; ++trial) {
    const auto spec = random_beta_mixture(rng);
    const auto m = beta_mixture_moments(spec, 6);
    const auto grid = uniform_grid(20);
    const auto band = cm_band(m, grid);
    const auto avg = cm_average(band);
    const auto width = band_width(band);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(std::fabs(avg.values[i] - beta_mixture_cdf(spec, grid[i])) <= width[i] / 2 + band.lp_tol);
    }
  }
}

TEST_CASE("method outputs use the frozen sampling grids", "[transforms]") {
  const auto m = uniform_moments(8);
  CHECK(bm_approx(m).samples.grid == uniform_grid(9));
  CHECK(fl_approx(m).samples.grid == uniform_grid(8));
  CHECK(fc_approx(m).samples.grid == uniform_grid(8));
  CHECK(fj_approx(m).samples.grid == uniform_grid(8));
  CHECK(me_approx(m).samples.grid == uniform_grid(8));
  CHECK(cm_approx(m).samples.grid == uniform_grid(8));
  CHECK(gp_approx(uniform_imag).samples.grid == uniform_grid(150));
}

// ---------------------------------------------------------------- digits and cache

TEST_CASE("required digits examples", "[transforms]") {
  CHECK(required_digits(MatrixKind::BM, 100) == 58);
  CHECK(required_digits(MatrixKind::FL, 50) == 55);
  CHECK(required_moment_digits(DecayClass::Power, 2.0, 1.0, 1.0, 99) == 14);
  CHECK(required_moment_digits(DecayClass::Exponential, 1.0, 1.0, 1.0, 40) == 30);
  CHECK_THROWS_AS(required_digits(MatrixKind::BM, 0), DomainError);
}

TEST_CASE("matrix cache files round-trip", "[transforms]") {
  const auto dir = std::filesystem::temp_directory_path() / "hmt_matrix_cache_test";
  std::filesystem::remove_all(dir);
  {
    MatrixCache cache(dir);
    const auto fl = cache.get(MatrixKind::FL, 5);
    const auto fc = cache.get(MatrixKind::FC, 4);
    const auto path = dir / MatrixCache::file_name(MatrixKind::FL, 5, 0);
    REQUIRE(std::filesystem::exists(path));
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "HMT-MATRIX v1 method=fl n=5 digits=0");
    int lines = 0;
    for (std::string line; std::getline(in, line);) ++lines;
    CHECK(lines == 36);
    CHECK(std::filesystem::exists(dir / MatrixCache::file_name(MatrixKind::FC, 4, working_digits())));

    MatrixCache reread(dir);
    CHECK(reread.get(MatrixKind::FL, 5)->exact == fl->exact);
    const auto fc2 = reread.get(MatrixKind::FC, 4);
    for (std::size_t i = 0; i < fc->values.size(); ++i) CHECK(fc2->values[i] == fc->values[i]);
    CHECK(read_matrix_file(path).exact == fl_matrix_exact(5));
  }
  std::filesystem::remove_all(dir);
}

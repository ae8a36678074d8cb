#include <catch2/catch_amalgamated.hpp>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "hmt/generators/beta_mixture.hpp"
#include "hmt/generators/canonical.hpp"
#include "hmt/generators/characteristic.hpp"
#include "hmt/generators/decay.hpp"
#include "hmt/io.hpp"
#include "hmt/moment_core.hpp"

using namespace hmt;
using Catch::Approx;

TEST_CASE("generate_canonical with stubbed canonical moments", "[generators]") {
  const auto half = moments_from_canonical<Rational>(2, [](int, int) { return 0.5; });
  CHECK(half.values() == std::vector<Rational>{1, Rational(1, 2), Rational(3, 8)});
  const double p[] = {0.5, 1.0 / 3.0, 0.5};
  ScopedDigits guard(40);
  const auto uni = moments_from_canonical<XReal>(3, [&](int k, int) { return p[k - 1]; });
  for (int k = 0; k <= 3; ++k) CHECK(std::fabs(uni[k].to_double() - 1.0 / (k + 1)) < 1e-15);
  Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    CHECK(hankel_report(generate_canonical(10, rng)).classification == Validity::Interior);
  }
}

TEST_CASE("beta_sampler moments", "[generators]") {
  Rng rng(1);
  constexpr int kDraws = 100000;
  double sum = 0.0;
  for (int i = 0; i < kDraws; ++i) sum += beta_sampler(2.0, 2.0, rng);
  CHECK(std::fabs(sum / kDraws - 0.5) <= 0.01);
  double s1 = 0.0;
  double s2 = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    const double x = beta_sampler(1.0, 1.0, rng);
    s1 += x;
    s2 += x * x;
  }
  const double mean = s1 / kDraws;
  CHECK(std::fabs(s2 / kDraws - mean * mean - 1.0 / 12.0) <= 0.005);
  for (int i = 0; i < 10000; ++i) {
    const double x = beta_sampler(5.0, 5.0, rng);
    CHECK((x > 0.0 && x < 1.0));
  }
  // small shapes exercise the boosted gamma path
  double small = 0.0;
  for (int i = 0; i < kDraws; ++i) small += beta_sampler(0.3, 0.6, rng);
  CHECK(std::fabs(small / kDraws - 1.0 / 3.0) <= 0.01);
}

TEST_CASE("Rng streams are reproducible and distinct", "[generators]") {
  Rng a(42, 3);
  Rng b(42, 3);
  Rng c(42, 4);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    CHECK(x == b.next());
    differs = differs || x != c.next();
  }
  CHECK(differs);
  Rng d(7);
  for (int i = 0; i < 10000; ++i) {
    const long v = d.uniform_int(1, 10);
    CHECK((v >= 1 && v <= 10));
  }
}

TEST_CASE("cm_moment examples", "[generators]") {
  DecaySpec power{DecayClass::Power, 1.0, {{1.0, 1.0, 1.0, 1.0}}};
  for (int n = 0; n <= 10; ++n) CHECK(cm_moment(power, double(n)) == Approx(1.0 / (n + 1)).epsilon(1e-14));
  DecaySpec expo{DecayClass::Exponential, std::log(2.0), {{std::log(2.0), 1.0, 1.0, 1.0}}};
  for (int n = 0; n <= 10; ++n) CHECK(cm_moment(expo, double(n)) == Approx(std::ldexp(1.0, -n)).epsilon(1e-14));
  Rng rng(3);
  for (auto cls : kAllDecayClasses) {
    const auto spec = random_decay_spec(cls, rng);
    CHECK(cm_moment(spec, 0.0) == Approx(1.0).epsilon(1e-13));
    CHECK(std::abs(cm_moment(spec, std::complex<double>(0.0, 0.0)) - 1.0) < 1e-13);
  }
}

TEST_CASE("random_decay_spec contracts", "[generators]") {
  Rng rng(17);
  for (int i = 0; i < 10000; ++i) {
    const auto spec = random_decay_spec(DecayClass::Power, rng);
    CHECK((spec.s > 0.0 && spec.s < 10.0));
    double total = 0.0;
    for (const auto& k : spec.components) total += k.c;
    CHECK(std::fabs(total - 1.0) <= 1e-12);
    CHECK((spec.components.size() >= 1 && spec.components.size() <= 10));
  }
  for (int i = 0; i < 10000; ++i) {
    const auto spec = random_decay_spec(DecayClass::Exponential, rng);
    for (std::size_t k = 1; k < spec.components.size(); ++k) CHECK(spec.components[k].s >= spec.s);
    CHECK_NOTHROW(spec.validate());
  }
  Rng r1(123);
  Rng r2(123);
  const auto s1 = spec_to_json(random_decay_spec(DecayClass::SoftPower, r1)).dump();
  const auto s2 = spec_to_json(random_decay_spec(DecayClass::SoftPower, r2)).dump();
  CHECK(s1 == s2);
}

TEST_CASE("c.m. moments are completely monotone and consistent", "[generators]") {
  Rng rng(31);
  ScopedDigits guard(64);
  for (auto cls : kAllDecayClasses) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto spec = random_decay_spec(cls, rng);
      const auto m = cm_moments(spec, 20);
      CHECK(m[0] == XReal(1));
      for (int j = 0; j <= 5; ++j) {
        for (int k = 0; k <= 15; ++k) {
          XReal diff(0);  // (-1)^j Delta^j m_k
          for (int i = 0; i <= j; ++i) {
            const XReal term = XReal(binomial_exact(j, i)) * m[k + i];
            diff = i % 2 == 0 ? diff + term : diff - term;
          }
          CHECK(diff.to_double() >= -1e-12);
        }
      }
      for (int n = 1; n <= 20; ++n) {
        const auto z = cm_moment(spec, std::complex<double>(n, 0.0));
        CHECK(std::fabs(z.real() - m[n].to_double()) <= 1e-12);
        CHECK(std::fabs(z.imag()) <= 1e-12);
        const auto zx = cm_moment(spec, ComplexX(XReal(n)));
        CHECK(std::fabs(zx.re.to_double() - m[n].to_double()) <= 1e-12);
      }
    }
  }
}

TEST_CASE("beta mixture moments and cdf", "[generators]") {
  const BetaMixtureSpec uniform{{1.0}, {1.0}, {1.0}};
  CHECK(beta_mixture_moment<double>(uniform, 5) == Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(beta_mixture_moment<double>(uniform, 0) == 1.0);
  CHECK(beta_mixture_cdf(uniform, 0.3) == Approx(0.3).epsilon(1e-14));
  CHECK(beta_mixture_cdf(BetaMixtureSpec{{2.0}, {2.0}, {1.0}}, 0.5) == Approx(0.5).epsilon(1e-14));
  for (auto [a, b] : {std::pair{0.5, 2.7}, std::pair{3.0, 1.0}}) {
    const BetaMixtureSpec spec{{a}, {b}, {1.0}};
    for (int n = 0; n <= 30; ++n) {
      const double product = beta_mixture_moment<double>(spec, n);
      const auto gamma_ratio = beta_mixture_moment(spec, std::complex<double>(n, 0.0));
      CHECK(std::fabs(gamma_ratio.real() - product) <= 1e-12);
      CHECK(std::fabs(gamma_ratio.imag()) <= 1e-12);
    }
  }
  Rng rng(4);
  boost::math::quadrature::tanh_sinh<double> integrator;
  for (int trial = 0; trial < 20; ++trial) {
    const auto spec = random_beta_mixture(rng);
    CHECK_NOTHROW(spec.validate());
    CHECK(beta_mixture_cdf(spec, 1.0) == 1.0);
    for (double s : {0.1, 1.0, 10.0, 100.0, 1000.0}) {
      CHECK(std::abs(beta_mixture_moment(spec, std::complex<double>(0.0, s))) <= 1.0 + 1e-12);
    }
    // m_1 equals the integral of 1 - F
    const double m1 = beta_mixture_moment<double>(spec, 1);
    const double tail = integrator.integrate([&](double x) { return 1.0 - beta_mixture_cdf(spec, x); }, 0.0, 1.0);
    CHECK(tail == Approx(m1).epsilon(1e-8));
  }
}

TEST_CASE("char_from_integer_moments", "[generators]") {
  ScopedDigits guard(40);
  std::vector<XReal> uni;
  for (int k = 0; k <= 20; ++k) uni.push_back(XReal(1) / XReal(k + 1));
  const auto phi = char_from_integer_moments(MomentSequence(uni), 1.0);
  CHECK(std::fabs(phi.re.to_double() - std::sin(1.0)) <= 1e-10);
  CHECK(std::fabs(phi.im.to_double() - (1.0 - std::cos(1.0))) <= 1e-10);

  const auto at0 = char_from_integer_moments(MomentSequence(uni), 0.0);
  CHECK(at0.re == XReal(1));
  CHECK(at0.im.is_zero());

  std::vector<XReal> point;
  for (int k = 0; k <= 10; ++k) point.push_back(pow(XReal(2), static_cast<long>(-k)));
  const auto e = char_from_integer_moments(MomentSequence(point), 2.0);
  CHECK(std::abs(e.to_complex() - std::exp(std::complex<double>(0.0, 1.0))) <= std::sqrt(2.0 / (10 * M_PI)));
  CHECK(char_truncation_sufficient(10, 2.0));

  ScopedDigits narrow(20);
  std::vector<XReal> short_m;
  for (int k = 0; k <= 5; ++k) short_m.push_back(XReal(1) / XReal(k + 1));
  CHECK_THROWS_AS(char_from_integer_moments(MomentSequence(short_m), 50.0), PrecisionInsufficient);
}

TEST_CASE("generators never leave the moment space", "[generators]") {
  Rng rng(2024);
  ScopedDigits guard(120);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 2 + trial % 19;
    const auto canon = generate_canonical(n, rng);
    CHECK(canon[0] == XReal(1));
    CHECK(hankel_report(canon).classification == Validity::Interior);
    const auto beta = beta_mixture_moments(random_beta_mixture(rng), n);
    CHECK(beta[0] == XReal(1));
    CHECK(hankel_report(beta).classification == Validity::Interior);
  }
  for (auto cls : kAllDecayClasses) {
    for (int trial = 0; trial < 500 / 6 + 1; ++trial) {
      const int n = 2 + trial % 19;
      const auto m = cm_moments(random_decay_spec(cls, rng), n);
      CHECK(m[0] == XReal(1));
      const auto v = hankel_report(m).classification;
      if (cls == DecayClass::Exponential) {
        CHECK(v != Validity::Invalid);
      } else {
        CHECK(v == Validity::Interior);
      }
    }
  }
}

TEST_CASE("generator specs round-trip through JSON", "[generators]") {
  Rng rng(10);
  const GeneratorSpec specs[] = {CanonicalSpec{8, {"1", "1/2"}}, random_decay_spec(DecayClass::Intermediate, rng),
                                 random_beta_mixture(rng)};
  for (const auto& s : specs) {
    const json j = spec_to_json(s);
    CHECK(spec_to_json(spec_from_json(json::parse(j.dump()))) == j);
  }
  CHECK_THROWS_AS(spec_from_json(json::parse(R"({"type":"nope"})")), SchemaMismatch);
  CHECK_THROWS_AS(spec_from_json(json::parse(R"({"type":"beta_mixture","a":[1],"b":[1],"c":[0.5]})")), WeightSumError);
}

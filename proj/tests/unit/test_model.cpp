#include <doctest.h>

#include <cmath>

#include "cqed/model.hpp"
#include "cqed/rng.hpp"

using namespace cqed;
using doctest::Approx;

// Reference values below were evaluated independently (CODATA k_B and u,
// 132.905451961 u for Cs, 85.4678 u for natural Rb) outside this code base.

TEST_CASE("preset set1 derived quantities") {
  const auto p = *preset("set1");
  const auto d = derive(p);
  CHECK(d.two_c / p.n_eff_bar == Approx(4.558848920863309).epsilon(1e-12));
  CHECK(d.antibunch_scale == Approx(1.2060446880590767).epsilon(1e-12));
  CHECK(d.decay_time * 1e9 == Approx(93.56551622098492).epsilon(1e-12));
  CHECK(d.v_oven == Approx(274.5025111915593).epsilon(1e-9));
  CHECK(d.v_beam == Approx(323.39065220675724).epsilon(1e-9));
  CHECK(weak_field_bound(p) == Approx(0.011516064890796615).epsilon(1e-12));
  CHECK(d.rate_R == Approx(251645365.7123039).epsilon(1e-9));
  CHECK(d.overdamped == false);
}

TEST_CASE("preset set2 derived quantities") {
  const auto p = *preset("set2");
  const auto d = derive(p);
  CHECK(2.0 * d.c1 == Approx(5.612727272727272).epsilon(1e-12));
  CHECK(d.antibunch_scale == Approx(4.052510666229077).epsilon(1e-12));
  CHECK(d.decay_time * 1e9 == Approx(29.09197881312349).epsilon(1e-12));
  CHECK(d.v_oven == Approx(326.37742751112336).epsilon(1e-9));
  CHECK(d.v_beam == Approx(384.50434821243016).epsilon(1e-9));
  CHECK(weak_field_bound(p) == Approx(0.00474539632702898).epsilon(1e-12));
  CHECK(d.rate_R == Approx(502533619.8892327).epsilon(1e-9));
}

TEST_CASE("published table values") {
  const auto d1 = derive(*preset("set1"));
  const auto d2 = derive(*preset("set2"));
  CHECK(d1.v_oven == Approx(274.5).epsilon(0.005));
  CHECK(d1.v_beam == Approx(323.4).epsilon(0.005));
  CHECK(d2.v_oven == Approx(326.4).epsilon(0.005));
  CHECK(d2.v_beam == Approx(384.5).epsilon(0.005));
  CHECK(2.0 * d1.c1 == Approx(4.6).epsilon(0.02));
  CHECK(2.0 * d2.c1 == Approx(5.6).epsilon(0.02));
  CHECK(d1.antibunch_scale == Approx(1.2).epsilon(0.02));
  CHECK(d2.antibunch_scale == Approx(4.0).epsilon(0.02));
  CHECK(d1.decay_time * 1e9 == Approx(94).epsilon(0.02));
  CHECK(d2.decay_time * 1e9 == Approx(29).epsilon(0.02));
  CHECK(weak_field_bound(*preset("set2")) == Approx(4.7e-3).epsilon(0.02));
}

TEST_CASE("mean speed ratio is fixed") {
  for (double t : {300.0, 473.0, 900.0}) {
    const auto [vo, vb] = mean_speeds(t, constants::mass_cs133);
    CHECK(vb / vo == Approx(3.0 * constants::pi / 8.0).epsilon(1e-15));
  }
  CHECK_THROWS_AS(mean_speeds(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("coupling geometry") {
  auto p = *preset("set1");
  auto geom = mode_geometry(p);
  CHECK(coupling({0, 0, 0}, geom, p.g_max).real() == Approx(p.g_max));
  CHECK(std::abs(coupling({0, 0, p.lambda / 4}, geom, p.g_max)) < 1e-9 * p.g_max);
  CHECK(coupling({p.w0, 0, 0}, geom, p.g_max).real() == Approx(p.g_max / std::exp(1.0)));
  geom.kind = CavityKind::ring;
  for (double z : {0.0, 1e-7, 3.3e-7})
    CHECK(std::abs(coupling({0, 0, z}, geom, p.g_max)) == Approx(p.g_max / std::sqrt(2.0)));

  Rng rng(3);
  for (int i = 0; i < 100000; ++i) {
    const Vec3 r{(uniform01(rng) - 0.5) * 4 * p.w0, (uniform01(rng) - 0.5) * 4 * p.w0, uniform01(rng) * p.lambda};
    geom.kind = CavityKind::standing_wave;
    REQUIRE(std::abs(coupling(r, geom, p.g_max)) <= p.g_max);
    geom.kind = CavityKind::ring;
    REQUIRE(std::abs(coupling(r, geom, p.g_max)) <= p.g_max / std::sqrt(2.0) * (1 + 1e-15));
  }
}

TEST_CASE("effective fraction") {
  CHECK(effective_fraction(0.1) == Approx(0.98).epsilon(0.005));
  CHECK(effective_fraction(0.01) == Approx(0.9998).epsilon(5e-5));
  CHECK(effective_fraction(0.0) == Approx(1.0).epsilon(1e-15));
  CHECK(effective_fraction(1.0) == Approx(0.0));
  double prev = 1.0 + 1e-12;
  for (int i = 0; i <= 100; ++i) {
    const double f = effective_fraction(i / 100.0);
    CHECK(f < prev);
    prev = f;
  }
  // Midpoint rule over the axial phase; the radial integral of
  // exp(-2 r^2 / w0^2) out to g = F g_max is done in closed form.
  for (double F : {0.01, 0.1, 0.3, 0.7}) {
    const int n = 200000;
    double inside = 0.0;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      const double c = std::cos((i + 0.5) * (constants::pi / 2) / n);
      total += c * c;
      if (c >= F) inside += c * c * (1.0 - F * F / (c * c));
    }
    CHECK(effective_fraction(F) == Approx(inside / total).epsilon(1e-6));
  }
}

TEST_CASE("source rate is linear in N") {
  CHECK(source_rate(36.0, 323.4, 50e-6) == Approx(2.0 * source_rate(18.0, 323.4, 50e-6)));
  CHECK(source_rate(18.0, 323.4, 50e-6) == Approx(2.52e8).epsilon(0.005));
}

TEST_CASE("validation and parsing") {
  auto p = *preset("set2");
  CHECK_NOTHROW(validate(p));
  p.F = 1.0;
  CHECK_THROWS_AS(validate(p), std::invalid_argument);
  CHECK(!preset("set3"));
  CHECK(parse_cavity_kind("ring") == CavityKind::ring);
  CHECK(parse_truncation("three-quanta") == Truncation::three_quanta);
  CHECK(!parse_truncation("four"));
  CHECK(derive(*preset("set1")) == derive(*preset("set1")));
}

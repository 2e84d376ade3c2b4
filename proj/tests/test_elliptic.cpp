#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hillfila/elliptic.hpp"
#include "oracles.hpp"

using namespace hillfila;

TEST_CASE("elliptic_KE special value at m = 0") {
  const auto ke = elliptic_KE(0.0);
  CHECK(ke.K == Catch::Approx(pi / 2.0).epsilon(1e-15));
  CHECK(ke.E == Catch::Approx(pi / 2.0).epsilon(1e-15));
}

TEST_CASE("elliptic_KE at m = 0.5 against the quadrature oracle") {
  // frozen from 64-point Gauss-Legendre of the defining integrals
  const double K_ref = 1.8540746773013719;
  const double E_ref = 1.3506438810476755;
  const auto q = oracles::elliptic_by_quadrature(0.5);
  REQUIRE(q.K == Catch::Approx(K_ref).epsilon(1e-14));
  REQUIRE(q.E == Catch::Approx(E_ref).epsilon(1e-14));
  const auto ke = elliptic_KE(0.5);
  CHECK(ke.K == Catch::Approx(K_ref).epsilon(1e-12));
  CHECK(ke.E == Catch::Approx(E_ref).epsilon(1e-12));
}

TEST_CASE("elliptic_KE across the range against quadrature") {
  for (double m : {1e-6, 1e-3, 0.1, 0.3, 0.7, 0.9, 0.99}) {
    const auto q = oracles::elliptic_by_quadrature(m);
    const auto ke = elliptic_KE(m);
    CHECK(ke.K == Catch::Approx(q.K).epsilon(1e-12));
    CHECK(ke.E == Catch::Approx(q.E).epsilon(1e-12));
  }
}

TEST_CASE("K diverges logarithmically as m -> 1") {
  const double m = 1.0 - 1e-8;
  const double K = elliptic_KE(m).K;
  const double asym = std::log(4.0 / std::sqrt(1e-8));
  CHECK(K / asym == Catch::Approx(1.0).epsilon(0.01));
}

TEST_CASE("elliptic_KE rejects out-of-domain parameters") {
  CHECK_THROWS(elliptic_KE(1.0));
  CHECK_THROWS(elliptic_KE(1.5));
  CHECK_THROWS(elliptic_KE(-0.1));
}

TEST_CASE("elliptic suite derivative combinations") {
  // dK/dm and dE/dm against central differences of the AGM values,
  // including the series branch at small m
  for (double m : {1e-5, 5e-4, 0.01, 0.25, 0.8}) {
    const auto s = detail::elliptic_suite(m);
    const double h = std::max(1e-7 * m, 1e-11);
    const auto kp = elliptic_KE(m + h);
    const auto km = elliptic_KE(m - h);
    CHECK(s.dK == Catch::Approx((kp.K - km.K) / (2.0 * h)).epsilon(1e-4));
    CHECK(s.dE == Catch::Approx((kp.E - km.E) / (2.0 * h)).epsilon(1e-4));
    CHECK(s.KmE == Catch::Approx(s.K - s.E).margin(1e-14));
  }
}

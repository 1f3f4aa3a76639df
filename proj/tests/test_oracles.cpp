#include <doctest.h>

#include "oracles.hpp"

TEST_SUITE("oracles") {

TEST_CASE("sturm bisection recovers a hand-made spectrum") {
  // Q diag(-2, 0.5, 0.5, 3) Q^* for an explicit complex rotation Q.
  oracle::Mat q = oracle::Mat::Identity(4, 4);
  const double c = std::cos(0.7);
  const double s = std::sin(0.7);
  q(0, 0) = c;
  q(0, 2) = oracle::cd(0.0, s);
  q(2, 0) = oracle::cd(0.0, s);
  q(2, 2) = c;
  oracle::Mat d = oracle::Mat::Zero(4, 4);
  d.diagonal() << -2.0, 0.5, 0.5, 3.0;
  const oracle::Mat a = q * d * q.adjoint();
  const auto ev = oracle::eigenvalues(a);
  REQUIRE(ev.size() == 4);
  CHECK(ev[0] == doctest::Approx(-2.0).epsilon(1e-13));
  CHECK(ev[1] == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(ev[2] == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(ev[3] == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(oracle::half_diameter(a) == doctest::Approx(2.5).epsilon(1e-13));
}

TEST_CASE("grid oracle centres a diagonal spectrum") {
  oracle::Mat a = oracle::Mat::Zero(2, 2);
  a(0, 0) = 1.0;
  a(1, 1) = 3.0;
  const auto r = oracle::factor_norm(a);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.lambda == doctest::Approx(-2.0).epsilon(1e-6));
}

}  // TEST_SUITE

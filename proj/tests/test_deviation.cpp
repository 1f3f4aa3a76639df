#include <doctest.h>

#include <cmath>

#include "obsdev/deviation.hpp"
#include "obsdev/random.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace obsdev;
using testutil::direct_variance;
using testutil::overlap_family;
using testutil::sigma_x;
using testutil::sigma_z;

TEST_SUITE("deviation") {

TEST_CASE("spectral route") {
  CHECK(max_deviation(HermitianMatrix::diagonal({0.0, 1.0})) == doctest::Approx(0.5));
  CHECK(max_deviation(HermitianMatrix::scalar(4, -3.0)) == 0.0);
  CHECK(max_deviation(HermitianMatrix::diagonal({1.0, 2.0, 5.0})) == doctest::Approx(2.0));
  CHECK(is_scalar(HermitianMatrix::scalar(3, 7.0)));
  CHECK_FALSE(is_scalar(sigma_z()));
}

TEST_CASE("factor route") {
  const FactorNorm d = factor_norm(HermitianMatrix::diagonal({1.0, 3.0}));
  CHECK(d.value == doctest::Approx(1.0));
  CHECK(d.lambda_star == doctest::Approx(-2.0));
  const FactorNorm s = factor_norm(HermitianMatrix::scalar(3, 1.75));
  CHECK(std::abs(s.value) <= 1e-14);
  CHECK(s.lambda_star == doctest::Approx(-1.75));

  const HermitianMatrix a = gen_hermitian(6, 606u);
  const FactorNorm f = factor_norm(a);
  const oracle::FactorMin ref = oracle::factor_norm(a.matrix());
  CHECK(std::abs(f.value - ref.value) <= 1e-6);
  CHECK(std::abs(f.lambda_star - ref.lambda) <= 1e-4);
}

TEST_CASE("variational route") {
  const DeviationReport r = max_deviation_variational(HermitianMatrix::diagonal({0.0, 1.0}), 8, 1u);
  CHECK(std::abs(r.value - 0.5) <= 1e-8);
  REQUIRE(r.witness);
  CHECK(std::abs(std::abs((*r.witness)[0]) - 1.0 / std::sqrt(2.0)) <= 1e-6);
  CHECK(std::abs(std::abs((*r.witness)[1]) - 1.0 / std::sqrt(2.0)) <= 1e-6);

  const DeviationReport s = max_deviation_variational(HermitianMatrix::scalar(3, 2.0), 4, 2u);
  CHECK(std::abs(s.value) <= 1e-12);

  const HermitianMatrix g = gen_hermitian(8, 808u);
  const DeviationReport v = max_deviation_variational(g, 16, 3u);
  CHECK(std::abs(v.value - oracle::half_diameter(g.matrix())) <= 1e-6);
  REQUIRE(v.gap_to_spectral);
  CHECK(*v.gap_to_spectral >= -1e-12);
}

TEST_CASE("deviation reports per route") {
  const HermitianMatrix a = gen_hermitian(5, 55u);
  const DeviationReport spectral = deviation_report(a, DeviationRoute::Spectral);
  const DeviationReport factor = deviation_report(a, DeviationRoute::Factor);
  CHECK(spectral.witness.has_value());
  CHECK(factor.minimizer_lambda.has_value());
  CHECK(std::abs(spectral.value - factor.value) <= 1e-12);
  CHECK(parse_route("variational") == DeviationRoute::Variational);
  CHECK_FALSE(parse_route("bogus").has_value());
}

TEST_CASE("witness state") {
  const StateVector w = witness_state(HermitianMatrix::diagonal({0.0, 1.0}));
  CHECK(std::abs(w[0]) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(std::abs(w[1]) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(variance(HermitianMatrix::diagonal({0.0, 1.0}), w) == doctest::Approx(0.25));

  CHECK(variance(sigma_x(), witness_state(sigma_x())) == doctest::Approx(1.0).epsilon(1e-14));

  const HermitianMatrix a = gen_hermitian(10, 1010u);
  const StateVector ws = witness_state(a);
  const double half = oracle::half_diameter(a.matrix());
  CHECK(std::abs(direct_variance(a.matrix(), ws.amplitudes()) - half * half) <= 1e-9);

  CHECK_THROWS_AS(witness_state(HermitianMatrix::scalar(3, 1.0)), Error);
}

TEST_CASE("delta lower bound") {
  const double expected = std::sqrt(0.9604 / 2.0 - 1.0404 / 4.0);
  CHECK(delta_lower_bound(0.01) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(delta_lower_bound(1e-12) == doctest::Approx(0.5).epsilon(1e-9));

  const DeltaBoundResult two = deviation_lower_bound_delta(HermitianMatrix::diagonal({0.0, 1.0}), 0.01);
  CHECK(two.value == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(two.value >= two.bound);

  const HermitianMatrix four = HermitianMatrix::diagonal({0.0, 0.005, 0.997, 1.0});
  const DeltaBoundResult r = deviation_lower_bound_delta(four, 0.01);
  CHECK(r.value >= 0.4692);
  CHECK(r.value >= r.bound);
  CHECK(std::abs(r.value - std::sqrt(direct_variance(four.matrix(), r.state.amplitudes()))) <= 1e-12);

  CHECK_THROWS_AS(deviation_lower_bound_delta(HermitianMatrix::diagonal({0.2, 1.0}), 0.01), Error);
}

TEST_CASE("stochastic distances") {
  const HermitianMatrix a = gen_hermitian(4, 4u);
  CHECK(d_m(a, a) == 0.0);
  CHECK(d_m(sigma_z(), -sigma_z()) == doctest::Approx(2.0));
  CHECK(std::abs(d_v(a, a.shifted(3.5))) <= 1e-12);

  Rng rng(2024);
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const int n = rng.uniform_int(1, 8);
    const HermitianMatrix x = gen_hermitian(n, rng);
    const HermitianMatrix y = gen_hermitian(n, rng);
    const HermitianMatrix z = gen_hermitian(n, rng);
    worst = std::max(worst, d_m(x, z) - d_m(x, y) - d_m(y, z));
    worst = std::max(worst, d_v(x, z) - d_v(x, y) - d_v(y, z));
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("rank-one overlap law") {
  Rng rng(33);
  for (int i = 0; i < 50; ++i) {
    const int n = rng.uniform_int(2, 9);
    const HermitianMatrix p = gen_projection(n, 1, rng);
    const HermitianMatrix q = gen_projection(n, 1, rng);
    const double overlap = (p.matrix() * q.matrix()).trace().real();
    CHECK(std::abs(d_v(p, q) - std::sqrt(std::max(0.0, 1.0 - overlap))) <= 1e-9);
  }
  const HermitianMatrix p = HermitianMatrix::diagonal({1.0, 0.0});
  for (double a : {0.0, 0.25, 0.5, 0.9, 1.0}) {
    for (double theta : {0.0, 1.1, -2.5}) {
      CHECK(std::abs(d_v(p, overlap_family(a, theta)) - std::sqrt(1.0 - a)) <= 1e-9);
    }
  }
}

}  // TEST_SUITE

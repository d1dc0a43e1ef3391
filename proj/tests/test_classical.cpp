#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "photonstat/classical.hpp"
#include "photonstat/errors.hpp"
#include "photonstat/gmt.hpp"

using namespace photonstat;

namespace {

double closed_classical_g2(double N, double R) {
  return (N * (2 * N - 1) + 4 * N * N * N * R + N * N * N * N * R * R) / (N * N * (1 + N * R) * (1 + N * R));
}

double closed_classical_g21_abs(double N, double R) {
  return (2 * N * N + N * N * N * R) * std::sqrt(R) / std::pow(N * (1 + N * R), 1.5);
}

Vec3 random_k(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return {u(rng), u(rng), u(rng)};
}

}  // namespace

TEST_CASE("classical moment table") {
  const ClassicalEmitterModel m({0.3, -0.4}, 0.8);
  const ClassicalMoments w(m, 3, 3);
  CHECK(w(0, 0) == std::complex<double>(1.0));
  CHECK(std::abs(w(1, 0) - std::conj(m.e_coh)) < 1e-15);
  CHECK(w(1, 1).real() == doctest::Approx(0.25 + 0.64));
  // <|E_c + E_i e^{i phi}|^4> = |E_c|^4 + 4 |E_c|^2 |E_i|^2 + |E_i|^4
  CHECK(w(2, 2).real() == doctest::Approx(0.0625 + 4 * 0.25 * 0.64 + 0.64 * 0.64));
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; b <= 3; ++b) CHECK(std::abs(w(a, b) - std::conj(w(b, a))) < 1e-14);
}

TEST_CASE("classical forward correlator") {
  const auto incoherent = ClassicalEmitterModel::from_ratio(0.0);
  for (long long N : {1, 2, 7, 30, 1000}) {
    CHECK(static_cast<double>(classical_forward_g(incoherent, N, 2)) == doctest::Approx(2.0 - 1.0 / N));
    CHECK(static_cast<double>(classical_forward_g(incoherent, N, 1)) == doctest::Approx(1.0));
  }
  for (double N : {1.0, 3.0, 20.0, 50.0})
    for (double R : {0.0, 1e-5, 0.01, 1.0, 3.0}) {
      const auto m = ClassicalEmitterModel::from_ratio(R, 0.7);
      const long long n = static_cast<long long>(N);
      CHECK(static_cast<double>(classical_forward_g(m, n, 2)) ==
            doctest::Approx(closed_classical_g2(N, R)).epsilon(1e-12));
      CHECK(static_cast<double>(std::abs(classical_forward_g_unequal(m, n, 2, 1))) ==
            doctest::Approx(closed_classical_g21_abs(N, R)).epsilon(1e-12));
    }
  // Purely coherent fields are fully coherent at every order.
  const ClassicalEmitterModel coherent({0.5, 0.2}, 0.0);
  CHECK(static_cast<double>(classical_forward_g(coherent, 12, 3)) == doctest::Approx(1.0));
  CHECK(std::abs(classical_forward_g_unequal(ClassicalEmitterModel::from_ratio(0.0), 10, 2, 1)) == 0.0L);
  CHECK_THROWS_AS(classical_forward_g_unequal(coherent, 12, 2, 2), DomainError);
  CHECK_THROWS_AS(classical_forward_g(ClassicalEmitterModel(0.0, 0.0), 10, 2), ZeroIntensityError);
}

TEST_CASE("leading m != n classical magnitude") {
  const auto m = ClassicalEmitterModel::from_ratio(1e-6);
  const double g = static_cast<double>(std::abs(classical_forward_g_unequal(m, 100, 2, 1)));
  CHECK(g / (2 * std::sqrt(100 * 1e-6)) == doctest::Approx(1.0).epsilon(0.15));
}

TEST_CASE("classical exact product") {
  const ClassicalEmitterModel m({0.6, 0.1}, 1.3);
  Positions one(3, 1);
  one << 0.2, 0.4, -0.1;
  const Ensemble single(one);
  const Vec3 k(0.3, 0.0, 0.1);
  CHECK(classical_exact_G(m, single, {1, 1}, repeated_direction({1, 1}, k)).real() ==
        doctest::Approx(std::norm(m.e_coh) + 1.69));

  for (long long N : {1, 4, 13, 50})
    for (int order = 1; order <= 3; ++order)
      for (double R : {0.0, 0.02, 2.0}) {
        const auto model = ClassicalEmitterModel::from_ratio(R, 0.9);
        const auto e = random_cloud(N, N + order);
        const double exact = classical_exact_g(model, e, {order, order}, forward_directions({order, order})).real();
        CHECK(exact == doctest::Approx(static_cast<double>(classical_forward_g(model, N, order))).epsilon(1e-10));
      }

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const int N = 1 + trial % 4;
    const int mm = 1 + static_cast<int>(rng() % 3), nn = static_cast<int>(rng() % 3);
    const CorrelationOrder order(mm, nn);
    const auto e = random_cloud(N, rng(), UniformCube{2.0});
    const ClassicalEmitterModel model({0.5 * (rng() % 5) - 1.0, 0.3}, 0.2 + 0.1 * (rng() % 5));
    DirectionSet d;
    for (int i = 0; i < order.total(); ++i) d.push_back(i > 0 && rng() % 3 == 0 ? d[rng() % i] : random_k(rng));
    const auto a = classical_oracle_G(model, e, order, d);
    const auto b = classical_exact_G(model, e, order, d);
    CHECK(std::abs(a - b) <= 1e-11 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("classical |g| is invariant under a global coherent phase for m = n") {
  const auto e = random_cloud(8, 3, UniformCube{3.0});
  const DirectionSet d{{0.1, 0.2, 0.0}, {0.4, 0.0, 0.3}, {0.2, 0.2, 0.0}, {0.0, 0.1, 0.5}};
  const ClassicalEmitterModel a({0.5, 0.0}, 1.0), b(std::polar(0.5, 1.1), 1.0);
  CHECK(std::abs(classical_exact_g(a, e, {2, 2}, d)) ==
        doctest::Approx(std::abs(classical_exact_g(b, e, {2, 2}, d))).epsilon(1e-12));
}

TEST_CASE("classical Monte Carlo") {
  const auto e = random_cloud(10, 1, UniformCube{5.0});
  const Vec3 k(0.3, 0.1, 0.0);
  SUBCASE("coherent-only fields give the deterministic product") {
    const ClassicalEmitterModel m({0.4, 0.3}, 0.0);
    const auto dirs = repeated_direction({2, 1}, k);
    const auto est = classical_mc_G(m, e, {2, 1}, dirs, 50, 3);
    const auto s = structure_factor(e, k);
    const std::complex<double> expected = std::conj(m.e_coh) * s * std::conj(m.e_coh) * s * m.e_coh * std::conj(s);
    CHECK(std::abs(est.estimate - expected) < 1e-10 * std::abs(expected));
    CHECK(est.std_error < 1e-10 * std::abs(expected));
  }
  SUBCASE("one-photon moment") {
    const ClassicalEmitterModel m({0.5, 0.0}, 1.0);
    const auto est = classical_mc_G(m, e, {1, 1}, repeated_direction({1, 1}, k), 100000, 17);
    CHECK(std::abs(est.estimate.real() - classical_intensity(m, e, k)) < 3 * est.std_error);
    CHECK(est.batches == kDefaultBatches);
    CHECK(est.seed == 17);
  }
  SUBCASE("incoherent g2 at N = 30") {
    const auto m = ClassicalEmitterModel::from_ratio(0.0);
    const auto e30 = random_cloud(30, 2);
    const auto est = classical_mc_G(m, e30, {2, 2}, forward_directions({2, 2}), 1000000, 23, 100, 2);
    const double I = 30.0;
    CHECK(std::abs(est.estimate.real() / (I * I) - (2 - 1.0 / 30)) < 3 * est.std_error / (I * I));
  }
  SUBCASE("m != n forward agrees at N = 50") {
    const auto m = ClassicalEmitterModel::from_ratio(0.05);
    const auto e50 = random_cloud(50, 8);
    const auto est = classical_mc_G(m, e50, {2, 1}, forward_directions({2, 1}), 200000, 41, 100, 2);
    const auto G = std::complex<double>(classical_forward_G(m, 50, {2, 1}));
    CHECK(std::abs(est.estimate - G) < 3 * est.std_error);
  }
  SUBCASE("random directions at N = 20") {
    const ClassicalEmitterModel m({0.3, 0.2}, 0.8);
    const auto e20 = random_cloud(20, 6, UniformCube{4.0});
    const DirectionSet d{{0.2, 0.1, 0.0}, {0.0, 0.3, 0.1}, {0.1, 0.1, 0.1}};
    const auto est = classical_mc_G(m, e20, {1, 2}, d, 100000, 5, 100, 2);
    CHECK(std::abs(est.estimate - classical_exact_G(m, e20, {1, 2}, d)) < 3 * est.std_error);
  }
  SUBCASE("thread count does not change the estimate") {
    const ClassicalEmitterModel m({0.3, 0.2}, 0.8);
    const auto dirs = repeated_direction({2, 2}, k);
    const auto a = classical_mc_G(m, e, {2, 2}, dirs, 5000, 9, 50, 1);
    const auto b = classical_mc_G(m, e, {2, 2}, dirs, 5000, 9, 50, 4);
    CHECK(a.estimate == b.estimate);
    CHECK(a.std_error == b.std_error);
    CHECK_THROWS_AS(classical_mc_G(m, e, {2, 2}, dirs, 1, 9), DomainError);
  }
}

TEST_CASE("classical Taylor series") {
  CHECK(classical_taylor_forward(100, 3, 0.0).value == doctest::Approx(6.0));
  const long long N = 10000;
  const double R = 1e-6;
  const auto model = ClassicalEmitterModel::from_ratio(R);
  const auto series = classical_taylor_forward(N, 2, R);
  const double exact = static_cast<double>(classical_forward_g(model, N, 2));
  CHECK(std::abs(exact - series.value) <= 10 * series.remainder_budget());
  // quantum minus classical linear coefficient: -(3/2) m! m (m-1)
  for (int m = 2; m <= 4; ++m) {
    const double h = 1e-9;
    const double q = (taylor_forward_equal(N, m, h).value - taylor_forward_equal(N, m, 0).value) / h;
    const double c = (classical_taylor_forward(N, m, h).value - classical_taylor_forward(N, m, 0).value) / h;
    const double mf = std::tgamma(m + 1.0);
    CHECK(q - c == doctest::Approx(-1.5 * mf * m * (m - 1)).epsilon(1e-3));
  }
}

#include <doctest.h>

#include <cmath>
#include <random>

#include "hpstat/proximity.hpp"
#include "oracles.hpp"

using namespace hpstat;

TEST_CASE("euclidean distance examples") {
  Eigen::Vector3d zero = Eigen::Vector3d::Zero();
  CHECK(euclidean_distance(zero, zero) == 0.0);

  Eigen::Vector2d origin(0, 0), p(3, 4);
  CHECK(euclidean_distance(origin, p) == 5.0);

  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd x(10), y(10);
    for (int k = 0; k < 10; ++k) {
      x(k) = normal(rng);
      y(k) = normal(rng);
    }
    double ss = 0.0;
    for (int k = 0; k < 10; ++k) ss += (x(k) - y(k)) * (x(k) - y(k));
    const double expected = std::sqrt(ss);
    CHECK(std::abs(euclidean_distance(x, y) - expected) <= 1e-12 * expected);
  }
}

TEST_CASE("row and column vectors of float and double mix") {
  Eigen::RowVector2f x(0.f, 0.f);
  Eigen::Vector2d y(3, 4);
  CHECK(euclidean_distance(x, y) == 5.0);
}

TEST_CASE("cosine distance examples") {
  Eigen::Vector2d a(2, 1);
  CHECK(cosine_distance(a, a) == 0.0);
  CHECK(cosine_distance(Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cosine_distance(Eigen::Vector2d(1, 0), Eigen::Vector2d(-1, 0)) == 2.0);
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(euclidean_distance(Eigen::Vector2d(1, 2), Eigen::Vector3d(1, 2, 3)),
                  DimensionMismatch);
  CHECK_THROWS_AS(cosine_distance(Eigen::Vector2d(1, 2), Eigen::Vector3d(1, 2, 3)),
                  DimensionMismatch);
  CHECK_THROWS_AS(euclidean_distance(Eigen::VectorXd(0), Eigen::VectorXd(0)), DimensionMismatch);
  CHECK_THROWS_AS(cosine_distance(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0)), ZeroNormError);
  CHECK_THROWS_AS(parse_metric_kind("manhattan"), InvalidArgument);
}

TEST_CASE("zero-norm epsilon sends the zero vector to distance one") {
  const Eigen::Vector2d zero(0, 0), x(3, -1);
  CHECK(cosine_distance(zero, x, 1e-9) == 1.0);
  CHECK(distance(Metric::cosine(1e-9), zero, x) == 1.0);
  // Vectors with norm above the floor are unaffected.
  CHECK(cosine_distance(x, Eigen::Vector2d(1, 0), 1e-9) == cosine_distance(x, Eigen::Vector2d(1, 0)));
}

TEST_CASE("metric properties on random inputs") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto pts = oracle::gaussian_points(3, 7, rng);
    const auto x = pts.row(0), y = pts.row(1), z = pts.row(2);

    CHECK(euclidean_distance(x, y) == euclidean_distance(y, x));
    CHECK(euclidean_distance(x, z) <= euclidean_distance(x, y) + euclidean_distance(y, z));
    CHECK(euclidean_distance(x, x) == 0.0);

    const double c = cosine_distance(x, y);
    CHECK(c == cosine_distance(y, x));
    CHECK(c >= 0.0);
    CHECK(c <= 2.0);
    CHECK(cosine_distance(x, x) == doctest::Approx(0.0).epsilon(1e-15));
    const double a = scale(rng), b = scale(rng);
    CHECK(std::abs(cosine_distance((a * x).eval(), (b * y).eval()) - c) <= 1e-12);
  }
}

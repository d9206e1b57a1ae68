#include <doctest.h>

#include <random>

#include "hpstat/divergence.hpp"
#include "oracles.hpp"

using namespace hpstat;

TEST_CASE("expected runs") {
  CHECK(expected_runs(10, 10) == 11.0);
  CHECK(expected_runs(1, 1) == 2.0);
  CHECK(expected_runs(1000, 1000) == 1001.0);
  CHECK_THROWS_AS(expected_runs(0, 3), InvalidArgument);
}

TEST_CASE("univariate runs variance") {
  CHECK(runs_variance_univariate(2, 2) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(runs_variance_univariate(1, 1) == 0.0);
  CHECK(runs_variance_univariate(10, 10) == doctest::Approx(36000.0 / 7600.0).epsilon(1e-14));

  // Ordered data form a path; enumerate every arrangement of the labels on it.
  for (auto [n, m] : {std::pair{10, 10}, std::pair{3, 7}, std::pair{5, 2}}) {
    std::vector<Edge> path;
    for (Index k = 0; k + 1 < n + m; ++k) path.push_back({k, k + 1, 1.0});
    const auto [mean, variance] = oracle::exhaustive_runs_moments(path, n, m);
    CHECK(std::abs(mean - expected_runs(n, m)) <= 1e-12);
    CHECK(std::abs(variance - runs_variance_univariate(n, m)) <= 1e-12);
  }
}

TEST_CASE("conditional runs variance") {
  // Path of four vertices: C = 2, the topology term vanishes.
  CHECK(runs_variance_conditional(2, 2, 2) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK_THROWS_AS(runs_variance_conditional(1, 2, 1), DegenerateInput);

  // With C = N - 2 and 4mn = N(N-1) + 2 the bracket reduces to the leading term.
  for (Index n = 1; n < 40; ++n) {
    for (Index m = 1; m < 40; ++m) {
      const Index big_n = n + m;
      if (big_n < 4 || 4 * m * n != big_n * (big_n - 1) + 2) continue;
      const double expected = 2.0 * m * n / (big_n * (big_n - 1.0)) * (2.0 * m * n - big_n) / big_n;
      CHECK(runs_variance_conditional(n, m, big_n - 2) == doctest::Approx(expected).epsilon(1e-14));
    }
  }
}

TEST_CASE("conditional variance is the exact permutation variance on small trees") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const auto pts = oracle::gaussian_points(9, 3, rng);
    const auto edges = oracle::kruskal(pts, Metric::euclidean());
    std::vector<Index> degree(9, 0);
    for (const auto& e : edges) {
      ++degree[e.i];
      ++degree[e.j];
    }
    const Index c = shared_node_pair_count(degree);
    for (auto [n, m] : {std::pair{4, 5}, std::pair{2, 7}, std::pair{3, 6}}) {
      const auto [mean, variance] = oracle::exhaustive_runs_moments(edges, n, m);
      CHECK(std::abs(mean - expected_runs(n, m)) <= 1e-12);
      CHECK(std::abs(variance - runs_variance_conditional(n, m, c)) <= 1e-12);
    }
  }
}

TEST_CASE("Monte-Carlo runs variance on a fixed tree, n = m = 100") {
  std::mt19937_64 rng(8);
  const auto pts = oracle::gaussian_points(200, 5, rng);
  std::vector<Label> labels(100, 0);
  labels.resize(200, 1);
  const auto tree = build_mst(pts, std::span<const Label>(labels), Metric::euclidean());
  double sum = 0.0, sum_sq = 0.0;
  const int trials = 50000;
  for (int t = 0; t < trials; ++t) {
    std::shuffle(labels.begin(), labels.end(), rng);
    const double r = static_cast<double>(count_cross_edges(tree.edges, labels) + 1);
    sum += r;
    sum_sq += r * r;
  }
  const double mean = sum / trials;
  const double variance = (sum_sq - trials * mean * mean) / (trials - 1);
  CHECK(std::abs(mean / expected_runs(100, 100) - 1.0) < 0.01);
  CHECK(std::abs(variance / runs_variance_conditional(100, 100, tree.shared_node_pairs) - 1.0) < 0.05);
}

TEST_CASE("W score") {
  CHECK(w_score(11.0, 11.0, 3.0) == 0.0);
  CHECK_THROWS_AS(w_score(3.0, 2.0, 0.0), DegenerateInput);

  Eigen::VectorXd x(2), y(2);
  x << 1, 3;
  y << 2, 4;
  const auto r = two_sample_divergence(x, y, Metric::euclidean());
  CHECK(r.univariate);
  CHECK(r.runs == 4);
  CHECK(r.expected_runs == 3.0);
  REQUIRE(r.variance_runs);
  CHECK(*r.variance_runs == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  REQUIRE(r.w_score);
  CHECK(*r.w_score == doctest::Approx(1.0 / std::sqrt(2.0 / 3.0)).epsilon(1e-14));

  // Fully separated ordered samples: two runs, W strongly negative.
  Eigen::VectorXd low = Eigen::VectorXd::LinSpaced(200, 0.0, 1.0);
  Eigen::VectorXd high = Eigen::VectorXd::LinSpaced(200, 2.0, 3.0);
  const auto sep = two_sample_divergence(low, high, Metric::euclidean());
  CHECK(sep.runs == 2);
  REQUIRE(sep.w_score);
  CHECK(*sep.w_score < -10.0);
}

TEST_CASE("HP divergence and delta estimates") {
  CHECK(hp_divergence(1, 12, 12) == doctest::Approx(1.0 - 24.0 / 288.0).epsilon(1e-15));
  CHECK(std::round(hp_divergence(1, 12, 12) * 100.0) / 100.0 == doctest::Approx(0.92));
  CHECK(hp_divergence(11, 12, 12) == doctest::Approx(1.0 - 264.0 / 288.0).epsilon(1e-15));
  CHECK(std::round(hp_divergence(11, 12, 12) * 100.0) / 100.0 == doctest::Approx(0.08));
  // Null expectation of S gives 0.
  CHECK(hp_divergence(10, 10, 10) == 0.0);
  CHECK(hp_divergence(12, 8, 24) == 0.0);

  CHECK(delta_estimate(0, 5, 7) == 1.0);
  CHECK(delta_estimate(10, 10, 10) == 0.5);
  CHECK(delta_estimate(19, 10, 10) == doctest::Approx(1.0 / 20.0).epsilon(1e-15));

  for (Index n = 1; n < 30; ++n) {
    for (Index s = 1; s < 2 * n; ++s) {
      CHECK(hp_divergence(s, n, n) == doctest::Approx(2.0 * delta_estimate(s, n, n) - 1.0).epsilon(1e-14));
      CHECK(hp_divergence(s, n, n) <= hp_divergence(1, n, n));
    }
  }
}

TEST_CASE("two-sample divergence") {
  std::mt19937_64 rng(123);

  SUBCASE("duplicate point sets mix completely") {
    const auto x = oracle::gaussian_points(50, 4, rng);
    const auto r = two_sample_divergence(x, x, Metric::euclidean());
    CHECK(r.runs == r.cross_edges + 1);
    CHECK(r.hp == hp_divergence(r.cross_edges, 50, 50));
    CHECK(r.hp <= 0.1);
  }

  SUBCASE("same distribution stays near zero") {
    double total = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      const auto x = oracle::gaussian_points(500, 10, rng);
      const auto y = oracle::gaussian_points(500, 10, rng);
      const auto r = two_sample_divergence(x, y, Metric::euclidean());
      CHECK(std::abs(r.hp) <= 0.1);
      total += r.hp;
    }
    CHECK(std::abs(total / 50.0) <= 0.02);
  }

  SUBCASE("far clusters cross once") {
    const auto x = oracle::gaussian_points(500, 3, rng, 0.0, 1.0);
    const auto y = oracle::gaussian_points(500, 3, rng, 100.0, 1.0);
    const auto r = two_sample_divergence(x, y, Metric::euclidean());
    CHECK(r.cross_edges == 1);
    CHECK(r.hp == doctest::Approx(0.998).epsilon(1e-14));
    CHECK(r.p_hat == 0.5);
    CHECK_FALSE(r.univariate);
    REQUIRE(r.variance_runs);
    CHECK(*r.variance_runs == runs_variance_conditional(500, 500, r.shared_node_pairs));
  }

  SUBCASE("unequal sizes") {
    const auto x = oracle::gaussian_points(30, 3, rng);
    const auto y = oracle::gaussian_points(70, 3, rng);
    const auto r = two_sample_divergence(x, y, Metric::cosine());
    CHECK(r.n == 30);
    CHECK(r.m == 70);
    CHECK(r.p_hat == 0.7);
    CHECK(r.hp == 1.0 - r.cross_edges * 100.0 / (2.0 * 30 * 70));
    CHECK(r.delta_hat == 1.0 - r.cross_edges / 100.0);
  }

  SUBCASE("tiny multivariate samples leave the variance undefined") {
    Eigen::MatrixXd x(1, 2), y(2, 2);
    x << 0, 0;
    y << 1, 0, 0, 1;
    const auto r = two_sample_divergence(x, y, Metric::euclidean());
    CHECK_FALSE(r.variance_runs);
    CHECK_FALSE(r.w_score);
  }

  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(two_sample_divergence(Eigen::MatrixXd::Ones(3, 2), Eigen::MatrixXd::Ones(3, 4),
                                          Metric::euclidean()),
                    DimensionMismatch);
  }
}

TEST_CASE("H is invariant to rigid motion and uniform scaling") {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = oracle::gaussian_points(60, 5, rng);
    const auto y = oracle::gaussian_points(60, 5, rng, 0.3);
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(
                                  oracle::gaussian_points(5, 5, rng)).householderQ();
    const Eigen::RowVectorXd shift = oracle::gaussian_points(1, 5, rng, 0.0, 10.0);
    const double scale = 3.7;
    const Eigen::MatrixXd x2 = ((x * q).rowwise() + shift) * scale;
    const Eigen::MatrixXd y2 = ((y * q).rowwise() + shift) * scale;
    const auto a = two_sample_divergence(x, y, Metric::euclidean());
    const auto b = two_sample_divergence(x2, y2, Metric::euclidean());
    CHECK(a.cross_edges == b.cross_edges);
    CHECK(a.hp == b.hp);
  }
}

TEST_CASE("delta-hat averages one half under label permutation at p = 0.5") {
  std::mt19937_64 rng(77);
  const auto pts = oracle::gaussian_points(400, 6, rng);
  std::vector<Label> labels(200, 0);
  labels.resize(400, 1);
  const auto tree = build_mst(pts, std::span<const Label>(labels), Metric::euclidean());
  double total = 0.0;
  for (int t = 0; t < 2000; ++t) {
    std::shuffle(labels.begin(), labels.end(), rng);
    total += delta_estimate(count_cross_edges(tree.edges, labels), 200, 200);
  }
  CHECK(std::abs(total / 2000.0 - 0.5) <= 0.02);
}

TEST_CASE("summaries reject a tree without cross edges") {
  MstResult tree;
  tree.edges = {{0, 1, 1.0}};
  tree.degree = {1, 1};
  tree.cross_edges = 0;
  CHECK_THROWS_AS(summarize_divergence(tree, 1, 1, 2), ConsistencyError);
}

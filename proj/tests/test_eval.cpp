#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <vector>

#include "dnsnmf/clustering.hpp"
#include "dnsnmf/dense_matrix.hpp"
#include "dnsnmf/error.hpp"
#include "dnsnmf/rng.hpp"
#include "test_util.hpp"

using namespace dnsnmf;

namespace {

// Exhaustive best-permutation accuracy, tractable for small label counts.
double brute_force_accuracy(const LabelVector& pred, const LabelVector& truth) {
  int k = 0;
  for (int v : pred) k = std::max(k, v + 1);
  for (int v : truth) k = std::max(k, v + 1);
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  int best = 0;
  do {
    int hits = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
      if (perm[pred[i]] == truth[i]) ++hits;
    }
    best = std::max(best, hits);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / static_cast<double>(pred.size());
}

// Plug-in MI / max-entropy estimate straight from the contingency table.
double reference_nmi(const LabelVector& pred, const LabelVector& truth) {
  const double n = static_cast<double>(pred.size());
  std::map<int, double> pa, pb;
  std::map<std::pair<int, int>, double> pj;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    pa[pred[i]] += 1.0;
    pb[truth[i]] += 1.0;
    pj[{pred[i], truth[i]}] += 1.0;
  }
  double ha = 0.0, hb = 0.0, mi = 0.0;
  for (auto& [_, c] : pa) ha -= c / n * std::log(c / n);
  for (auto& [_, c] : pb) hb -= c / n * std::log(c / n);
  for (auto& [key, c] : pj) {
    mi += c / n * std::log((c / n) / (pa[key.first] / n * pb[key.second] / n));
  }
  if (ha == 0.0 && hb == 0.0) return 1.0;
  if (ha == 0.0 || hb == 0.0) return 0.0;
  return mi / std::max(ha, hb);
}

LabelVector random_labels(std::size_t n, int k, Rng& rng) {
  LabelVector v(n);
  for (auto& x : v) x = static_cast<int>(rng.uniform_int(k));
  return v;
}

double wcss_of(const DenseMatrix& features, const LabelVector& labels, index_t k) {
  const index_t d = features.rows(), n = features.cols();
  DenseMatrix centroids(d, k);
  std::vector<double> counts(k, 0.0);
  for (index_t s = 0; s < n; ++s) {
    counts[labels[s]] += 1.0;
    for (index_t i = 0; i < d; ++i) centroids(i, labels[s]) += features(i, s);
  }
  for (index_t c = 0; c < k; ++c) {
    if (counts[c] > 0) {
      for (index_t i = 0; i < d; ++i) centroids(i, c) /= counts[c];
    }
  }
  double total = 0.0;
  for (index_t s = 0; s < n; ++s) {
    for (index_t i = 0; i < d; ++i) {
      const double diff = features(i, s) - centroids(i, labels[s]);
      total += diff * diff;
    }
  }
  return total;
}

}  // namespace

TEST_CASE("kmeans") {
  SUBCASE("well-separated clouds are recovered exactly") {
    Rng rng(77);
    const double centers[3][2] = {{0.0, 0.0}, {10.0, 0.0}, {0.0, 10.0}};
    DenseMatrix features(2, 24);
    LabelVector truth(24);
    for (index_t s = 0; s < 24; ++s) {
      const int c = static_cast<int>(s % 3);
      truth[s] = c;
      features(0, s) = centers[c][0] + rng.uniform(-0.5, 0.5);
      features(1, s) = centers[c][1] + rng.uniform(-0.5, 0.5);
    }
    KmeansResult res = kmeans(features, 3, 5, 1);
    CHECK(res.restarts_used == 5);
    CHECK(accuracy(res.labels, truth) == doctest::Approx(1.0));
    CHECK(res.objective == doctest::Approx(wcss_of(features, res.labels, 3)).epsilon(1e-9));
  }

  SUBCASE("k = 1 objective is the total variance") {
    Rng rng(79);
    DenseMatrix features = testutil::random_matrix(3, 12, rng, -1.0, 1.0);
    KmeansResult res = kmeans(features, 1, 3, 0);
    CHECK(res.objective == doctest::Approx(wcss_of(features, res.labels, 1)).epsilon(1e-12));
  }

  SUBCASE("1-D example with objective 4") {
    DenseMatrix features(1, 6, {0.0, 1.0, 2.0, 10.0, 11.0, 12.0});
    KmeansResult res = kmeans(features, 2, 4, 0);
    CHECK(res.objective == doctest::Approx(4.0));
    CHECK(res.labels[0] == res.labels[1]);
    CHECK(res.labels[1] == res.labels[2]);
    CHECK(res.labels[3] == res.labels[4]);
    CHECK(res.labels[4] == res.labels[5]);
    CHECK(res.labels[0] != res.labels[3]);
  }

  SUBCASE("degenerate data with duplicate points") {
    DenseMatrix features = DenseMatrix::constant(2, 5, 1.0);
    KmeansResult res = kmeans(features, 2, 2, 0);
    REQUIRE(res.labels.size() == 5);
    for (int v : res.labels) {
      CHECK(v >= 0);
      CHECK(v < 2);
    }
    CHECK(res.objective == doctest::Approx(0.0));
  }

  SUBCASE("determinism") {
    Rng rng(83);
    DenseMatrix features = testutil::random_matrix(4, 20, rng, 0.0, 1.0);
    KmeansResult a = kmeans(features, 4, 6, 42);
    KmeansResult b = kmeans(features, 4, 6, 42);
    CHECK(a.labels == b.labels);
    CHECK(a.objective == b.objective);
    CHECK(a.best_restart == b.best_restart);
  }

  SUBCASE("validation") {
    DenseMatrix f(2, 3);
    CHECK_THROWS_AS(kmeans(f, 0, 1, 0), ParameterError);
    CHECK_THROWS_AS(kmeans(f, 4, 1, 0), ParameterError);
    CHECK_THROWS_AS(kmeans(f, 2, 0, 0), ParameterError);
    DenseMatrix inf(1, 2, {1.0, std::numeric_limits<double>::infinity()});
    CHECK_THROWS_AS(kmeans(inf, 1, 1, 0), DomainError);
  }
}

TEST_CASE("accuracy") {
  CHECK(accuracy({0, 1, 2, 0}, {0, 1, 2, 0}) == doctest::Approx(1.0));
  // relabeling is free: a permutation of cluster ids scores 1.0
  CHECK(accuracy({2, 0, 1, 2}, {0, 1, 2, 0}) == doctest::Approx(1.0));
  CHECK(accuracy({0, 0, 1, 1}, {0, 1, 1, 1}) == doctest::Approx(0.75));

  CHECK_THROWS_AS(accuracy({0, 1}, {0, 1, 2}), DimensionError);
  CHECK_THROWS_AS(accuracy({}, {}), ParameterError);
  CHECK_THROWS_AS(accuracy({0, -1}, {0, 1}), ParameterError);

  SUBCASE("matches exhaustive search over label permutations") {
    Rng rng(89);
    for (int trial = 0; trial < 50; ++trial) {
      const int k = 2 + static_cast<int>(rng.uniform_int(5));  // up to 6 labels
      LabelVector pred = random_labels(30, k, rng);
      LabelVector truth = random_labels(30, k, rng);
      const double got = accuracy(pred, truth);
      CHECK(got == doctest::Approx(brute_force_accuracy(pred, truth)).epsilon(1e-12));
      CHECK(got >= 1.0 / k - 1e-12);  // best mapping is at least as good as chance
      CHECK(got <= 1.0);
    }
  }

  SUBCASE("different label counts on each side") {
    LabelVector pred = {0, 1, 2, 2};
    LabelVector truth = {0, 1, 1, 1};
    CHECK(accuracy(pred, truth) == doctest::Approx(brute_force_accuracy(pred, truth)));
  }
}

TEST_CASE("nmi") {
  CHECK(nmi({0, 1, 2, 0}, {0, 1, 2, 0}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(nmi({1, 0, 2, 1}, {0, 1, 2, 0}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(nmi({0, 0, 1, 1}, {0, 1, 0, 1}) == doctest::Approx(0.0));

  // degenerate partitions
  CHECK(nmi({0, 0, 0}, {0, 0, 0}) == 1.0);
  CHECK(nmi({0, 0, 0}, {0, 1, 2}) == 0.0);
  CHECK(nmi({0, 1, 2}, {0, 0, 0}) == 0.0);

  SUBCASE("matches the plug-in estimate") {
    Rng rng(97);
    for (int trial = 0; trial < 20; ++trial) {
      const int k = 2 + static_cast<int>(rng.uniform_int(4));
      LabelVector pred = random_labels(40, k, rng);
      LabelVector truth = random_labels(40, k, rng);
      const double got = nmi(pred, truth);
      CHECK(got == doctest::Approx(reference_nmi(pred, truth)).epsilon(1e-10));
      CHECK(got >= 0.0);
      CHECK(got <= 1.0);
    }
  }
}

TEST_CASE("hoyer_sparseness") {
  CHECK(hoyer_sparseness({0.0, 0.0, 5.0, 0.0}) == doctest::Approx(1.0));
  CHECK(hoyer_sparseness({3.0, 3.0, 3.0}) == doctest::Approx(0.0));
  CHECK(hoyer_sparseness({1.0, 0.0, 1.0, 0.0}) ==
        doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-12));
  CHECK(hoyer_sparseness({0.0, 0.0, 0.0}) == 1.0);

  SUBCASE("scale invariance") {
    std::vector<double> v = {0.3, 0.0, 1.2, 0.7, 0.1};
    std::vector<double> scaled = v;
    for (double& x : scaled) x *= 2.5;
    CHECK(hoyer_sparseness(v) == doctest::Approx(hoyer_sparseness(scaled)).epsilon(1e-12));
  }

  SUBCASE("validation") {
    CHECK_THROWS_AS(hoyer_sparseness({1.0}), ParameterError);
    CHECK_THROWS_AS(hoyer_sparseness(DenseMatrix(1, 3)), ParameterError);
  }

  SUBCASE("matrix version averages over columns") {
    // column 0 one-hot (sparseness 1), column 1 constant (sparseness 0)
    DenseMatrix m = DenseMatrix::from_rows({{1.0, 2.0}, {0.0, 2.0}});
    CHECK(hoyer_sparseness(m) == doctest::Approx(0.5));
  }

  SUBCASE("stays in [0, 1] on random vectors") {
    Rng rng(101);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> v(2 + rng.uniform_int(20));
      for (double& x : v) x = rng.uniform();
      const double s = hoyer_sparseness(v);
      CHECK(s >= 0.0);
      CHECK(s <= 1.0);
    }
  }
}

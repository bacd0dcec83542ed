#include "dnsnmf/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dnsnmf/rng.hpp"

namespace dnsnmf {

namespace {

double sq_dist(const DenseMatrix& features, index_t col, const std::vector<double>& centroid) {
  const index_t d = features.rows();
  double acc = 0.0;
  for (index_t i = 0; i < d; ++i) {
    const double diff = features(i, col) - centroid[static_cast<std::size_t>(i)];
    acc += diff * diff;
  }
  return acc;
}

struct SingleRun {
  LabelVector labels;
  double objective = 0.0;
};

SingleRun kmeans_once(const DenseMatrix& features, index_t k, Rng& rng) {
  const index_t d = features.rows();
  const index_t n = features.cols();
  constexpr int kMaxLloydIters = 100;

  // k-means++ seeding.
  std::vector<std::vector<double>> centroids;
  centroids.reserve(static_cast<std::size_t>(k));
  std::vector<double> min_sq(static_cast<std::size_t>(n),
                             std::numeric_limits<double>::infinity());
  {
    const index_t first = rng.uniform_int(n);
    std::vector<double> c(static_cast<std::size_t>(d));
    for (index_t i = 0; i < d; ++i) c[static_cast<std::size_t>(i)] = features(i, first);
    centroids.push_back(std::move(c));
  }
  for (index_t j = 1; j < k; ++j) {
    double total = 0.0;
    for (index_t s = 0; s < n; ++s) {
      const double dd = sq_dist(features, s, centroids.back());
      auto& slot = min_sq[static_cast<std::size_t>(s)];
      slot = std::min(slot, dd);
      total += slot;
    }
    index_t pick = n - 1;
    if (total > 0.0) {
      const double t = rng.uniform() * total;
      double acc = 0.0;
      for (index_t s = 0; s < n; ++s) {
        acc += min_sq[static_cast<std::size_t>(s)];
        if (acc > t) {
          pick = s;
          break;
        }
      }
    } else {
      pick = rng.uniform_int(n);  // fewer distinct points than k
    }
    std::vector<double> c(static_cast<std::size_t>(d));
    for (index_t i = 0; i < d; ++i) c[static_cast<std::size_t>(i)] = features(i, pick);
    centroids.push_back(std::move(c));
  }

  auto assign = [&](LabelVector& labels) {
    for (index_t s = 0; s < n; ++s) {
      int best = 0;
      double best_d = sq_dist(features, s, centroids[0]);
      for (index_t j = 1; j < k; ++j) {
        const double dd = sq_dist(features, s, centroids[static_cast<std::size_t>(j)]);
        if (dd < best_d) {
          best_d = dd;
          best = static_cast<int>(j);
        }
      }
      labels[static_cast<std::size_t>(s)] = best;
    }
  };

  LabelVector labels(static_cast<std::size_t>(n), 0);
  assign(labels);

  std::vector<index_t> counts(static_cast<std::size_t>(k), 0);
  for (int it = 0; it < kMaxLloydIters; ++it) {
    // Means of the current assignment.
    for (auto& c : centroids) std::fill(c.begin(), c.end(), 0.0);
    std::fill(counts.begin(), counts.end(), index_t{0});
    for (index_t s = 0; s < n; ++s) {
      const auto j = static_cast<std::size_t>(labels[static_cast<std::size_t>(s)]);
      ++counts[j];
      for (index_t i = 0; i < d; ++i) centroids[j][static_cast<std::size_t>(i)] += features(i, s);
    }
    for (index_t j = 0; j < k; ++j) {
      const auto cnt = counts[static_cast<std::size_t>(j)];
      if (cnt > 0) {
        for (double& v : centroids[static_cast<std::size_t>(j)]) v /= static_cast<double>(cnt);
      }
    }
    // Empty clusters grab the farthest point from its own centroid.
    std::vector<bool> taken(static_cast<std::size_t>(n), false);
    for (index_t j = 0; j < k; ++j) {
      if (counts[static_cast<std::size_t>(j)] > 0) continue;
      index_t far = -1;
      double far_d = -1.0;
      for (index_t s = 0; s < n; ++s) {
        if (taken[static_cast<std::size_t>(s)]) continue;
        const auto owner = static_cast<std::size_t>(labels[static_cast<std::size_t>(s)]);
        if (counts[owner] == 0) continue;
        const double dd = sq_dist(features, s, centroids[owner]);
        if (dd > far_d) {
          far_d = dd;
          far = s;
        }
      }
      if (far < 0) continue;  // degenerate: nothing left to take
      taken[static_cast<std::size_t>(far)] = true;
      for (index_t i = 0; i < d; ++i) {
        centroids[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = features(i, far);
      }
    }

    LabelVector next(static_cast<std::size_t>(n), 0);
    assign(next);
    if (next == labels) break;
    labels = std::move(next);
  }

  SingleRun run;
  run.objective = 0.0;
  for (index_t s = 0; s < n; ++s) {
    run.objective +=
        sq_dist(features, s, centroids[static_cast<std::size_t>(labels[static_cast<std::size_t>(s)])]);
  }
  run.labels = std::move(labels);
  return run;
}

}  // namespace

KmeansResult kmeans(const DenseMatrix& features, index_t k, int restarts, std::uint64_t seed) {
  if (!features.all_finite()) throw DomainError("kmeans: features must be finite");
  const index_t n = features.cols();
  if (k < 1 || k > n) {
    throw ParameterError("kmeans: k = " + std::to_string(k) + " out of range for " +
                         std::to_string(n) + " samples");
  }
  if (restarts < 1) throw ParameterError("kmeans: restarts must be >= 1");

  KmeansResult best;
  best.restarts_used = restarts;
  for (int r = 0; r < restarts; ++r) {
    Rng rng(derive_seed(seed, 0x6b6d0000u + static_cast<std::uint64_t>(r)));
    SingleRun run = kmeans_once(features, k, rng);
    if (r == 0 || run.objective < best.objective) {
      best.objective = run.objective;
      best.labels = std::move(run.labels);
      best.best_restart = r;
    }
  }
  return best;
}

namespace {

index_t label_space(const LabelVector& a, const LabelVector& b, const char* where) {
  if (a.size() != b.size()) {
    throw DimensionError(std::string(where) + ": label vectors differ in length");
  }
  if (a.empty()) throw ParameterError(std::string(where) + ": empty label vectors");
  int hi = 0;
  for (int v : a) {
    if (v < 0) throw ParameterError(std::string(where) + ": negative label");
    hi = std::max(hi, v);
  }
  for (int v : b) {
    if (v < 0) throw ParameterError(std::string(where) + ": negative label");
    hi = std::max(hi, v);
  }
  return hi + 1;
}

/// Min-cost assignment on a square cost matrix (shortest augmenting paths,
/// O(k^3)). Returns assignment[col] = row.
std::vector<index_t> hungarian(const std::vector<std::vector<double>>& cost) {
  const auto k = static_cast<index_t>(cost.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(k + 1), 0.0);
  std::vector<double> v(static_cast<std::size_t>(k + 1), 0.0);
  std::vector<index_t> p(static_cast<std::size_t>(k + 1), 0);
  std::vector<index_t> way(static_cast<std::size_t>(k + 1), 0);
  for (index_t i = 1; i <= k; ++i) {
    p[0] = i;
    index_t j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(k + 1), inf);
    std::vector<bool> used(static_cast<std::size_t>(k + 1), false);
    do {
      used[static_cast<std::size_t>(j0)] = true;
      const index_t i0 = p[static_cast<std::size_t>(j0)];
      double delta = inf;
      index_t j1 = 0;
      for (index_t j = 1; j <= k; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = cost[static_cast<std::size_t>(i0 - 1)][static_cast<std::size_t>(j - 1)] -
                           u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (index_t j = 0; j <= k; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const index_t j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<index_t> assignment(static_cast<std::size_t>(k), 0);
  for (index_t j = 1; j <= k; ++j) {
    assignment[static_cast<std::size_t>(j - 1)] = p[static_cast<std::size_t>(j)] - 1;
  }
  return assignment;
}

}  // namespace

double accuracy(const LabelVector& predicted, const LabelVector& truth) {
  const index_t k = label_space(predicted, truth, "accuracy");
  const auto n = static_cast<index_t>(predicted.size());
  std::vector<std::vector<double>> confusion(
      static_cast<std::size_t>(k), std::vector<double>(static_cast<std::size_t>(k), 0.0));
  for (index_t s = 0; s < n; ++s) {
    confusion[static_cast<std::size_t>(predicted[static_cast<std::size_t>(s)])]
             [static_cast<std::size_t>(truth[static_cast<std::size_t>(s)])] += 1.0;
  }
  // Maximize matched counts = minimize (n - count).
  std::vector<std::vector<double>> cost(confusion);
  for (auto& row : cost) {
    for (double& c : row) c = static_cast<double>(n) - c;
  }
  const std::vector<index_t> row_of_col = hungarian(cost);
  double matched = 0.0;
  for (index_t j = 0; j < k; ++j) {
    matched += confusion[static_cast<std::size_t>(row_of_col[static_cast<std::size_t>(j)])]
                        [static_cast<std::size_t>(j)];
  }
  return matched / static_cast<double>(n);
}

double nmi(const LabelVector& predicted, const LabelVector& truth) {
  const index_t k = label_space(predicted, truth, "nmi");
  const auto n = static_cast<index_t>(predicted.size());
  std::vector<std::vector<double>> joint(
      static_cast<std::size_t>(k), std::vector<double>(static_cast<std::size_t>(k), 0.0));
  std::vector<double> pa(static_cast<std::size_t>(k), 0.0);
  std::vector<double> pb(static_cast<std::size_t>(k), 0.0);
  for (index_t s = 0; s < n; ++s) {
    const auto i = static_cast<std::size_t>(predicted[static_cast<std::size_t>(s)]);
    const auto j = static_cast<std::size_t>(truth[static_cast<std::size_t>(s)]);
    joint[i][j] += 1.0;
    pa[i] += 1.0;
    pb[j] += 1.0;
  }
  const double nn = static_cast<double>(n);
  double ha = 0.0;
  double hb = 0.0;
  for (double c : pa) {
    if (c > 0.0) ha -= c / nn * std::log(c / nn);
  }
  for (double c : pb) {
    if (c > 0.0) hb -= c / nn * std::log(c / nn);
  }
  if (ha == 0.0 && hb == 0.0) return 1.0;  // both single-cluster: identical partitions
  if (ha == 0.0 || hb == 0.0) return 0.0;  // single-cluster vs multi-cluster
  double mi = 0.0;
  for (index_t i = 0; i < k; ++i) {
    for (index_t j = 0; j < k; ++j) {
      const double c = joint[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (c > 0.0) {
        mi += c / nn *
              std::log(nn * c / (pa[static_cast<std::size_t>(i)] * pb[static_cast<std::size_t>(j)]));
      }
    }
  }
  return std::clamp(mi / std::max(ha, hb), 0.0, 1.0);
}

double hoyer_sparseness(const double* v, index_t d) {
  if (d < 2) throw ParameterError("hoyer_sparseness: need at least 2 entries");
  double l1 = 0.0;
  double l2 = 0.0;
  for (index_t i = 0; i < d; ++i) {
    l1 += std::abs(v[i]);
    l2 += v[i] * v[i];
  }
  if (l2 == 0.0) return 1.0;  // all-zero: maximally sparse by convention
  const double root_d = std::sqrt(static_cast<double>(d));
  return std::clamp((root_d - l1 / std::sqrt(l2)) / (root_d - 1.0), 0.0, 1.0);
}

double hoyer_sparseness(const std::vector<double>& v) {
  return hoyer_sparseness(v.data(), static_cast<index_t>(v.size()));
}

double hoyer_sparseness(const DenseMatrix& m) {
  const index_t d = m.rows();
  if (d < 2) throw ParameterError("hoyer_sparseness: need at least 2 rows");
  std::vector<double> column(static_cast<std::size_t>(d));
  double acc = 0.0;
  for (index_t j = 0; j < m.cols(); ++j) {
    for (index_t i = 0; i < d; ++i) column[static_cast<std::size_t>(i)] = m(i, j);
    acc += hoyer_sparseness(column.data(), d);
  }
  return acc / static_cast<double>(m.cols());
}

}  // namespace dnsnmf

#pragma once

#include <cstdint>
#include <vector>

#include "dnsnmf/dense_matrix.hpp"

namespace dnsnmf {

/// Cluster ids, 0-based, one per sample.
using LabelVector = std::vector<int>;

struct KmeansResult {
  LabelVector labels;
  double objective = 0.0;  ///< within-cluster sum of squares of the winner
  int restarts_used = 0;
  int best_restart = 0;  ///< index of the winning restart (ties: lowest)
};

/// Lloyd's algorithm with k-means++ seeding, run `restarts` times with
/// distinct derived seeds; the labeling with the lowest within-cluster sum of
/// squares wins (ties broken by lowest restart index). Columns of `features`
/// are the samples. Sample-to-centroid ties go to the lowest centroid index.
/// A cluster that empties is re-seeded at the point farthest from its
/// assigned centroid (ties: lowest sample index; each point re-seeds at most
/// one cluster per pass).
KmeansResult kmeans(const DenseMatrix& features, index_t k, int restarts, std::uint64_t seed);

/// Clustering accuracy: the best match between predicted and true labels over
/// all one-to-one label mappings, found by Hungarian assignment on the
/// confusion matrix. Returns the matched fraction in [0, 1].
double accuracy(const LabelVector& predicted, const LabelVector& truth);

/// Normalized mutual information MI / max(H_pred, H_truth), natural logs.
/// Two single-cluster partitions score 1.0; if exactly one side is
/// single-cluster the score is 0.0.
double nmi(const LabelVector& predicted, const LabelVector& truth);

/// Hoyer sparseness (sqrt(d) - ||v||_1 / ||v||_2) / (sqrt(d) - 1) in [0, 1];
/// 0 for constant vectors, 1 for one-hot vectors. An all-zero vector counts
/// as maximally sparse (1.0). Requires d >= 2.
double hoyer_sparseness(const double* v, index_t d);
double hoyer_sparseness(const std::vector<double>& v);

/// Mean Hoyer sparseness over the columns of m.
double hoyer_sparseness(const DenseMatrix& m);

/// Row of an evaluation table: clustering quality of one factorization run
/// plus the sparseness of its factors.
struct ClusteringReport {
  double accuracy = 0.0;
  double nmi = 0.0;
  double kmeans_objective = 0.0;
  int restarts_used = 0;
  std::vector<double> sparseness_z;  ///< one entry per layer basis
  double sparseness_h = 0.0;
};

}  // namespace dnsnmf

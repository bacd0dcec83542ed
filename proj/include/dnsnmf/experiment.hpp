#pragma once

#include <string>
#include <vector>

#include "dnsnmf/clustering.hpp"
#include "dnsnmf/dataset.hpp"
#include "dnsnmf/deep_nsnmf.hpp"
#include "dnsnmf/solver_config.hpp"

namespace dnsnmf {

enum class Method {
  nmf,     ///< single-layer multiplicative-update NMF
  nsnmf,   ///< single-layer non-smooth NMF
  dnsnmf,  ///< deep non-smooth NMF: pre-train + fine-tune
};

std::string method_name(Method m);
Method parse_method(const std::string& name);

struct KmeansConfig {
  index_t k = 0;  ///< 0 = infer: number of truth clusters, else the top dimension
  int restarts = 20;
  std::uint64_t seed = 0;  ///< selects an independent clustering stream per global seed
};

/// One experiment: dataset -> factorization -> k-means on H_m -> metrics ->
/// files. cfg.seed is the only seed that matters: the solver and k-means
/// streams are derived from it (the seed fields inside pretrain/finetune are
/// overridden), so a fixed cfg.seed fixes every output byte.
struct ExperimentConfig {
  Method method = Method::dnsnmf;
  std::vector<index_t> dims;
  std::vector<double> thetas;  ///< one value broadcast to all layers, or one per layer
  SolverConfig pretrain;       ///< also the solver used by the shallow methods
  SolverConfig finetune;
  KmeansConfig kmeans;
  DatasetSource dataset;
  std::uint64_t seed = 0;
  std::string output_dir;  ///< empty = write nothing
};

struct ExperimentResult {
  LayerStack stack;
  std::vector<double> objective_trace;  ///< starting objective, then one entry per sweep
  std::vector<SweepReport> sweep_log;   ///< fine-tuning sweeps (empty for shallow methods)
  KmeansResult clusters;
  ClusteringReport report;  ///< accuracy/nmi are meaningful only when has_labels
  bool has_labels = false;
  index_t kmeans_k = 0;
  std::string report_path;
  std::string checkpoint_path;
};

/// Throws ParameterError on inconsistent configuration (e.g. nmf/nsnmf with
/// more than one layer, theta count not matching dims).
void validate_config(const ExperimentConfig& cfg);

/// Per-layer thetas after broadcasting (nmf -> all zeros).
std::vector<double> layer_thetas(const ExperimentConfig& cfg);

/// Runs load -> factorize -> cluster -> metrics -> write. Stage failures are
/// rethrown with the stage name attached and any partially written output
/// files are removed.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

}  // namespace dnsnmf

// Command-line front end: factorize / evaluate / export-features / synth /
// depth-study. Exit codes: 0 success, 1 configuration error, 2 data or
// format error, 3 numerical failure.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dnsnmf/checkpoint.hpp"
#include "dnsnmf/dataset.hpp"
#include "dnsnmf/experiment.hpp"
#include "dnsnmf/feature_export.hpp"
#include "dnsnmf/report.hpp"
#include "dnsnmf/rng.hpp"

namespace {

using namespace dnsnmf;

struct CliOptions {
  // dataset
  std::string csv;
  std::string images;
  std::string labels;
  bool synthetic = false;
  std::vector<std::int64_t> synth_dims{8, 4};
  double synth_theta = 0.3;
  double synth_noise = 0.0;
  std::int64_t synth_p = 20;
  std::int64_t synth_n = 60;

  // factorization
  std::string method = "dnsnmf";
  std::vector<std::int64_t> dims;
  std::vector<double> thetas;
  std::string init = "nndsvd";
  double tol = 1e-5;
  int max_iter = 500;
  double outer_tol = 1e-5;
  int max_sweeps = 200;
  double inner_tol = 1e-6;
  int max_inner_iter = 50;

  // clustering
  std::int64_t k = 0;
  int restarts = 20;
  std::uint64_t kmeans_seed = 0;

  std::uint64_t seed = 0;
  std::string out;
};

void add_dataset_flags(CLI::App* cmd, CliOptions& o) {
  cmd->add_option("--csv", o.csv, "CSV data matrix (rows = features, columns = samples)");
  cmd->add_option("--images", o.images, "directory of same-sized binary PGM images");
  cmd->add_option("--labels", o.labels, "label file, one integer per line");
  cmd->add_flag("--synthetic", o.synthetic, "use the built-in synthetic generator");
  cmd->add_option("--synth-dims", o.synth_dims, "generator layer sizes r1,r2")->delimiter(',');
  cmd->add_option("--synth-theta", o.synth_theta, "generator smoothing theta");
  cmd->add_option("--synth-noise", o.synth_noise, "generator noise amplitude (relative)");
  cmd->add_option("--synth-p", o.synth_p, "generator feature count");
  cmd->add_option("--synth-n", o.synth_n, "generator sample count");
}

void add_solver_flags(CLI::App* cmd, CliOptions& o) {
  cmd->add_option("--method", o.method, "nmf, nsnmf or dnsnmf");
  cmd->add_option("--dims", o.dims, "layer sizes r1,...,rm")->delimiter(',');
  cmd->add_option("--theta", o.thetas, "smoothing theta (one value or one per layer)")
      ->delimiter(',');
  cmd->add_option("--init", o.init, "nndsvd or random");
  cmd->add_option("--tol", o.tol, "pre-training relative objective tolerance");
  cmd->add_option("--max-iter", o.max_iter, "pre-training sweep cap");
  cmd->add_option("--outer-tol", o.outer_tol, "fine-tuning relative objective tolerance");
  cmd->add_option("--max-sweeps", o.max_sweeps, "fine-tuning sweep cap");
  cmd->add_option("--inner-tol", o.inner_tol, "per-block APG iterate tolerance");
  cmd->add_option("--max-inner-iter", o.max_inner_iter, "per-block APG iteration cap");
}

void add_kmeans_flags(CLI::App* cmd, CliOptions& o) {
  cmd->add_option("--k", o.k, "cluster count (0 = infer from labels / top layer)");
  cmd->add_option("--restarts", o.restarts, "k-means restarts");
  cmd->add_option("--kmeans-seed", o.kmeans_seed, "extra k-means stream selector");
}

DatasetSource dataset_source(const CliOptions& o) {
  int sources = 0;
  sources += o.csv.empty() ? 0 : 1;
  sources += o.images.empty() ? 0 : 1;
  sources += o.synthetic ? 1 : 0;
  if (sources != 1) {
    throw ParameterError("pick exactly one data source: --csv, --images or --synthetic");
  }
  DatasetSource src;
  if (!o.csv.empty()) {
    src.kind = DatasetKind::csv;
    src.data_path = o.csv;
  } else if (!o.images.empty()) {
    src.kind = DatasetKind::pgm_directory;
    src.data_path = o.images;
  } else {
    src.kind = DatasetKind::synthetic;
    src.synthetic.p = o.synth_p;
    src.synthetic.n = o.synth_n;
    src.synthetic.dims.assign(o.synth_dims.begin(), o.synth_dims.end());
    src.synthetic.theta = o.synth_theta;
    src.synthetic.noise = o.synth_noise;
    src.synthetic.seed = o.seed;
  }
  src.labels_path = o.labels;
  return src;
}

InitKind parse_init(const std::string& name) {
  if (name == "nndsvd") return InitKind::nndsvd;
  if (name == "random") return InitKind::random;
  throw ParameterError("unknown init '" + name + "' (expected nndsvd or random)");
}

ExperimentConfig experiment_config(const CliOptions& o) {
  ExperimentConfig cfg;
  cfg.method = parse_method(o.method);
  cfg.dims.assign(o.dims.begin(), o.dims.end());
  cfg.thetas = o.thetas;
  cfg.pretrain.tol = o.tol;
  cfg.pretrain.max_iter = o.max_iter;
  cfg.pretrain.init = parse_init(o.init);
  cfg.finetune.outer_tol = o.outer_tol;
  cfg.finetune.max_sweeps = o.max_sweeps;
  cfg.finetune.inner_tol = o.inner_tol;
  cfg.finetune.max_inner_iter = o.max_inner_iter;
  cfg.kmeans.k = o.k;
  cfg.kmeans.restarts = o.restarts;
  cfg.kmeans.seed = o.kmeans_seed;
  cfg.dataset = dataset_source(o);
  cfg.seed = o.seed;
  cfg.output_dir = o.out;
  return cfg;
}

void print_result(const ExperimentResult& result) {
  KeyValueReport kv;
  if (result.has_labels) {
    kv.add("accuracy", result.report.accuracy);
    kv.add("nmi", result.report.nmi);
  }
  kv.add("kmeans_objective", result.report.kmeans_objective);
  kv.add("final_objective", result.objective_trace.back());
  kv.add("sweeps", static_cast<std::int64_t>(result.objective_trace.size() - 1));
  std::cout << kv.str();
  if (!result.report_path.empty()) {
    std::cout << "report = " << result.report_path << "\n"
              << "checkpoint = " << result.checkpoint_path << "\n";
  }
}

int run_factorize(const CliOptions& o) {
  const ExperimentResult result = run_experiment(experiment_config(o));
  print_result(result);
  return 0;
}

int run_evaluate(const CliOptions& o, const std::string& checkpoint_path) {
  const Checkpoint cp = load_checkpoint(checkpoint_path);
  const DatasetBundle data = load_dataset(dataset_source(o));
  if (!data.labels) throw ParameterError("evaluate needs labels (--labels or --synthetic)");
  if (data.x.cols() != cp.stack.h_top.cols()) {
    throw DimensionError("dataset has " + std::to_string(data.x.cols()) +
                         " samples but checkpoint encodes " +
                         std::to_string(cp.stack.h_top.cols()));
  }

  index_t k = o.k;
  if (k == 0) {
    int hi = 0;
    for (int v : *data.labels) hi = std::max(hi, v);
    k = hi + 1;
  }
  const KmeansResult clusters = kmeans(cp.stack.h_top, k, o.restarts,
                                       derive_seed(o.seed, 0x6b6d0000u + o.kmeans_seed));

  ClusteringReport report;
  report.accuracy = accuracy(clusters.labels, *data.labels);
  report.nmi = nmi(clusters.labels, *data.labels);
  report.kmeans_objective = clusters.objective;
  report.restarts_used = clusters.restarts_used;
  for (const DenseMatrix& z : cp.stack.z) {
    report.sparseness_z.push_back(z.rows() >= 2 ? hoyer_sparseness(z) : 0.0);
  }
  report.sparseness_h = cp.stack.h_top.rows() >= 2 ? hoyer_sparseness(cp.stack.h_top) : 0.0;

  KeyValueReport kv;
  append_metrics(kv, report);
  std::cout << kv.str();
  if (!o.out.empty()) export_report(report, cp.sweeps, o.out);
  return 0;
}

int run_export_features(const std::string& checkpoint_path, std::int64_t layer, std::int64_t h,
                        std::int64_t w, const std::string& out) {
  const Checkpoint cp = load_checkpoint(checkpoint_path);
  export_feature_grid(cp.stack, layer, h, w, out);
  std::cout << "wrote " << out << "\n";
  return 0;
}

int run_synth(const CliOptions& o) {
  if (o.out.empty()) throw ParameterError("synth needs --out <directory>");
  SyntheticSpec spec;
  spec.p = o.synth_p;
  spec.n = o.synth_n;
  spec.dims.assign(o.synth_dims.begin(), o.synth_dims.end());
  spec.theta = o.synth_theta;
  spec.noise = o.synth_noise;
  spec.seed = o.seed;
  const SyntheticData data = generate_synthetic(spec);

  std::error_code ec;
  std::filesystem::create_directories(o.out, ec);
  if (ec) throw DataFormatError(o.out + ": cannot create directory");
  save_csv_matrix(o.out + "/x.csv", data.x);
  save_labels(o.out + "/labels.txt", data.labels);
  std::cout << "wrote " << o.out << "/x.csv (" << data.x.rows() << "x" << data.x.cols()
            << ") and " << o.out << "/labels.txt\n";
  return 0;
}

int run_depth_study(const CliOptions& o) {
  if (o.out.empty()) throw ParameterError("depth-study needs --out <directory>");
  if (o.dims.empty()) throw ParameterError("depth-study needs --dims r1,...,rm");
  if (o.method != "dnsnmf") throw ParameterError("depth-study always runs dnsnmf");

  // Arm m uses the last m entries of dims, so the top dimension (and the
  // cluster count) stays fixed while depth grows.
  KeyValueReport summary;
  std::string dims_echo;
  for (std::size_t i = 0; i < o.dims.size(); ++i) {
    if (i > 0) dims_echo += ',';
    dims_echo += std::to_string(o.dims[i]);
  }
  summary.add("dims", dims_echo);
  summary.add("seed", static_cast<std::int64_t>(o.seed));

  for (std::size_t depth = 1; depth <= o.dims.size(); ++depth) {
    CliOptions arm = o;
    arm.dims.assign(o.dims.end() - static_cast<std::ptrdiff_t>(depth), o.dims.end());
    arm.out = o.out + "/m" + std::to_string(depth);
    const ExperimentResult result = run_experiment(experiment_config(arm));

    const std::string prefix = "m" + std::to_string(depth) + ".";
    if (result.has_labels) {
      summary.add(prefix + "accuracy", result.report.accuracy);
      summary.add(prefix + "nmi", result.report.nmi);
    }
    summary.add(prefix + "final_objective", result.objective_trace.back());
    summary.add(prefix + "sweeps", static_cast<std::int64_t>(result.objective_trace.size() - 1));
    std::cout << "depth " << depth << " done (" << arm.out << ")\n";
  }
  const std::string summary_path = o.out + "/depth_study.txt";
  summary.write(summary_path);
  std::cout << summary.str() << "summary = " << summary_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical nonnegative matrix factorization toolkit"};
  app.require_subcommand(1);

  CliOptions o;
  std::string checkpoint_path;
  std::int64_t layer = 1;
  std::int64_t tile_h = 0;
  std::int64_t tile_w = 0;

  CLI::App* factorize = app.add_subcommand("factorize", "factorize a dataset and report metrics");
  add_dataset_flags(factorize, o);
  add_solver_flags(factorize, o);
  add_kmeans_flags(factorize, o);
  factorize->add_option("--seed", o.seed, "global seed");
  factorize->add_option("--out", o.out, "output directory for checkpoint + report");
  factorize->set_config("--config", "", "read options from a config file");

  CLI::App* evaluate = app.add_subcommand("evaluate", "cluster a saved checkpoint against labels");
  evaluate->add_option("--checkpoint", checkpoint_path, "factorization checkpoint")->required();
  add_dataset_flags(evaluate, o);
  add_kmeans_flags(evaluate, o);
  evaluate->add_option("--seed", o.seed, "global seed");
  evaluate->add_option("--out", o.out, "also write the report to this file");
  evaluate->set_config("--config", "", "read options from a config file");

  CLI::App* exportf = app.add_subcommand("export-features", "render layer features as a PGM grid");
  exportf->add_option("--checkpoint", checkpoint_path, "factorization checkpoint")->required();
  exportf->add_option("--layer", layer, "layer index (1-based)");
  exportf->add_option("--height", tile_h, "image height of one feature")->required();
  exportf->add_option("--width", tile_w, "image width of one feature")->required();
  exportf->add_option("--out", o.out, "output PGM path")->required();

  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic dataset as CSV + labels");
  synth->add_option("--p", o.synth_p, "feature count");
  synth->add_option("--n", o.synth_n, "sample count");
  synth->add_option("--dims", o.synth_dims, "generator layer sizes r1,r2")->delimiter(',');
  synth->add_option("--theta", o.synth_theta, "generator smoothing theta");
  synth->add_option("--noise", o.synth_noise, "noise amplitude (relative)");
  synth->add_option("--seed", o.seed, "generator seed");
  synth->add_option("--out", o.out, "output directory")->required();

  CLI::App* depth = app.add_subcommand("depth-study", "factorize at every depth 1..m");
  add_dataset_flags(depth, o);
  add_solver_flags(depth, o);
  add_kmeans_flags(depth, o);
  depth->add_option("--seed", o.seed, "global seed");
  depth->add_option("--out", o.out, "output directory (one subdirectory per depth)")->required();
  depth->set_config("--config", "", "read options from a config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (factorize->parsed()) return run_factorize(o);
    if (evaluate->parsed()) return run_evaluate(o, checkpoint_path);
    if (exportf->parsed()) return run_export_features(checkpoint_path, layer, tile_h, tile_w, o.out);
    if (synth->parsed()) return run_synth(o);
    if (depth->parsed()) return run_depth_study(o);
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const DataFormatError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

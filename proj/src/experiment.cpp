#include "dnsnmf/experiment.hpp"

#include <algorithm>
#include <filesystem>

#include "dnsnmf/checkpoint.hpp"
#include "dnsnmf/report.hpp"
#include "dnsnmf/rng.hpp"
#include "dnsnmf/shallow_nmf.hpp"

namespace dnsnmf {

std::string method_name(Method m) {
  switch (m) {
    case Method::nmf:
      return "nmf";
    case Method::nsnmf:
      return "nsnmf";
    case Method::dnsnmf:
      return "dnsnmf";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  if (name == "nmf") return Method::nmf;
  if (name == "nsnmf") return Method::nsnmf;
  if (name == "dnsnmf") return Method::dnsnmf;
  throw ParameterError("unknown method '" + name + "' (expected nmf, nsnmf or dnsnmf)");
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.dims.empty()) throw ParameterError("config: dims must name at least one layer");
  for (index_t d : cfg.dims) {
    if (d < 1) throw ParameterError("config: every dimension must be >= 1");
  }
  if (cfg.method != Method::dnsnmf && cfg.dims.size() != 1) {
    throw ParameterError("config: " + method_name(cfg.method) + " requires exactly one layer");
  }
  if (cfg.method == Method::nmf) {
    for (double t : cfg.thetas) {
      if (t != 0.0) throw ParameterError("config: nmf does not take a smoothing theta");
    }
  }
  if (cfg.thetas.size() > 1 && cfg.thetas.size() != cfg.dims.size()) {
    throw ParameterError("config: need one theta, or one per layer");
  }
  for (double t : cfg.thetas) {
    if (!(t >= 0.0 && t <= 1.0)) throw ParameterError("config: theta must lie in [0, 1]");
  }
  if (cfg.kmeans.k < 0) throw ParameterError("config: kmeans k must be >= 0");
  if (cfg.kmeans.restarts < 1) throw ParameterError("config: kmeans restarts must be >= 1");
}

std::vector<double> layer_thetas(const ExperimentConfig& cfg) {
  const std::size_t m = cfg.dims.size();
  if (cfg.thetas.empty()) return std::vector<double>(m, 0.0);
  if (cfg.thetas.size() == 1) return std::vector<double>(m, cfg.thetas[0]);
  return cfg.thetas;
}

namespace {

template <typename Fn>
auto stage(const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (const ParameterError& e) {
    throw ParameterError(std::string(name) + ": " + e.what());
  } catch (const DimensionError& e) {
    throw DimensionError(std::string(name) + ": " + e.what());
  } catch (const DomainError& e) {
    throw DomainError(std::string(name) + ": " + e.what());
  } catch (const DataFormatError& e) {
    throw DataFormatError(std::string(name) + ": " + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError(std::string(name) + ": " + e.what(), e.iteration());
  }
}

void echo_config(KeyValueReport& kv, const ExperimentConfig& cfg, const std::vector<double>& thetas,
                 index_t k, bool has_labels) {
  kv.add("method", method_name(cfg.method));
  kv.add("seed", static_cast<std::int64_t>(cfg.seed));
  std::string dims;
  for (std::size_t i = 0; i < cfg.dims.size(); ++i) {
    if (i > 0) dims += ',';
    dims += std::to_string(cfg.dims[i]);
  }
  kv.add("dims", dims);
  std::string ths;
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    if (i > 0) ths += ',';
    ths += format_real(thetas[i]);
  }
  kv.add("theta", ths);
  kv.add("init", cfg.pretrain.init == InitKind::nndsvd ? "nndsvd" : "random");
  kv.add("pretrain.tol", cfg.pretrain.tol);
  kv.add("pretrain.max_iter", static_cast<std::int64_t>(cfg.pretrain.max_iter));
  if (cfg.method == Method::dnsnmf) {
    kv.add("finetune.outer_tol", cfg.finetune.outer_tol);
    kv.add("finetune.max_sweeps", static_cast<std::int64_t>(cfg.finetune.max_sweeps));
    kv.add("finetune.inner_tol", cfg.finetune.inner_tol);
    kv.add("finetune.max_inner_iter", static_cast<std::int64_t>(cfg.finetune.max_inner_iter));
  }
  kv.add("kmeans.k", static_cast<std::int64_t>(k));
  kv.add("kmeans.restarts", static_cast<std::int64_t>(cfg.kmeans.restarts));
  kv.add("labels_present", static_cast<std::int64_t>(has_labels ? 1 : 0));
}

double guarded_sparseness(const DenseMatrix& m) {
  return m.rows() >= 2 ? hoyer_sparseness(m) : 0.0;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  stage("configure", [&] { validate_config(cfg); return 0; });

  const DatasetBundle data = stage("load", [&] { return load_dataset(cfg.dataset); });
  const std::vector<double> thetas = layer_thetas(cfg);

  ExperimentResult out;
  out.has_labels = data.labels.has_value();

  stage("factorize", [&] {
    SolverConfig pre = cfg.pretrain;
    pre.seed = derive_seed(cfg.seed, 0x707265u);
    if (cfg.method == Method::dnsnmf) {
      SolverConfig fine = cfg.finetune;
      fine.seed = derive_seed(cfg.seed, 0x66696eu);
      FinetuneResult ft = finetune(data.x, pretrain(data.x, cfg.dims, thetas, pre), fine);
      out.stack = std::move(ft.stack);
      out.objective_trace.push_back(ft.initial_objective);
      for (const SweepReport& s : ft.sweeps) out.objective_trace.push_back(s.objective);
      out.sweep_log = std::move(ft.sweeps);
    } else {
      ShallowFactorization f = cfg.method == Method::nmf
                                   ? mu_nmf(data.x, cfg.dims[0], pre)
                                   : nsnmf(data.x, cfg.dims[0], thetas[0], pre);
      out.stack.z.push_back(std::move(f.z));
      out.stack.smoothing.push_back(
          f.smoothing.value_or(SmoothingSpec{0.0, cfg.dims[0]}));
      out.stack.h_top = std::move(f.h);
      out.objective_trace = std::move(f.objective_trace);
    }
    return 0;
  });

  index_t k = cfg.kmeans.k;
  if (k == 0) {
    if (out.has_labels) {
      int hi = 0;
      for (int v : *data.labels) hi = std::max(hi, v);
      k = hi + 1;
    } else {
      k = cfg.dims.back();
    }
  }
  out.kmeans_k = k;

  stage("cluster", [&] {
    out.clusters = kmeans(out.stack.h_top, k, cfg.kmeans.restarts,
                          derive_seed(cfg.seed, 0x6b6d0000u + cfg.kmeans.seed));
    return 0;
  });

  stage("metrics", [&] {
    out.report.kmeans_objective = out.clusters.objective;
    out.report.restarts_used = out.clusters.restarts_used;
    for (const DenseMatrix& z : out.stack.z) {
      out.report.sparseness_z.push_back(guarded_sparseness(z));
    }
    out.report.sparseness_h = guarded_sparseness(out.stack.h_top);
    if (out.has_labels) {
      out.report.accuracy = accuracy(out.clusters.labels, *data.labels);
      out.report.nmi = nmi(out.clusters.labels, *data.labels);
    }
    return 0;
  });

  if (!cfg.output_dir.empty()) {
    namespace fs = std::filesystem;
    const std::string checkpoint_path = cfg.output_dir + "/checkpoint.bin";
    const std::string report_path = cfg.output_dir + "/report.txt";
    try {
      stage("write", [&] {
        std::error_code ec;
        fs::create_directories(cfg.output_dir, ec);
        if (ec) throw DataFormatError(cfg.output_dir + ": cannot create directory");

        save_checkpoint(checkpoint_path, Checkpoint{cfg.seed, out.stack, out.sweep_log});

        KeyValueReport kv;
        echo_config(kv, cfg, thetas, k, out.has_labels);
        if (out.has_labels) {
          kv.add("accuracy", out.report.accuracy);
          kv.add("nmi", out.report.nmi);
        }
        kv.add("kmeans_objective", out.report.kmeans_objective);
        kv.add("kmeans_restarts", static_cast<std::int64_t>(out.report.restarts_used));
        for (std::size_t i = 0; i < out.report.sparseness_z.size(); ++i) {
          kv.add("sparseness_z." + std::to_string(i + 1), out.report.sparseness_z[i]);
        }
        kv.add("sparseness_h", out.report.sparseness_h);
        append_trace(kv, out.objective_trace);
        kv.write(report_path);
        return 0;
      });
    } catch (...) {
      std::error_code ec;
      fs::remove(checkpoint_path, ec);
      fs::remove(report_path, ec);
      throw;
    }
    out.checkpoint_path = checkpoint_path;
    out.report_path = report_path;
  }
  return out;
}

}  // namespace dnsnmf

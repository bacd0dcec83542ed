#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "dnsnmf/checkpoint.hpp"
#include "dnsnmf/dataset.hpp"
#include "dnsnmf/error.hpp"
#include "dnsnmf/experiment.hpp"
#include "dnsnmf/synthetic.hpp"

using namespace dnsnmf;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("dnsnmf_exp_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

std::string read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(DNSNMF_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

ExperimentConfig synthetic_config(Method method, std::vector<index_t> dims,
                                  std::vector<double> thetas) {
  ExperimentConfig cfg;
  cfg.method = method;
  cfg.dims = std::move(dims);
  cfg.thetas = std::move(thetas);
  cfg.dataset.kind = DatasetKind::synthetic;
  cfg.dataset.synthetic = SyntheticSpec{};
  return cfg;
}

void check_trace(const std::vector<double>& trace) {
  REQUIRE(trace.size() >= 2);
  for (std::size_t i = 1; i < trace.size(); ++i) {
    CHECK(trace[i] <= trace[i - 1] * (1.0 + 1e-9) + 1e-15);
  }
}

}  // namespace

TEST_CASE("method parsing") {
  for (Method m : {Method::nmf, Method::nsnmf, Method::dnsnmf}) {
    CHECK(parse_method(method_name(m)) == m);
  }
  CHECK_THROWS_AS(parse_method("pca"), ParameterError);
}

TEST_CASE("validate_config") {
  ExperimentConfig cfg = synthetic_config(Method::dnsnmf, {8, 4}, {0.3});
  validate_config(cfg);  // must not throw

  ExperimentConfig bad = cfg;
  bad.dims = {};
  CHECK_THROWS_AS(validate_config(bad), ParameterError);

  bad = cfg;
  bad.dims = {8, 0};
  CHECK_THROWS_AS(validate_config(bad), ParameterError);

  bad = cfg;
  bad.method = Method::nmf;
  CHECK_THROWS_AS(validate_config(bad), ParameterError);  // two layers

  bad = synthetic_config(Method::nmf, {4}, {0.3});
  CHECK_THROWS_AS(validate_config(bad), ParameterError);  // nmf with theta

  bad = cfg;
  bad.thetas = {0.3, 0.3, 0.3};
  CHECK_THROWS_AS(validate_config(bad), ParameterError);

  bad = cfg;
  bad.thetas = {1.5};
  CHECK_THROWS_AS(validate_config(bad), ParameterError);

  bad = cfg;
  bad.kmeans.restarts = 0;
  CHECK_THROWS_AS(validate_config(bad), ParameterError);
}

TEST_CASE("layer_thetas broadcasting") {
  ExperimentConfig cfg = synthetic_config(Method::dnsnmf, {8, 4}, {0.3});
  CHECK(layer_thetas(cfg) == std::vector<double>({0.3, 0.3}));

  cfg.thetas = {0.2, 0.6};
  CHECK(layer_thetas(cfg) == std::vector<double>({0.2, 0.6}));

  cfg.thetas = {};
  CHECK(layer_thetas(cfg) == std::vector<double>({0.0, 0.0}));
}

TEST_CASE("shallow experiment recovers the planted clusters") {
  ExperimentConfig cfg = synthetic_config(Method::nmf, {4}, {});
  ExperimentResult res = run_experiment(cfg);

  CHECK(res.has_labels);
  CHECK(res.kmeans_k == 4);
  CHECK(res.report.accuracy == doctest::Approx(1.0));
  CHECK(res.report.nmi == doctest::Approx(1.0));
  CHECK(res.report.sparseness_z.size() == 1);
  CHECK(res.sweep_log.empty());
  check_trace(res.objective_trace);
  CHECK(res.report_path.empty());
  CHECK(res.checkpoint_path.empty());
}

TEST_CASE("deep experiment is deterministic across reruns") {
  TempDir a, b;
  ExperimentConfig cfg = synthetic_config(Method::dnsnmf, {8, 4}, {0.3});
  cfg.seed = 7;
  cfg.output_dir = a.path.string();
  ExperimentResult first = run_experiment(cfg);

  check_trace(first.objective_trace);
  CHECK(first.report.accuracy >= 0.0);
  CHECK(first.report.accuracy <= 1.0);
  CHECK(first.report.nmi >= 0.0);
  CHECK(first.report.nmi <= 1.0);
  CHECK(first.sweep_log.size() + 1 == first.objective_trace.size());
  CHECK(first.stack.layers() == 2);
  REQUIRE(fs::exists(first.checkpoint_path));
  REQUIRE(fs::exists(first.report_path));

  Checkpoint cp = load_checkpoint(first.checkpoint_path);
  CHECK(cp.stack.h_top == first.stack.h_top);
  CHECK(cp.seed == cfg.seed);
  CHECK(cp.sweeps.size() == first.sweep_log.size());

  cfg.output_dir = b.path.string();
  run_experiment(cfg);
  CHECK(read_bytes(a.file("report.txt")) == read_bytes(b.file("report.txt")));
  CHECK(read_bytes(a.file("checkpoint.bin")) == read_bytes(b.file("checkpoint.bin")));
}

TEST_CASE("experiment without labels") {
  TempDir dir;
  SyntheticData data = generate_synthetic(SyntheticSpec{});
  save_csv_matrix(dir.file("x.csv"), data.x);

  ExperimentConfig cfg;
  cfg.method = Method::nsnmf;
  cfg.dims = {4};
  cfg.thetas = {0.3};
  cfg.dataset.kind = DatasetKind::csv;
  cfg.dataset.data_path = dir.file("x.csv");
  cfg.output_dir = dir.file("out");
  ExperimentResult res = run_experiment(cfg);

  CHECK_FALSE(res.has_labels);
  CHECK(res.kmeans_k == 4);  // falls back to the top dimension
  const std::string report = read_bytes(res.report_path);
  CHECK(report.find("labels_present = 0\n") != std::string::npos);
  CHECK(report.find("accuracy = ") == std::string::npos);
  CHECK(report.find("kmeans_objective = ") != std::string::npos);
  CHECK(report.find("objective_trace.length = ") != std::string::npos);
}

TEST_CASE("failed experiments remove partial outputs and name the stage") {
  TempDir dir;
  ExperimentConfig cfg;
  cfg.method = Method::nmf;
  cfg.dims = {4};
  cfg.dataset.kind = DatasetKind::csv;
  cfg.dataset.data_path = dir.file("missing.csv");
  cfg.output_dir = dir.file("out");

  try {
    run_experiment(cfg);
    FAIL("expected DataFormatError");
  } catch (const DataFormatError& e) {
    CHECK(std::string(e.what()).find("load:") != std::string::npos);
  }
  CHECK_FALSE(fs::exists(dir.file("out/report.txt")));
  CHECK_FALSE(fs::exists(dir.file("out/checkpoint.bin")));
}

TEST_CASE("CLI exit codes") {
  TempDir dir;

  SUBCASE("success paths") {
    CHECK(run_cli("factorize --synthetic --method nmf --dims 4 --out " + dir.file("run")) == 0);
    CHECK(run_cli("synth --out " + dir.file("data")) == 0);
    CHECK(run_cli("factorize --csv " + dir.file("data/x.csv") + " --labels " +
                  dir.file("data/labels.txt") + " --method dnsnmf --dims 8,4 --theta 0.3" +
                  " --max-sweeps 10 --out " + dir.file("deep")) == 0);
    CHECK(run_cli("evaluate --checkpoint " + dir.file("deep/checkpoint.bin") + " --csv " +
                  dir.file("data/x.csv") + " --labels " + dir.file("data/labels.txt")) == 0);
    CHECK(run_cli("export-features --checkpoint " + dir.file("deep/checkpoint.bin") +
                  " --height 4 --width 5 --out " + dir.file("w.pgm")) == 0);
  }

  SUBCASE("usage and configuration errors exit 1") {
    CHECK(run_cli("factorize --synthetic --method pca --dims 4") == 1);
    CHECK(run_cli("factorize --synthetic --method nmf --dims 4 --no-such-flag") == 1);
    CHECK(run_cli("factorize --method nmf --dims 4") == 1);  // no dataset selected
    CHECK(run_cli("") == 1);                                 // missing subcommand
  }

  SUBCASE("data errors exit 2") {
    CHECK(run_cli("factorize --csv " + dir.file("absent.csv") + " --method nmf --dims 4") == 2);
    CHECK(run_cli("evaluate --checkpoint " + dir.file("absent.bin") + " --synthetic") == 2);
  }

  SUBCASE("evaluate without labels exits 1") {
    REQUIRE(run_cli("synth --out " + dir.file("d")) == 0);
    REQUIRE(run_cli("factorize --csv " + dir.file("d/x.csv") +
                    " --method nsnmf --dims 4 --theta 0.3 --out " + dir.file("r")) == 0);
    CHECK(run_cli("evaluate --checkpoint " + dir.file("r/checkpoint.bin") + " --csv " +
                  dir.file("d/x.csv")) == 1);
  }

  SUBCASE("numerical failures exit 3") {
    std::ofstream out(dir.file("huge.csv"));
    out << "1e308,1e308\n1e308,1e308\n";
    out.close();
    CHECK(run_cli("factorize --csv " + dir.file("huge.csv") +
                  " --method nmf --dims 1 --init random") == 3);
  }
}

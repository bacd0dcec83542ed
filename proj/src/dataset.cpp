#include "dnsnmf/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "dnsnmf/image_io.hpp"

namespace dnsnmf {

namespace {

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataFormatError(path + ": cannot open");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  // Trailing blank lines are tolerated; interior ones are not.
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

double parse_real(const std::string& token, const std::string& path, std::size_t lineno) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end == begin || end != begin + token.size()) {
    throw DataFormatError(path + ":" + std::to_string(lineno) + ": bad number '" + token + "'");
  }
  if (!std::isfinite(value)) {
    throw DataFormatError(path + ":" + std::to_string(lineno) + ": non-finite value");
  }
  return value;
}

}  // namespace

DenseMatrix load_csv_matrix(const std::string& path) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) throw DataFormatError(path + ": empty CSV");

  std::vector<double> values;
  index_t cols = -1;
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const std::string& line = lines[li];
    if (line.empty()) throw DataFormatError(path + ":" + std::to_string(li + 1) + ": empty row");
    index_t row_cols = 0;
    std::size_t pos = 0;
    while (true) {
      const std::size_t comma = line.find(',', pos);
      const std::string token = line.substr(pos, comma == std::string::npos ? std::string::npos
                                                                            : comma - pos);
      const double v = parse_real(token, path, li + 1);
      if (v < 0.0) {
        throw DomainError(path + ":" + std::to_string(li + 1) + ": negative value " + token);
      }
      values.push_back(v);
      ++row_cols;
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (cols < 0) {
      cols = row_cols;
    } else if (row_cols != cols) {
      throw DataFormatError(path + ":" + std::to_string(li + 1) + ": expected " +
                            std::to_string(cols) + " fields, got " + std::to_string(row_cols));
    }
  }
  return DenseMatrix(static_cast<index_t>(lines.size()), cols, std::move(values));
}

void save_csv_matrix(const std::string& path, const DenseMatrix& m) {
  if (m.empty()) throw ParameterError("save_csv_matrix: empty matrix");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataFormatError(path + ": cannot open for writing");
  char buf[32];
  for (index_t i = 0; i < m.rows(); ++i) {
    for (index_t j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      if (j > 0) out << ',';
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw DataFormatError(path + ": write failed");
}

LabelVector load_labels(const std::string& path) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) throw DataFormatError(path + ": empty label file");
  LabelVector labels;
  labels.reserve(lines.size());
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const std::string& line = lines[li];
    const char* begin = line.c_str();
    char* end = nullptr;
    const long v = std::strtol(begin, &end, 10);
    if (end == begin || end != begin + line.size() || v < 0 || v > 1'000'000) {
      throw DataFormatError(path + ":" + std::to_string(li + 1) + ": bad label '" + line + "'");
    }
    labels.push_back(static_cast<int>(v));
  }
  return labels;
}

void save_labels(const std::string& path, const LabelVector& labels) {
  if (labels.empty()) throw ParameterError("save_labels: empty label vector");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataFormatError(path + ": cannot open for writing");
  for (int v : labels) out << v << '\n';
  if (!out) throw DataFormatError(path + ": write failed");
}

DatasetBundle load_dataset(const DatasetSource& source) {
  DatasetBundle bundle;
  switch (source.kind) {
    case DatasetKind::csv: {
      bundle.x = load_csv_matrix(source.data_path);
      break;
    }
    case DatasetKind::pgm_directory: {
      ImageMatrix m = load_pgm_directory(source.data_path);
      bundle.x = std::move(m.x);
      bundle.image_shape = ImageShape{m.height, m.width};
      break;
    }
    case DatasetKind::synthetic: {
      SyntheticData data = generate_synthetic(source.synthetic);
      bundle.x = std::move(data.x);
      bundle.labels = std::move(data.labels);
      break;
    }
  }
  if (!source.labels_path.empty()) bundle.labels = load_labels(source.labels_path);
  if (bundle.labels && static_cast<index_t>(bundle.labels->size()) != bundle.x.cols()) {
    throw DataFormatError("load_dataset: " + std::to_string(bundle.labels->size()) +
                          " labels for " + std::to_string(bundle.x.cols()) + " samples");
  }
  return bundle;
}

}  // namespace dnsnmf

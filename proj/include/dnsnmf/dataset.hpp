#pragma once

#include <optional>
#include <string>

#include "dnsnmf/clustering.hpp"
#include "dnsnmf/dense_matrix.hpp"
#include "dnsnmf/synthetic.hpp"

namespace dnsnmf {

enum class DatasetKind {
  csv,            ///< CSV matrix file, optional label file
  pgm_directory,  ///< directory of same-sized binary PGM images, optional label file
  synthetic,      ///< built-in seeded generator
};

struct DatasetSource {
  DatasetKind kind = DatasetKind::csv;
  std::string data_path;    ///< CSV file or PGM directory
  std::string labels_path;  ///< empty = no labels
  SyntheticSpec synthetic;  ///< used when kind == synthetic
};

struct ImageShape {
  index_t height = 0;
  index_t width = 0;
};

/// A loaded dataset: columns of x are samples. labels (when present) give the
/// ground-truth cluster of each column; image_shape is set for image data so
/// features can be rendered back as tiles.
struct DatasetBundle {
  DenseMatrix x;
  std::optional<LabelVector> labels;
  std::optional<ImageShape> image_shape;
};

/// Comma-separated nonnegative reals, no header, rows = features. Ragged
/// rows or unparsable fields raise DataFormatError; negative values raise
/// DomainError.
DenseMatrix load_csv_matrix(const std::string& path);

/// Writes CSV with enough digits (%.17g) that a reload is exact.
void save_csv_matrix(const std::string& path, const DenseMatrix& m);

/// One nonnegative integer per line.
LabelVector load_labels(const std::string& path);
void save_labels(const std::string& path, const LabelVector& labels);

DatasetBundle load_dataset(const DatasetSource& source);

}  // namespace dnsnmf

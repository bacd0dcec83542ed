#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dnsnmf/dense_matrix.hpp"

namespace dnsnmf {

/// 8-bit grayscale image, row-major pixels.
struct GrayImage {
  index_t height = 0;
  index_t width = 0;
  int maxval = 255;
  std::vector<std::uint8_t> pixels;
};

/// Reads a binary PGM (P5) file with maxval <= 255. Header comments (#) are
/// accepted. Throws DataFormatError on anything malformed.
GrayImage read_pgm(const std::string& path);

/// Writes a binary PGM (P5). img.maxval must lie in [1, 255].
void write_pgm(const std::string& path, const GrayImage& img);

/// A directory of same-sized PGM images loaded as a data matrix: files are
/// taken in lexicographic filename order, each image is flattened
/// column-major into one column of x, and pixel values are scaled by the
/// file's maxval into [0, 1].
struct ImageMatrix {
  DenseMatrix x;
  index_t height = 0;
  index_t width = 0;
};

ImageMatrix load_pgm_directory(const std::string& dir);

}  // namespace dnsnmf

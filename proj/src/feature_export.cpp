#include "dnsnmf/feature_export.hpp"

#include <cmath>

namespace dnsnmf {

GrayImage render_feature_grid(const DenseMatrix& features, index_t tile_h, index_t tile_w) {
  if (tile_h < 1 || tile_w < 1) throw ParameterError("render_feature_grid: empty tile shape");
  if (features.rows() != tile_h * tile_w) {
    throw DimensionError("render_feature_grid: " + std::to_string(features.rows()) +
                         " feature rows cannot tile as " + std::to_string(tile_h) + "x" +
                         std::to_string(tile_w));
  }
  const index_t r = features.cols();
  const auto grid_cols = static_cast<index_t>(
      std::ceil(std::sqrt(static_cast<double>(r))));
  const index_t grid_rows = (r + grid_cols - 1) / grid_cols;

  GrayImage img;
  img.height = grid_rows * tile_h + (grid_rows - 1);
  img.width = grid_cols * tile_w + (grid_cols - 1);
  img.pixels.assign(static_cast<std::size_t>(img.height * img.width), 0);

  for (index_t c = 0; c < r; ++c) {
    double lo = features(0, c);
    double hi = lo;
    for (index_t i = 1; i < features.rows(); ++i) {
      lo = std::min(lo, features(i, c));
      hi = std::max(hi, features(i, c));
    }
    const double scale = hi > lo ? 255.0 / (hi - lo) : 0.0;
    const index_t top = (c / grid_cols) * (tile_h + 1);
    const index_t left = (c % grid_cols) * (tile_w + 1);
    for (index_t j = 0; j < tile_w; ++j) {
      for (index_t i = 0; i < tile_h; ++i) {
        const double v = (features(j * tile_h + i, c) - lo) * scale;
        img.pixels[static_cast<std::size_t>((top + i) * img.width + (left + j))] =
            static_cast<std::uint8_t>(std::floor(v + 0.5));
      }
    }
  }
  return img;
}

void export_feature_grid(const LayerStack& stack, index_t layer, index_t image_h, index_t image_w,
                         const std::string& path) {
  const DenseMatrix w = layer_features(stack, layer);
  write_pgm(path, render_feature_grid(w, image_h, image_w));
}

}  // namespace dnsnmf

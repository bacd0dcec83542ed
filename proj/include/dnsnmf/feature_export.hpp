#pragma once

#include <string>

#include "dnsnmf/deep_nsnmf.hpp"
#include "dnsnmf/image_io.hpp"

namespace dnsnmf {

/// Renders each column of `features` as a tile_h x tile_w grayscale tile
/// (column-major unflattening, matching the image loader) and lays the tiles
/// out in a near-square grid with 1-pixel black separators between tiles.
/// Every column is min-max scaled to 0..255 on its own; a constant column
/// (min = max) renders as black.
GrayImage render_feature_grid(const DenseMatrix& features, index_t tile_h, index_t tile_w);

/// Renders layer_features(stack, layer) with tiles of image_h x image_w and
/// writes a binary PGM. Requires image_h * image_w to equal the stack's data
/// dimension p.
void export_feature_grid(const LayerStack& stack, index_t layer, index_t image_h,
                         index_t image_w, const std::string& path);

}  // namespace dnsnmf

#pragma once

#include <utility>
#include <vector>

#include "ltfu/dataset.hpp"
#include "ltfu/tensor.hpp"

namespace ltfu {

/// Per-column (min, max) of observed training cells for continuous columns.
/// Columns with max == min map to constant 0 and invert back to min.
struct ScalerState {
  std::vector<std::uint8_t> scaled;  // 1 where the column is min-max scaled
  std::vector<double> mins;
  std::vector<double> maxs;
};

ScalerState fit_scaler(const Dataset& train, const MaskMatrix& mask);

/// Maps observed continuous cells to (x - min) / (max - min); cells outside
/// the training range are not clamped. Masked cells are left untouched.
Dataset apply_scaler(const ScalerState& state, const Dataset& ds);
Dataset invert_scaler(const ScalerState& state, const Dataset& ds);

double scale_cell(const ScalerState& state, std::size_t col, double v);
double unscale_cell(const ScalerState& state, std::size_t col, double v);

/// Wide-layout map: each categorical column expands to a contiguous indicator
/// block, everything else keeps one column.
struct EncodingMap {
  std::vector<std::size_t> offset;  // per schema column, start in wide layout
  std::vector<std::size_t> width;   // 1 or the categorical cardinality
  std::size_t total_width = 0;
};

EncodingMap build_encoding(const Schema& schema);

/// A missing categorical cell yields a fully masked all-zero block.
std::pair<Tensor2, MaskMatrix> onehot_encode(const Dataset& ds, const MaskMatrix& mask,
                                             const EncodingMap& map);

/// Inverse of onehot_encode on the value side; categorical blocks decode by
/// argmax with ties broken toward the lowest category index.
Dataset onehot_decode(const Tensor2& wide, const EncodingMap& map, const Schema& schema);

}  // namespace ltfu

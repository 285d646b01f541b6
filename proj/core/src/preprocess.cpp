#include "ltfu/preprocess.hpp"

#include <limits>
#include <stdexcept>

namespace ltfu {

ScalerState fit_scaler(const Dataset& train, const MaskMatrix& mask) {
  require_aligned(train, mask);
  ScalerState st;
  st.scaled.assign(train.n_cols, 0);
  st.mins.assign(train.n_cols, 0.0);
  st.maxs.assign(train.n_cols, 0.0);
  for (std::size_t c = 0; c < train.n_cols; ++c) {
    if (train.schema[c].kind != ColumnKind::continuous) continue;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < train.n_rows; ++r) {
      if (mask.at(r, c)) continue;
      const double v = train.at(r, c);
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
    if (lo > hi) continue;  // no observed cells; leave column unscaled
    st.scaled[c] = 1;
    st.mins[c] = lo;
    st.maxs[c] = hi;
  }
  return st;
}

double scale_cell(const ScalerState& state, std::size_t col, double v) {
  if (!state.scaled[col]) return v;
  const double range = state.maxs[col] - state.mins[col];
  if (range == 0.0) return 0.0;
  return (v - state.mins[col]) / range;
}

double unscale_cell(const ScalerState& state, std::size_t col, double v) {
  if (!state.scaled[col]) return v;
  const double range = state.maxs[col] - state.mins[col];
  if (range == 0.0) return state.mins[col];
  return v * range + state.mins[col];
}

namespace {
Dataset map_cells(const ScalerState& state, const Dataset& ds,
                  double (*f)(const ScalerState&, std::size_t, double)) {
  if (state.scaled.size() != ds.n_cols)
    throw std::invalid_argument("scaler: fitted width does not match dataset");
  Dataset out = ds;
  for (std::size_t c = 0; c < ds.n_cols; ++c) {
    if (!state.scaled[c]) continue;
    for (std::size_t r = 0; r < ds.n_rows; ++r) out.at(r, c) = f(state, c, ds.at(r, c));
  }
  return out;
}
}  // namespace

Dataset apply_scaler(const ScalerState& state, const Dataset& ds) {
  return map_cells(state, ds, &scale_cell);
}

Dataset invert_scaler(const ScalerState& state, const Dataset& ds) {
  return map_cells(state, ds, &unscale_cell);
}

EncodingMap build_encoding(const Schema& schema) {
  EncodingMap map;
  map.offset.resize(schema.size());
  map.width.resize(schema.size());
  std::size_t at = 0;
  for (std::size_t c = 0; c < schema.size(); ++c) {
    map.offset[c] = at;
    map.width[c] =
        schema[c].kind == ColumnKind::categorical ? static_cast<std::size_t>(schema[c].cardinality) : 1;
    at += map.width[c];
  }
  map.total_width = at;
  return map;
}

std::pair<Tensor2, MaskMatrix> onehot_encode(const Dataset& ds, const MaskMatrix& mask,
                                             const EncodingMap& map) {
  require_aligned(ds, mask);
  if (map.offset.size() != ds.n_cols)
    throw std::invalid_argument("onehot: encoding map width does not match dataset");
  Tensor2 wide(ds.n_rows, map.total_width);
  MaskMatrix wide_mask(ds.n_rows, map.total_width);
  for (std::size_t r = 0; r < ds.n_rows; ++r) {
    for (std::size_t c = 0; c < ds.n_cols; ++c) {
      const std::size_t off = map.offset[c];
      const std::size_t w = map.width[c];
      const bool missing = mask.at(r, c);
      if (w == 1) {
        wide.at(r, off) = missing ? 0.0 : ds.at(r, c);
        wide_mask.set(r, off, missing);
      } else {
        for (std::size_t k = 0; k < w; ++k) wide_mask.set(r, off + k, missing);
        if (!missing) {
          const auto code = static_cast<std::size_t>(ds.at(r, c));
          wide.at(r, off + code) = 1.0;
        }
      }
    }
  }
  return {std::move(wide), std::move(wide_mask)};
}

Dataset onehot_decode(const Tensor2& wide, const EncodingMap& map, const Schema& schema) {
  if (map.total_width != wide.cols)
    throw std::invalid_argument("onehot: wide matrix width does not match encoding map");
  Dataset out(schema, wide.rows);
  for (std::size_t r = 0; r < wide.rows; ++r) {
    for (std::size_t c = 0; c < schema.size(); ++c) {
      const std::size_t off = map.offset[c];
      const std::size_t w = map.width[c];
      if (w == 1) {
        out.at(r, c) = wide.at(r, off);
      } else {
        std::size_t best = 0;
        for (std::size_t k = 1; k < w; ++k)
          if (wide.at(r, off + k) > wide.at(r, off + best)) best = k;
        out.at(r, c) = static_cast<double>(best);
      }
    }
  }
  return out;
}

}  // namespace ltfu

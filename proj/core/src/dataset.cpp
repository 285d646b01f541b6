#include "ltfu/dataset.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ltfu {

void validate_schema(const Schema& schema) {
  if (schema.empty()) throw std::invalid_argument("schema: empty");
  std::size_t n_outcome = 0, n_time = 0, n_patient = 0;
  for (const auto& col : schema) {
    if (col.name.empty()) throw std::invalid_argument("schema: unnamed column");
    switch (col.role) {
      case ColumnRole::outcome: ++n_outcome; break;
      case ColumnRole::time_to_outcome: ++n_time; break;
      case ColumnRole::patient_id: ++n_patient; break;
      case ColumnRole::feature: break;
    }
    if (col.kind == ColumnKind::categorical && col.cardinality < 1)
      throw std::invalid_argument("schema: categorical column '" + col.name +
                                  "' needs cardinality >= 1");
  }
  if (n_outcome != 1)
    throw std::invalid_argument("schema: expected exactly one outcome column, got " +
                                std::to_string(n_outcome));
  if (n_time != 1)
    throw std::invalid_argument("schema: expected exactly one time-to-outcome column, got " +
                                std::to_string(n_time));
  if (n_patient > 1)
    throw std::invalid_argument("schema: more than one patient-id column");
}

namespace {
std::size_t find_role(const Schema& schema, ColumnRole role) {
  for (std::size_t i = 0; i < schema.size(); ++i)
    if (schema[i].role == role) return i;
  return npos;
}
}  // namespace

std::size_t outcome_index(const Schema& schema) {
  const std::size_t i = find_role(schema, ColumnRole::outcome);
  if (i == npos) throw std::invalid_argument("schema: no outcome column");
  return i;
}

std::size_t time_index(const Schema& schema) {
  const std::size_t i = find_role(schema, ColumnRole::time_to_outcome);
  if (i == npos) throw std::invalid_argument("schema: no time-to-outcome column");
  return i;
}

std::size_t patient_index(const Schema& schema) {
  return find_role(schema, ColumnRole::patient_id);
}

bool MaskMatrix::any() const {
  for (auto b : bits)
    if (b) return true;
  return false;
}

std::size_t MaskMatrix::count() const {
  std::size_t n = 0;
  for (auto b : bits) n += b != 0;
  return n;
}

Dataset::Dataset(Schema s, std::size_t rows)
    : schema(std::move(s)), n_rows(rows), n_cols(schema.size()),
      values(rows * schema.size(), 0.0) {
  validate_schema(schema);
}

void validate_dataset(const Dataset& ds, const MaskMatrix* mask) {
  if (ds.values.size() != ds.n_rows * ds.n_cols)
    throw std::invalid_argument("dataset: value buffer does not match shape");
  if (ds.schema.size() != ds.n_cols)
    throw std::invalid_argument("dataset: schema width does not match column count");
  if (mask) require_aligned(ds, *mask);

  for (std::size_t c = 0; c < ds.n_cols; ++c) {
    const auto& col = ds.schema[c];
    if (col.kind == ColumnKind::continuous) continue;
    for (std::size_t r = 0; r < ds.n_rows; ++r) {
      if (mask && mask->at(r, c)) continue;
      const double v = ds.at(r, c);
      if (col.kind == ColumnKind::binary) {
        if (v != 0.0 && v != 1.0)
          throw std::invalid_argument("dataset: binary column '" + col.name +
                                      "' has non {0,1} value at row " + std::to_string(r) +
                                      ", column " + std::to_string(c));
      } else {
        if (v != std::floor(v) || v < 0.0 || v >= static_cast<double>(col.cardinality))
          throw std::invalid_argument("dataset: categorical column '" + col.name +
                                      "' has out-of-range code at row " + std::to_string(r) +
                                      ", column " + std::to_string(c));
      }
    }
  }
}

void require_aligned(const Dataset& ds, const MaskMatrix& mask) {
  if (ds.n_rows != mask.n_rows || ds.n_cols != mask.n_cols)
    throw std::invalid_argument("mask shape does not match dataset shape");
}

}  // namespace ltfu

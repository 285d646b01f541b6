#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace ltfu {

enum class ColumnKind { continuous, binary, categorical };
enum class ColumnRole { feature, outcome, time_to_outcome, patient_id };

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::continuous;
  ColumnRole role = ColumnRole::feature;
  int cardinality = 0;  // categorical columns only; codes live in [0, cardinality)
};

using Schema = std::vector<ColumnSpec>;

/// Throws unless the schema has exactly one outcome column and exactly one
/// time-to-outcome column, and categorical cardinalities are positive.
void validate_schema(const Schema& schema);

std::size_t outcome_index(const Schema& schema);
std::size_t time_index(const Schema& schema);
/// Index of the patient-id column, or npos when absent.
std::size_t patient_index(const Schema& schema);

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

/// Per-cell missingness indicator; true means the cell is unobserved.
struct MaskMatrix {
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  std::vector<std::uint8_t> bits;

  MaskMatrix() = default;
  MaskMatrix(std::size_t r, std::size_t c) : n_rows(r), n_cols(c), bits(r * c, 0) {}

  bool at(std::size_t r, std::size_t c) const { return bits[r * n_cols + c] != 0; }
  void set(std::size_t r, std::size_t c, bool v) { bits[r * n_cols + c] = v ? 1 : 0; }
  bool any() const;
  std::size_t count() const;
};

/// Column-typed tabular matrix. Missingness is carried by a paired
/// MaskMatrix, never by sentinel values; by convention masked cells hold 0.
struct Dataset {
  Schema schema;
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  std::vector<double> values;  // row-major, n_rows x n_cols

  Dataset() = default;
  Dataset(Schema s, std::size_t rows);

  double& at(std::size_t r, std::size_t c) { return values[r * n_cols + c]; }
  double at(std::size_t r, std::size_t c) const { return values[r * n_cols + c]; }
};

/// Validates observed cells against the schema (binary cells in {0,1},
/// categorical codes in range). Pass nullptr to treat all cells as observed.
/// Throws with row/column coordinates on the first violation.
void validate_dataset(const Dataset& ds, const MaskMatrix* mask);

/// Shape equality between a dataset and its mask.
void require_aligned(const Dataset& ds, const MaskMatrix& mask);

/// Schema sidecar files: a JSON array of {name, kind, role[, cardinality]}.
Schema load_schema_json(const std::string& path);
void save_schema_json(const Schema& schema, const std::string& path);

}  // namespace ltfu

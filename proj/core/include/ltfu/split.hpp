#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ltfu/dataset.hpp"

namespace ltfu {

struct SplitIndices {
  std::vector<std::size_t> train;  // ascending row indices
  std::vector<std::size_t> test;
};

/// Seeded shuffle split. Row-level: floor(n_rows * train_fraction) rows go to
/// train. Patient-level: whole patients are shuffled and floor(n_patients *
/// train_fraction) patients (all their rows) go to train.
SplitIndices split_indices(const Dataset& ds, double train_fraction, std::uint64_t seed,
                           bool by_patient);

/// Row subset of a dataset and its mask, keeping the original row order.
std::pair<Dataset, MaskMatrix> take_rows(const Dataset& ds, const MaskMatrix& mask,
                                         const std::vector<std::size_t>& rows);

struct SplitResult {
  Dataset train;
  MaskMatrix train_mask;
  Dataset test;
  MaskMatrix test_mask;
  SplitIndices indices;
};

SplitResult split_train_test(const Dataset& ds, const MaskMatrix& mask,
                             double train_fraction, std::uint64_t seed,
                             bool by_patient = false);

}  // namespace ltfu

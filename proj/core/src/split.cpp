#include "ltfu/split.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ltfu/rng.hpp"

namespace ltfu {

namespace {

// Fisher-Yates, high index down, one uniform_int per swap.
template <typename T>
void seeded_shuffle(std::vector<T>& items, RngStream& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.uniform_int(i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace

SplitIndices split_indices(const Dataset& ds, double train_fraction, std::uint64_t seed,
                           bool by_patient) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw std::invalid_argument("split: train_fraction must be in (0, 1)");

  RngStream rng(seed);
  SplitIndices out;

  if (!by_patient) {
    std::vector<std::size_t> order(ds.n_rows);
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    seeded_shuffle(order, rng);
    const auto n_train =
        static_cast<std::size_t>(std::floor(static_cast<double>(ds.n_rows) * train_fraction));
    out.train.assign(order.begin(), order.begin() + n_train);
    out.test.assign(order.begin() + n_train, order.end());
  } else {
    const std::size_t pid_col = patient_index(ds.schema);
    if (pid_col == npos)
      throw std::invalid_argument("split: by_patient requires a patient-id column");

    // Distinct patients in first-appearance order, then shuffled.
    std::vector<double> patients;
    std::vector<std::size_t> patient_of_row(ds.n_rows);
    for (std::size_t r = 0; r < ds.n_rows; ++r) {
      const double id = ds.at(r, pid_col);
      auto it = std::find(patients.begin(), patients.end(), id);
      if (it == patients.end()) {
        patient_of_row[r] = patients.size();
        patients.push_back(id);
      } else {
        patient_of_row[r] = static_cast<std::size_t>(it - patients.begin());
      }
    }
    std::vector<std::size_t> order(patients.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    seeded_shuffle(order, rng);
    const auto n_train = static_cast<std::size_t>(
        std::floor(static_cast<double>(patients.size()) * train_fraction));
    std::vector<std::uint8_t> in_train(patients.size(), 0);
    for (std::size_t i = 0; i < n_train; ++i) in_train[order[i]] = 1;
    for (std::size_t r = 0; r < ds.n_rows; ++r)
      (in_train[patient_of_row[r]] ? out.train : out.test).push_back(r);
  }

  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

std::pair<Dataset, MaskMatrix> take_rows(const Dataset& ds, const MaskMatrix& mask,
                                         const std::vector<std::size_t>& rows) {
  require_aligned(ds, mask);
  Dataset out(ds.schema, rows.size());
  MaskMatrix out_mask(rows.size(), ds.n_cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t r = rows[i];
    if (r >= ds.n_rows) throw std::out_of_range("take_rows: row index out of range");
    std::copy(ds.values.begin() + r * ds.n_cols, ds.values.begin() + (r + 1) * ds.n_cols,
              out.values.begin() + i * ds.n_cols);
    std::copy(mask.bits.begin() + r * ds.n_cols, mask.bits.begin() + (r + 1) * ds.n_cols,
              out_mask.bits.begin() + i * ds.n_cols);
  }
  return {std::move(out), std::move(out_mask)};
}

SplitResult split_train_test(const Dataset& ds, const MaskMatrix& mask,
                             double train_fraction, std::uint64_t seed, bool by_patient) {
  require_aligned(ds, mask);
  SplitResult res;
  res.indices = split_indices(ds, train_fraction, seed, by_patient);
  auto tr = take_rows(ds, mask, res.indices.train);
  auto te = take_rows(ds, mask, res.indices.test);
  res.train = std::move(tr.first);
  res.train_mask = std::move(tr.second);
  res.test = std::move(te.first);
  res.test_mask = std::move(te.second);
  return res;
}

}  // namespace ltfu

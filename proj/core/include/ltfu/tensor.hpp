#pragma once

#include <cstddef>
#include <vector>

namespace ltfu {

/// Dense row-major matrix of doubles; the batch type of the network core.
struct Tensor2 {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Tensor2() = default;
  Tensor2(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  std::size_t size() const { return data.size(); }
  bool same_shape(const Tensor2& o) const { return rows == o.rows && cols == o.cols; }
};

/// c = a * b
Tensor2 matmul(const Tensor2& a, const Tensor2& b);
/// c = a^T * b
Tensor2 matmul_tn(const Tensor2& a, const Tensor2& b);
/// c = a * b^T
Tensor2 matmul_nt(const Tensor2& a, const Tensor2& b);

/// Adds a length-cols vector to every row in place.
void add_row_vector(Tensor2& a, const std::vector<double>& v);
/// Per-column sums, length cols.
std::vector<double> column_sums(const Tensor2& a);

/// True when every entry is finite.
bool all_finite(const Tensor2& a);

}  // namespace ltfu

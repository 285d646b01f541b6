#include "ltfu/tensor.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace ltfu {

namespace {

using EMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Map = Eigen::Map<EMat>;
using CMap = Eigen::Map<const EMat>;

CMap as_eigen(const Tensor2& t) {
  return CMap(t.data.data(), static_cast<Eigen::Index>(t.rows),
              static_cast<Eigen::Index>(t.cols));
}

Map as_eigen(Tensor2& t) {
  return Map(t.data.data(), static_cast<Eigen::Index>(t.rows),
             static_cast<Eigen::Index>(t.cols));
}

}  // namespace

Tensor2 matmul(const Tensor2& a, const Tensor2& b) {
  if (a.cols != b.rows) throw std::invalid_argument("matmul: inner dimensions differ");
  Tensor2 c(a.rows, b.cols);
  as_eigen(c).noalias() = as_eigen(a) * as_eigen(b);
  return c;
}

Tensor2 matmul_tn(const Tensor2& a, const Tensor2& b) {
  if (a.rows != b.rows) throw std::invalid_argument("matmul_tn: row counts differ");
  Tensor2 c(a.cols, b.cols);
  as_eigen(c).noalias() = as_eigen(a).transpose() * as_eigen(b);
  return c;
}

Tensor2 matmul_nt(const Tensor2& a, const Tensor2& b) {
  if (a.cols != b.cols) throw std::invalid_argument("matmul_nt: column counts differ");
  Tensor2 c(a.rows, b.rows);
  as_eigen(c).noalias() = as_eigen(a) * as_eigen(b).transpose();
  return c;
}

void add_row_vector(Tensor2& a, const std::vector<double>& v) {
  if (v.size() != a.cols) throw std::invalid_argument("add_row_vector: length mismatch");
  for (std::size_t r = 0; r < a.rows; ++r) {
    double* row = a.data.data() + r * a.cols;
    for (std::size_t c = 0; c < a.cols; ++c) row[c] += v[c];
  }
}

std::vector<double> column_sums(const Tensor2& a) {
  std::vector<double> s(a.cols, 0.0);
  for (std::size_t r = 0; r < a.rows; ++r) {
    const double* row = a.data.data() + r * a.cols;
    for (std::size_t c = 0; c < a.cols; ++c) s[c] += row[c];
  }
  return s;
}

bool all_finite(const Tensor2& a) {
  for (double x : a.data)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace ltfu

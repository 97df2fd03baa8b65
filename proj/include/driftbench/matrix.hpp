#pragma once

#include <cstddef>
#include <vector>

namespace driftbench::numerics {

// Dense row-major matrix of doubles. Deliberately minimal: the models here
// are tiny and reproducibility matters more than BLAS-grade speed.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  double* row(std::size_t i) { return data_.data() + i * cols_; }
  const double* row(std::size_t i) const { return data_.data() + i * cols_; }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool same_shape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix matmul(const Matrix& a, const Matrix& b);        // a(m,k) * b(k,n)
Matrix matmul_at_b(const Matrix& a, const Matrix& b);   // aT(k,m) * b(m,n)
Matrix matmul_a_bt(const Matrix& a, const Matrix& b);   // a(m,k) * bT(k,n)
Matrix transpose(const Matrix& a);

// aT*b written into an existing, correctly shaped matrix without touching
// its allocation (gradient buffers stay aliased by optimizer references).
void matmul_at_b_into(const Matrix& a, const Matrix& b, Matrix& out);

}  // namespace driftbench::numerics

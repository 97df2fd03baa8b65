#include "driftbench/matrix.hpp"
#include <algorithm>

#include "driftbench/errors.hpp"
#include "driftbench/kernels.hpp"

namespace driftbench::numerics {

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows())
    throw Error(Errc::dimension_mismatch, "matmul: inner dimensions differ");
  const auto& k = kernels::active();
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* ci = c.row(i);
    const double* ai = a.row(i);
    for (std::size_t p = 0; p < a.cols(); ++p) {
      k.axpy(ai[p], b.row(p), ci, b.cols());
    }
  }
  return c;
}

Matrix matmul_at_b(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows())
    throw Error(Errc::dimension_mismatch, "matmul_at_b: row counts differ");
  const auto& k = kernels::active();
  Matrix c(a.cols(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* ai = a.row(i);
    const double* bi = b.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) {
      k.axpy(ai[j], bi, c.row(j), b.cols());
    }
  }
  return c;
}

Matrix matmul_a_bt(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols())
    throw Error(Errc::dimension_mismatch, "matmul_a_bt: column counts differ");
  const auto& k = kernels::active();
  Matrix c(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.rows(); ++j) {
      c(i, j) = k.dot(a.row(i), b.row(j), a.cols());
    }
  }
  return c;
}

void matmul_at_b_into(const Matrix& a, const Matrix& b, Matrix& out) {
  if (a.rows() != b.rows())
    throw Error(Errc::dimension_mismatch, "matmul_at_b_into: row counts differ");
  if (out.rows() != a.cols() || out.cols() != b.cols())
    throw Error(Errc::dimension_mismatch, "matmul_at_b_into: output shape wrong");
  std::fill(out.data().begin(), out.data().end(), 0.0);
  const auto& k = kernels::active();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* ai = a.row(i);
    const double* bi = b.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) {
      k.axpy(ai[j], bi, out.row(j), b.cols());
    }
  }
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

}  // namespace driftbench::numerics

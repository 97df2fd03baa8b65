#include "driftbench/linalg.hpp"

#include <cmath>
#include <string>

#include "driftbench/errors.hpp"
#include "driftbench/kernels.hpp"

namespace driftbench::numerics {

Matrix cholesky(const Matrix& a) {
  if (a.rows() != a.cols())
    throw Error(Errc::dimension_mismatch, "cholesky: matrix must be square");
  const std::size_t n = a.rows();
  const auto& k = kernels::active();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const double pivot = a(j, j) - k.dot(l.row(j), l.row(j), j);
    if (!(pivot > 0.0) || !std::isfinite(pivot)) {
      throw Error(Errc::not_positive_definite,
                  "cholesky: non-positive pivot at index " + std::to_string(j));
    }
    const double ljj = std::sqrt(pivot);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      l(i, j) = (a(i, j) - k.dot(l.row(i), l.row(j), j)) / ljj;
    }
  }
  return l;
}

std::vector<double> forward_substitute(const Matrix& l, std::span<const double> b) {
  const std::size_t n = l.rows();
  if (l.cols() != n || b.size() != n)
    throw Error(Errc::dimension_mismatch, "forward_substitute: sizes disagree");
  const auto& k = kernels::active();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = (b[i] - k.dot(l.row(i), y.data(), i)) / l(i, i);
  }
  return y;
}

std::vector<double> back_substitute_transpose(const Matrix& l,
                                              std::span<const double> y) {
  const std::size_t n = l.rows();
  if (l.cols() != n || y.size() != n)
    throw Error(Errc::dimension_mismatch, "back_substitute_transpose: sizes disagree");
  std::vector<double> x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    double acc = y[ii];
    for (std::size_t j = ii + 1; j < n; ++j) acc -= l(j, ii) * x[j];
    x[ii] = acc / l(ii, ii);
  }
  return x;
}

std::vector<double> solve_spd(const Matrix& l, std::span<const double> b) {
  return back_substitute_transpose(l, forward_substitute(l, b));
}

}  // namespace driftbench::numerics

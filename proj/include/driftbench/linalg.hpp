#pragma once

#include <span>
#include <vector>

#include "driftbench/matrix.hpp"

namespace driftbench::numerics {

// Cholesky factor L (lower-triangular, L*LT = a) of a symmetric
// positive-definite matrix. Only the lower triangle of `a` is read, which
// absorbs symmetric inputs that differ by rounding noise. A non-positive
// pivot throws NotPositiveDefinite; callers that can tolerate it retry with
// diagonal jitter.
Matrix cholesky(const Matrix& a);

std::vector<double> forward_substitute(const Matrix& l, std::span<const double> b);

// Solves LT * x = y using the stored lower factor.
std::vector<double> back_substitute_transpose(const Matrix& l,
                                              std::span<const double> y);

// Solves (L*LT) * x = b.
std::vector<double> solve_spd(const Matrix& l, std::span<const double> b);

}  // namespace driftbench::numerics

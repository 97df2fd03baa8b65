#pragma once

#include <span>
#include <vector>

namespace driftbench::numerics {

double mean(std::span<const double> values);

// Population variance (divisor n). The n-1 convention is available as
// variance_unbiased for callers that want it.
double variance(std::span<const double> values);
double variance_unbiased(std::span<const double> values);

// Linear-interpolated percentile: sort ascending, index q/100*(n-1),
// interpolate between neighbors. q in [0, 100].
double percentile(std::span<const double> values, double q);

// Least-squares polynomial fit, coefficients ascending by degree in the
// original x units. Internally rescales x to [-1, 1] before forming the
// normal equations; a raw high-degree basis on day indices is too
// ill-conditioned to survive them.
std::vector<double> polyfit(std::span<const double> xs, std::span<const double> ys,
                            int degree);

double polyval(std::span<const double> coeffs, double x);

}  // namespace driftbench::numerics

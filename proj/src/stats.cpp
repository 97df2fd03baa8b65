#include "driftbench/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "driftbench/errors.hpp"
#include "driftbench/kernels.hpp"
#include "driftbench/linalg.hpp"
#include "driftbench/matrix.hpp"

namespace driftbench::numerics {

double mean(std::span<const double> values) {
  if (values.empty()) throw Error(Errc::empty_input, "mean of empty series");
  return kernels::active().sum(values.data(), values.size()) /
         static_cast<double>(values.size());
}

double variance(std::span<const double> values) {
  if (values.empty()) throw Error(Errc::empty_input, "variance of empty series");
  const double m = mean(values);
  double acc = 0.0;
  for (double v : values) {
    const double d = v - m;
    acc += d * d;
  }
  return acc / static_cast<double>(values.size());
}

double variance_unbiased(std::span<const double> values) {
  if (values.size() < 2)
    throw Error(Errc::empty_input, "unbiased variance needs at least two values");
  return variance(values) * static_cast<double>(values.size()) /
         static_cast<double>(values.size() - 1);
}

double percentile(std::span<const double> values, double q) {
  if (values.empty()) throw Error(Errc::empty_input, "percentile of empty series");
  if (!(q >= 0.0 && q <= 100.0))
    throw Error(Errc::out_of_range, "percentile q must lie in [0, 100]");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double index = q / 100.0 * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(index);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = index - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

namespace {

// Expands coefficients over t = scale*x + shift into coefficients over x.
std::vector<double> rebase_coefficients(std::span<const double> ct, double scale,
                                        double shift) {
  std::vector<double> out(ct.size(), 0.0);
  std::vector<double> base{1.0};  // (scale*x + shift)^k, ascending
  for (std::size_t k = 0; k < ct.size(); ++k) {
    for (std::size_t j = 0; j < base.size(); ++j) out[j] += ct[k] * base[j];
    if (k + 1 < ct.size()) {
      std::vector<double> next(base.size() + 1, 0.0);
      for (std::size_t j = 0; j < base.size(); ++j) {
        next[j] += shift * base[j];
        next[j + 1] += scale * base[j];
      }
      base = std::move(next);
    }
  }
  return out;
}

}  // namespace

std::vector<double> polyfit(std::span<const double> xs, std::span<const double> ys,
                            int degree) {
  if (degree < 0) throw Error(Errc::out_of_range, "polyfit degree must be >= 0");
  if (xs.size() != ys.size())
    throw Error(Errc::dimension_mismatch, "polyfit: xs and ys lengths differ");
  const std::size_t n = xs.size();
  const std::size_t terms = static_cast<std::size_t>(degree) + 1;
  if (n < terms)
    throw Error(Errc::insufficient_points,
                "polyfit needs at least degree+1 points");
  const auto [min_it, max_it] = std::minmax_element(xs.begin(), xs.end());
  const double xmin = *min_it, xmax = *max_it;
  if (xmin == xmax)
    throw Error(Errc::degenerate_design, "polyfit: all x values identical");

  const double scale = 2.0 / (xmax - xmin);
  const double shift = -(xmax + xmin) / (xmax - xmin);

  Matrix v(n, terms);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = scale * xs[i] + shift;
    double p = 1.0;
    for (std::size_t k = 0; k < terms; ++k) {
      v(i, k) = p;
      p *= t;
    }
  }

  Matrix gram = matmul_at_b(v, v);
  std::vector<double> rhs(terms, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < terms; ++k) rhs[k] += v(i, k) * ys[i];
  }

  Matrix l;
  try {
    l = cholesky(gram);
  } catch (const Error& e) {
    if (e.code() != Errc::not_positive_definite) throw;
    double trace = 0.0;
    for (std::size_t k = 0; k < terms; ++k) trace += gram(k, k);
    const double jitter = 1e-12 * trace / static_cast<double>(terms);
    for (std::size_t k = 0; k < terms; ++k) gram(k, k) += jitter;
    l = cholesky(gram);
  }
  const std::vector<double> ct = solve_spd(l, rhs);
  return rebase_coefficients(ct, scale, shift);
}

double polyval(std::span<const double> coeffs, double x) {
  double acc = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * x + coeffs[k];
  return acc;
}

}  // namespace driftbench::numerics

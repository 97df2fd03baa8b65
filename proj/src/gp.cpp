#include "driftbench/gp.hpp"

#include <cmath>

#include "driftbench/errors.hpp"
#include "driftbench/kernels.hpp"
#include "serial.hpp"

namespace driftbench::locmodels {

using numerics::Matrix;

void GpConfig::validate() const {
  if (!(kernel_variance > 0))
    throw Error(Errc::invalid_config, "kernel_variance must be positive");
  if (!(lengthscale > 0))
    throw Error(Errc::invalid_config, "lengthscale must be positive");
  if (!(noise_variance > 0))
    throw Error(Errc::invalid_config, "noise_variance must be positive");
}

double ou_kernel(std::span<const double> a, std::span<const double> b,
                 const GpConfig& cfg) {
  if (a.size() != b.size())
    throw Error(Errc::dimension_mismatch, "ou_kernel: vector lengths differ");
  const double d2 = kernels::active().sum_sq_diff(a.data(), b.data(), a.size());
  return cfg.kernel_variance * std::exp(-std::sqrt(d2) / cfg.lengthscale);
}

namespace {

Matrix kernel_matrix(const Matrix& rows, const GpConfig& cfg, double diag_boost) {
  const std::size_t n = rows.rows();
  const auto& k = kernels::active();
  Matrix gram(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    gram(i, i) = cfg.kernel_variance + diag_boost;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d2 = k.sum_sq_diff(rows.row(i), rows.row(j), rows.cols());
      const double value = cfg.kernel_variance * std::exp(-std::sqrt(d2) / cfg.lengthscale);
      gram(i, j) = value;
      gram(j, i) = value;
    }
  }
  return gram;
}

}  // namespace

GpModel GpModel::fit(const Matrix& rows,
                     std::span<const std::pair<double, double>> coords,
                     const GpConfig& cfg) {
  cfg.validate();
  if (rows.rows() == 0) throw Error(Errc::empty_input, "gp fit: no training rows");
  if (coords.size() != rows.rows())
    throw Error(Errc::shape_mismatch, "gp fit: rows and coordinates differ");

  GpModel model;
  model.cfg_ = cfg;
  model.train_x_ = rows;

  const std::size_t n = rows.rows();
  double sx = 0.0, sy = 0.0;
  for (const auto& [x, y] : coords) {
    sx += x;
    sy += y;
  }
  model.mean_x_ = sx / static_cast<double>(n);
  model.mean_y_ = sy / static_cast<double>(n);

  Matrix gram = kernel_matrix(rows, cfg, cfg.noise_variance);
  try {
    model.chol_ = numerics::cholesky(gram);
    model.jitter_ = 0.0;
  } catch (const Error& e) {
    if (e.code() != Errc::not_positive_definite) throw;
    double diag_mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) diag_mean += gram(i, i);
    diag_mean /= static_cast<double>(n);
    const double jitter = 1e-8 * diag_mean;
    for (std::size_t i = 0; i < n; ++i) gram(i, i) += jitter;
    model.chol_ = numerics::cholesky(gram);  // second failure propagates
    model.jitter_ = jitter;
  }

  std::vector<double> cx(n), cy(n);
  for (std::size_t i = 0; i < n; ++i) {
    cx[i] = coords[i].first - model.mean_x_;
    cy[i] = coords[i].second - model.mean_y_;
  }
  model.alpha_x_ = numerics::solve_spd(model.chol_, cx);
  model.alpha_y_ = numerics::solve_spd(model.chol_, cy);
  return model;
}

GpModel::Prediction GpModel::predict(std::span<const double> row) const {
  if (row.size() != train_x_.cols())
    throw Error(Errc::shape_mismatch,
                "gp predict: query has " + std::to_string(row.size()) +
                    " features, model expects " + std::to_string(train_x_.cols()));
  const std::size_t n = train_x_.rows();
  const auto& k = kernels::active();
  std::vector<double> k_star(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d2 = k.sum_sq_diff(train_x_.row(i), row.data(), row.size());
    k_star[i] = cfg_.kernel_variance * std::exp(-std::sqrt(d2) / cfg_.lengthscale);
  }

  Prediction pred;
  pred.x = mean_x_ + k.dot(k_star.data(), alpha_x_.data(), n);
  pred.y = mean_y_ + k.dot(k_star.data(), alpha_y_.data(), n);

  const std::vector<double> v = numerics::forward_substitute(chol_, k_star);
  const double reduction = k.dot(v.data(), v.data(), n);
  pred.variance = std::max(0.0, cfg_.kernel_variance - reduction);
  return pred;
}

double localization_error(std::pair<double, double> predicted,
                          std::pair<double, double> truth) {
  if (!std::isfinite(predicted.first) || !std::isfinite(predicted.second) ||
      !std::isfinite(truth.first) || !std::isfinite(truth.second))
    throw Error(Errc::out_of_range, "localization_error: non-finite coordinate");
  return std::hypot(predicted.first - truth.first, predicted.second - truth.second);
}

// ---------------------------------------------------------------------------

std::string GpModel::serialize() const {
  nlohmann::ordered_json meta;
  meta["format"] = "driftbench-gp";
  meta["version"] = 1;
  meta["config"] = {{"kernel_variance", cfg_.kernel_variance},
                    {"lengthscale", cfg_.lengthscale},
                    {"noise_variance", cfg_.noise_variance}};
  meta["mean_x"] = mean_x_;
  meta["mean_y"] = mean_y_;
  meta["jitter"] = jitter_;
  meta["ap_universe"] = ap_universe_;
  std::vector<serial::TensorRef> tensors = {
      {"train_x", train_x_.data().data(), train_x_.rows(), train_x_.cols()},
      {"alpha_x", alpha_x_.data(), 1, alpha_x_.size()},
      {"alpha_y", alpha_y_.data(), 1, alpha_y_.size()},
  };
  return serial::pack(std::move(meta), tensors);
}

GpModel GpModel::deserialize(std::string_view bytes) {
  serial::Unpacked u = serial::unpack(bytes);
  if (u.meta.at("format") != "driftbench-gp")
    throw Error(Errc::parse_error, "not a gp model file");
  GpModel model;
  const auto& cfg = u.meta.at("config");
  model.cfg_.kernel_variance = cfg.at("kernel_variance").get<double>();
  model.cfg_.lengthscale = cfg.at("lengthscale").get<double>();
  model.cfg_.noise_variance = cfg.at("noise_variance").get<double>();
  model.mean_x_ = u.meta.at("mean_x").get<double>();
  model.mean_y_ = u.meta.at("mean_y").get<double>();
  model.jitter_ = u.meta.at("jitter").get<double>();
  model.ap_universe_ = u.meta.at("ap_universe").get<std::vector<fpdb::ApId>>();

  if (u.tensors.size() != 3 || u.tensors[0].first != "train_x" ||
      u.tensors[1].first != "alpha_x" || u.tensors[2].first != "alpha_y")
    throw Error(Errc::parse_error, "gp model tensors malformed");
  const auto [rows, cols] = u.shapes[0];
  model.train_x_ = Matrix(rows, cols);
  model.train_x_.data() = std::move(u.tensors[0].second);
  model.alpha_x_ = std::move(u.tensors[1].second);
  model.alpha_y_ = std::move(u.tensors[2].second);
  if (model.alpha_x_.size() != rows || model.alpha_y_.size() != rows)
    throw Error(Errc::parse_error, "gp model alpha length mismatch");

  // the factor is cheap to rebuild relative to shipping n^2 doubles
  Matrix gram =
      kernel_matrix(model.train_x_, model.cfg_, model.cfg_.noise_variance + model.jitter_);
  model.chol_ = numerics::cholesky(gram);
  return model;
}

std::uint64_t GpModel::param_hash() const { return serial::fnv1a64(serialize()); }

}  // namespace driftbench::locmodels

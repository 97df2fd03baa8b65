#include "driftbench/nn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "driftbench/errors.hpp"
#include "driftbench/kernels.hpp"
#include "serial.hpp"

namespace driftbench::locmodels {

using numerics::RngStream;

void DnnConfig::validate() const {
  if (n_aps < 1) throw Error(Errc::invalid_config, "n_aps must be >= 1");
  if (sae_dim < 1) throw Error(Errc::invalid_config, "sae_dim must be >= 1");
  if (resolved_mid() < 1) throw Error(Errc::invalid_config, "sae_mid resolves to < 1");
  if (hid_dim < 1) throw Error(Errc::invalid_config, "hid_dim must be >= 1");
  if (epochs_sae < 0 || epochs_cls < 0)
    throw Error(Errc::invalid_config, "epoch counts must be >= 0");
  if (batch_size < 1) throw Error(Errc::invalid_config, "batch_size must be >= 1");
  if (!(lr_sae > 0) || !(lr_cls > 0))
    throw Error(Errc::invalid_config, "learning rates must be positive");
}

double normalize_level(double rssi) {
  if (!(rssi >= fpdb::kNotDetected && rssi <= 0.0))
    throw Error(Errc::out_of_range,
                "rssi level outside [-110, 0]: " + std::to_string(rssi));
  return std::clamp((rssi + 110.0) / 85.0, 0.0, 1.0);
}

Matrix normalize_input(const Matrix& raw) {
  Matrix out(raw.rows(), raw.cols());
  for (std::size_t i = 0; i < raw.data().size(); ++i)
    out.data()[i] = normalize_level(raw.data()[i]);
  return out;
}

// ---------------------------------------------------------------------------

Linear::Linear(int in_dim, int out_dim, RngStream& rng)
    : w(in_dim, out_dim), b(out_dim), dw(in_dim, out_dim), db(out_dim, 0.0) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in_dim));
  for (auto& v : w.data()) v = rng.uniform(-bound, bound);
  for (auto& v : b) v = rng.uniform(-bound, bound);
}

Matrix Linear::apply(const Matrix& x) const {
  if (x.cols() != w.rows())
    throw Error(Errc::shape_mismatch,
                "linear layer expects " + std::to_string(w.rows()) + " inputs, got " +
                    std::to_string(x.cols()));
  Matrix y = numerics::matmul(x, w);
  for (std::size_t i = 0; i < y.rows(); ++i) {
    double* row = y.row(i);
    for (std::size_t j = 0; j < y.cols(); ++j) row[j] += b[j];
  }
  return y;
}

Matrix Linear::forward(const Matrix& x) {
  x_ = x;
  return apply(x);
}

Matrix Linear::backward(const Matrix& grad_out) {
  numerics::matmul_at_b_into(x_, grad_out, dw);
  std::fill(db.begin(), db.end(), 0.0);
  for (std::size_t i = 0; i < grad_out.rows(); ++i) {
    const double* row = grad_out.row(i);
    for (std::size_t j = 0; j < grad_out.cols(); ++j) db[j] += row[j];
  }
  return numerics::matmul_a_bt(grad_out, w);
}

void Linear::collect_params(std::vector<ParamRef>& out) {
  out.push_back(ParamRef{w.data().data(), dw.data().data(), w.size()});
  out.push_back(ParamRef{b.data(), db.data(), b.size()});
}

Matrix Elu::apply(const Matrix& x) const {
  Matrix y = x;
  for (auto& v : y.data()) v = v > 0.0 ? v : std::expm1(v);
  return y;
}

Matrix Elu::forward(const Matrix& x) {
  x_ = x;
  return apply(x);
}

Matrix Elu::backward(const Matrix& grad_out) {
  Matrix g = grad_out;
  for (std::size_t i = 0; i < g.data().size(); ++i) {
    const double x = x_.data()[i];
    g.data()[i] *= x > 0.0 ? 1.0 : std::exp(x);
  }
  return g;
}

BatchNorm::BatchNorm(int dim)
    : gamma(dim, 1.0),
      beta(dim, 0.0),
      dgamma(dim, 0.0),
      dbeta(dim, 0.0),
      running_mean(dim, 0.0),
      running_var(dim, 1.0) {}

Matrix BatchNorm::apply(const Matrix& x) const {
  Matrix y(x.rows(), x.cols());
  for (std::size_t j = 0; j < x.cols(); ++j) {
    const double inv = 1.0 / std::sqrt(running_var[j] + eps);
    for (std::size_t i = 0; i < x.rows(); ++i)
      y(i, j) = gamma[j] * (x(i, j) - running_mean[j]) * inv + beta[j];
  }
  return y;
}

Matrix BatchNorm::forward(const Matrix& x) {
  const std::size_t m = x.rows();
  const std::size_t d = x.cols();
  x_centered_ = Matrix(m, d);
  x_hat_ = Matrix(m, d);
  inv_std_.assign(d, 0.0);

  Matrix y(m, d);
  for (std::size_t j = 0; j < d; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < m; ++i) mean += x(i, j);
    mean /= static_cast<double>(m);
    double var = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double c = x(i, j) - mean;
      x_centered_(i, j) = c;
      var += c * c;
    }
    var /= static_cast<double>(m);
    const double inv = 1.0 / std::sqrt(var + eps);
    inv_std_[j] = inv;
    for (std::size_t i = 0; i < m; ++i) {
      x_hat_(i, j) = x_centered_(i, j) * inv;
      y(i, j) = gamma[j] * x_hat_(i, j) + beta[j];
    }
    // running averages use the unbiased batch variance, as the usual
    // framework convention has it
    const double unbiased =
        m > 1 ? var * static_cast<double>(m) / static_cast<double>(m - 1) : var;
    running_mean[j] = (1.0 - momentum) * running_mean[j] + momentum * mean;
    running_var[j] = (1.0 - momentum) * running_var[j] + momentum * unbiased;
  }
  return y;
}

Matrix BatchNorm::backward(const Matrix& grad_out) {
  const std::size_t m = grad_out.rows();
  const std::size_t d = grad_out.cols();
  Matrix dx(m, d);
  const double md = static_cast<double>(m);
  for (std::size_t j = 0; j < d; ++j) {
    double dg = 0.0, dbta = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      dg += grad_out(i, j) * x_hat_(i, j);
      dbta += grad_out(i, j);
    }
    dgamma[j] = dg;
    dbeta[j] = dbta;

    const double inv = inv_std_[j];
    double dvar = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      dvar += grad_out(i, j) * gamma[j] * x_centered_(i, j);
    dvar *= -0.5 * inv * inv * inv;

    double dmean = 0.0;
    double centered_sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      dmean -= grad_out(i, j) * gamma[j] * inv;
      centered_sum += x_centered_(i, j);
    }
    dmean += dvar * (-2.0 / md) * centered_sum;

    for (std::size_t i = 0; i < m; ++i) {
      dx(i, j) = grad_out(i, j) * gamma[j] * inv +
                 dvar * 2.0 * x_centered_(i, j) / md + dmean / md;
    }
  }
  return dx;
}

void BatchNorm::collect_params(std::vector<ParamRef>& out) {
  out.push_back(ParamRef{gamma.data(), dgamma.data(), gamma.size()});
  out.push_back(ParamRef{beta.data(), dbeta.data(), beta.size()});
}

LossResult mse_loss(const Matrix& pred, const Matrix& target) {
  if (!pred.same_shape(target))
    throw Error(Errc::shape_mismatch, "mse_loss: shapes differ");
  const double n = static_cast<double>(pred.size());
  LossResult result;
  result.grad = Matrix(pred.rows(), pred.cols());
  result.value =
      kernels::active().sum_sq_diff(pred.data().data(), target.data().data(),
                                    pred.size()) /
      n;
  for (std::size_t i = 0; i < pred.size(); ++i)
    result.grad.data()[i] = 2.0 * (pred.data()[i] - target.data()[i]) / n;
  return result;
}

LossResult softmax_cross_entropy(const Matrix& logits, const std::vector<int>& targets) {
  if (logits.rows() != targets.size())
    throw Error(Errc::shape_mismatch, "softmax_cross_entropy: batch sizes differ");
  const std::size_t m = logits.rows();
  const std::size_t c = logits.cols();
  LossResult result;
  result.grad = Matrix(m, c);
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const int y = targets[i];
    if (y < 0 || static_cast<std::size_t>(y) >= c)
      throw Error(Errc::unknown_label, "target index out of range");
    const double* row = logits.row(i);
    const double peak = *std::max_element(row, row + c);
    double sum = 0.0;
    for (std::size_t j = 0; j < c; ++j) sum += std::exp(row[j] - peak);
    const double log_sum = std::log(sum) + peak;
    total += log_sum - row[y];
    for (std::size_t j = 0; j < c; ++j) {
      const double softmax = std::exp(row[j] - log_sum);
      result.grad(i, j) = (softmax - (static_cast<std::size_t>(y) == j ? 1.0 : 0.0)) /
                          static_cast<double>(m);
    }
  }
  result.value = total / static_cast<double>(m);
  return result;
}

Adam::Adam(std::vector<ParamRef> params, double lr)
    : params_(std::move(params)), lr_(lr) {
  m_.reserve(params_.size());
  v_.reserve(params_.size());
  for (const auto& p : params_) {
    m_.emplace_back(p.count, 0.0);
    v_.emplace_back(p.count, 0.0);
  }
}

void Adam::step() {
  ++t_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t p = 0; p < params_.size(); ++p) {
    double* value = params_[p].value;
    const double* grad = params_[p].grad;
    auto& m = m_[p];
    auto& v = v_[p];
    for (std::size_t i = 0; i < params_[p].count; ++i) {
      m[i] = beta1_ * m[i] + (1.0 - beta1_) * grad[i];
      v[i] = beta2_ * v[i] + (1.0 - beta2_) * grad[i] * grad[i];
      const double m_hat = m[i] / bc1;
      const double v_hat = v[i] / bc2;
      value[i] -= lr_ * m_hat / (std::sqrt(v_hat) + eps_);
    }
  }
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::uint64_t kStreamSaeL1 = 0;
constexpr std::uint64_t kStreamSaeL2 = 1;
constexpr std::uint64_t kStreamSaeD1 = 2;
constexpr std::uint64_t kStreamSaeD2 = 3;
constexpr std::uint64_t kStreamHead1 = 4;
constexpr std::uint64_t kStreamHead2 = 5;
constexpr std::uint64_t kStreamHead3 = 6;
constexpr std::uint64_t kStreamOut = 7;
constexpr std::uint64_t kStreamSaeShuffle = 100;
constexpr std::uint64_t kStreamClsShuffle = 101;

Matrix gather_rows(const Matrix& x, const std::vector<std::size_t>& order,
                   std::size_t begin, std::size_t end) {
  Matrix out(end - begin, x.cols());
  for (std::size_t i = begin; i < end; ++i) {
    const double* src = x.row(order[i]);
    std::copy(src, src + x.cols(), out.row(i - begin));
  }
  return out;
}

void check_finite_loss(double loss) {
  if (!std::isfinite(loss))
    throw Error(Errc::non_finite_loss, "training diverged: loss is not finite");
}

}  // namespace

SaeEncoder train_sae(const Matrix& x, const DnnConfig& cfg,
                     std::vector<double>* epoch_losses) {
  cfg.validate();
  if (x.cols() != static_cast<std::size_t>(cfg.n_aps))
    throw Error(Errc::shape_mismatch,
                "train_sae: input has " + std::to_string(x.cols()) +
                    " columns, config expects " + std::to_string(cfg.n_aps));
  if (x.rows() == 0) throw Error(Errc::empty_input, "train_sae: no rows");

  const int mid = cfg.resolved_mid();
  RngStream r1(cfg.seed, kStreamSaeL1), r2(cfg.seed, kStreamSaeL2);
  RngStream r3(cfg.seed, kStreamSaeD1), r4(cfg.seed, kStreamSaeD2);
  SaeEncoder enc{Linear(cfg.n_aps, mid, r1), Linear(mid, cfg.sae_dim, r2), Elu{}};
  Linear d1(cfg.sae_dim, mid, r3);
  Linear d2(mid, cfg.n_aps, r4);
  Elu dec_act;

  std::vector<ParamRef> params;
  enc.collect_params(params);
  d1.collect_params(params);
  d2.collect_params(params);
  Adam adam(std::move(params), cfg.lr_sae);

  RngStream shuffle_rng(cfg.seed, kStreamSaeShuffle);
  std::vector<std::size_t> order(x.rows());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < cfg.epochs_sae; ++epoch) {
    shuffle_rng.shuffle(order);
    double epoch_loss = 0.0;
    std::size_t batches = 0;
    for (std::size_t begin = 0; begin < order.size();
         begin += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end =
          std::min(order.size(), begin + static_cast<std::size_t>(cfg.batch_size));
      const Matrix xb = gather_rows(x, order, begin, end);
      const Matrix code = enc.forward(xb);
      const Matrix recon = d2.forward(dec_act.forward(d1.forward(code)));
      LossResult loss = mse_loss(recon, xb);
      check_finite_loss(loss.value);
      epoch_loss += loss.value;
      ++batches;
      Matrix g = d1.backward(dec_act.backward(d2.backward(loss.grad)));
      enc.backward(g);
      adam.step();
    }
    if (epoch_losses) epoch_losses->push_back(epoch_loss / static_cast<double>(batches));
  }
  return enc;
}

Matrix DnnClassifier::forward_train(const Matrix& x) {
  Matrix h = enc.forward(x);
  h = a1.forward(h1.forward(h));
  h = a2.forward(h2.forward(h));
  h = a3.forward(h3.forward(h));
  return bn.forward(out.forward(h));
}

Matrix DnnClassifier::logits(const Matrix& x) const {
  Matrix h = enc.apply(x);
  h = a1.apply(h1.apply(h));
  h = a2.apply(h2.apply(h));
  h = a3.apply(h3.apply(h));
  return bn.apply(out.apply(h));
}

std::vector<int> DnnClassifier::predict_indices(const Matrix& x) const {
  const Matrix z = logits(x);
  std::vector<int> indices(z.rows());
  for (std::size_t i = 0; i < z.rows(); ++i) {
    const double* row = z.row(i);
    int best = 0;
    for (std::size_t j = 1; j < z.cols(); ++j)
      if (row[j] > row[best]) best = static_cast<int>(j);
    indices[i] = best;
  }
  return indices;
}

std::vector<int> DnnClassifier::predict_labels(const Matrix& x) const {
  std::vector<int> labels = predict_indices(x);
  for (auto& v : labels) v = class_labels_[static_cast<std::size_t>(v)];
  return labels;
}

DnnClassifier train_classifier(const Matrix& x, const std::vector<int>& labels,
                               const SaeEncoder& encoder, DnnConfig cfg,
                               std::vector<int> class_labels,
                               std::vector<double>* epoch_losses) {
  cfg.validate();
  if (x.rows() != labels.size())
    throw Error(Errc::shape_mismatch, "train_classifier: rows and labels differ");
  if (x.rows() == 0) throw Error(Errc::empty_input, "train_classifier: no rows");
  if (x.cols() != static_cast<std::size_t>(cfg.n_aps))
    throw Error(Errc::shape_mismatch,
                "train_classifier: input has " + std::to_string(x.cols()) +
                    " columns, config expects " + std::to_string(cfg.n_aps));

  if (class_labels.empty()) {
    class_labels = labels;
    std::sort(class_labels.begin(), class_labels.end());
    class_labels.erase(std::unique(class_labels.begin(), class_labels.end()),
                       class_labels.end());
  }
  std::vector<int> targets(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto it =
        std::lower_bound(class_labels.begin(), class_labels.end(), labels[i]);
    if (it == class_labels.end() || *it != labels[i])
      throw Error(Errc::unknown_label,
                  "label " + std::to_string(labels[i]) + " not in class set");
    targets[i] = static_cast<int>(it - class_labels.begin());
  }
  cfg.n_classes = static_cast<int>(class_labels.size());

  DnnClassifier clf;
  clf.cfg_ = cfg;
  clf.class_labels_ = std::move(class_labels);
  clf.enc = encoder;
  RngStream rh1(cfg.seed, kStreamHead1), rh2(cfg.seed, kStreamHead2);
  RngStream rh3(cfg.seed, kStreamHead3), rout(cfg.seed, kStreamOut);
  clf.h1 = Linear(cfg.sae_dim, cfg.hid_dim, rh1);
  clf.h2 = Linear(cfg.hid_dim, cfg.hid_dim, rh2);
  clf.h3 = Linear(cfg.hid_dim, cfg.hid_dim, rh3);
  clf.out = Linear(cfg.hid_dim, cfg.n_classes, rout);
  clf.bn = BatchNorm(cfg.n_classes);

  std::vector<ParamRef> params;
  if (!cfg.freeze_encoder) clf.enc.collect_params(params);
  clf.h1.collect_params(params);
  clf.h2.collect_params(params);
  clf.h3.collect_params(params);
  clf.out.collect_params(params);
  clf.bn.collect_params(params);
  Adam adam(std::move(params), cfg.lr_cls);

  RngStream shuffle_rng(cfg.seed, kStreamClsShuffle);
  std::vector<std::size_t> order(x.rows());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < cfg.epochs_cls; ++epoch) {
    shuffle_rng.shuffle(order);
    double epoch_loss = 0.0;
    std::size_t batches = 0;
    for (std::size_t begin = 0; begin < order.size();
         begin += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end =
          std::min(order.size(), begin + static_cast<std::size_t>(cfg.batch_size));
      const Matrix xb = gather_rows(x, order, begin, end);
      std::vector<int> yb(end - begin);
      for (std::size_t i = begin; i < end; ++i) yb[i - begin] = targets[order[i]];

      const Matrix logits = clf.forward_train(xb);
      LossResult loss = softmax_cross_entropy(logits, yb);
      check_finite_loss(loss.value);
      epoch_loss += loss.value;
      ++batches;

      Matrix g = clf.out.backward(clf.bn.backward(loss.grad));
      g = clf.h3.backward(clf.a3.backward(g));
      g = clf.h2.backward(clf.a2.backward(g));
      g = clf.h1.backward(clf.a1.backward(g));
      if (!cfg.freeze_encoder) clf.enc.backward(g);
      adam.step();
    }
    if (epoch_losses) epoch_losses->push_back(epoch_loss / static_cast<double>(batches));
  }
  return clf;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

std::vector<serial::TensorRef> tensor_list(const DnnClassifier& clf) {
  auto tensor = [](std::string name, const Matrix& m) {
    return serial::TensorRef{std::move(name), m.data().data(), m.rows(), m.cols()};
  };
  auto vec = [](std::string name, const std::vector<double>& v) {
    return serial::TensorRef{std::move(name), v.data(), 1, v.size()};
  };
  return {
      tensor("enc.l1.w", clf.enc.l1.w), vec("enc.l1.b", clf.enc.l1.b),
      tensor("enc.l2.w", clf.enc.l2.w), vec("enc.l2.b", clf.enc.l2.b),
      tensor("h1.w", clf.h1.w),         vec("h1.b", clf.h1.b),
      tensor("h2.w", clf.h2.w),         vec("h2.b", clf.h2.b),
      tensor("h3.w", clf.h3.w),         vec("h3.b", clf.h3.b),
      tensor("out.w", clf.out.w),       vec("out.b", clf.out.b),
      vec("bn.gamma", clf.bn.gamma),    vec("bn.beta", clf.bn.beta),
      vec("bn.running_mean", clf.bn.running_mean),
      vec("bn.running_var", clf.bn.running_var),
  };
}

nlohmann::ordered_json config_json(const DnnConfig& cfg) {
  return {{"n_aps", cfg.n_aps},
          {"sae_dim", cfg.sae_dim},
          {"sae_mid", cfg.resolved_mid()},
          {"hid_dim", cfg.hid_dim},
          {"n_classes", cfg.n_classes},
          {"epochs_sae", cfg.epochs_sae},
          {"epochs_cls", cfg.epochs_cls},
          {"batch_size", cfg.batch_size},
          {"lr_sae", cfg.lr_sae},
          {"lr_cls", cfg.lr_cls},
          {"seed", cfg.seed},
          {"freeze_encoder", cfg.freeze_encoder}};
}

DnnConfig config_from_json(const nlohmann::json& j) {
  DnnConfig cfg;
  cfg.n_aps = j.at("n_aps").get<int>();
  cfg.sae_dim = j.at("sae_dim").get<int>();
  cfg.sae_mid = j.at("sae_mid").get<int>();
  cfg.hid_dim = j.at("hid_dim").get<int>();
  cfg.n_classes = j.at("n_classes").get<int>();
  cfg.epochs_sae = j.at("epochs_sae").get<int>();
  cfg.epochs_cls = j.at("epochs_cls").get<int>();
  cfg.batch_size = j.at("batch_size").get<int>();
  cfg.lr_sae = j.at("lr_sae").get<double>();
  cfg.lr_cls = j.at("lr_cls").get<double>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.freeze_encoder = j.at("freeze_encoder").get<bool>();
  return cfg;
}

void load_tensor(const serial::Unpacked& u, std::size_t idx, const char* name,
                 std::size_t rows, std::size_t cols, double* dst) {
  if (idx >= u.tensors.size() || u.tensors[idx].first != name ||
      u.shapes[idx] != std::make_pair(rows, cols))
    throw Error(Errc::parse_error, std::string("model tensor mismatch at ") + name);
  std::copy(u.tensors[idx].second.begin(), u.tensors[idx].second.end(), dst);
}

}  // namespace

std::string DnnClassifier::serialize() const {
  nlohmann::ordered_json meta;
  meta["format"] = "driftbench-dnn";
  meta["version"] = 1;
  meta["config"] = config_json(cfg_);
  meta["class_labels"] = class_labels_;
  meta["ap_universe"] = ap_universe_;
  return serial::pack(std::move(meta), tensor_list(*this));
}

DnnClassifier DnnClassifier::deserialize(std::string_view bytes) {
  serial::Unpacked u = serial::unpack(bytes);
  if (u.meta.at("format") != "driftbench-dnn")
    throw Error(Errc::parse_error, "not a dnn model file");
  DnnClassifier clf;
  clf.cfg_ = config_from_json(u.meta.at("config"));
  clf.class_labels_ = u.meta.at("class_labels").get<std::vector<int>>();
  clf.ap_universe_ = u.meta.at("ap_universe").get<std::vector<fpdb::ApId>>();
  const DnnConfig& cfg = clf.cfg_;
  const std::size_t mid = static_cast<std::size_t>(cfg.resolved_mid());
  const std::size_t n_aps = static_cast<std::size_t>(cfg.n_aps);
  const std::size_t sae = static_cast<std::size_t>(cfg.sae_dim);
  const std::size_t hid = static_cast<std::size_t>(cfg.hid_dim);
  const std::size_t ncls = static_cast<std::size_t>(cfg.n_classes);

  auto shape = [](Linear& l, std::size_t in, std::size_t out) {
    l.w = Matrix(in, out);
    l.b.assign(out, 0.0);
    l.dw = Matrix(in, out);
    l.db.assign(out, 0.0);
  };
  shape(clf.enc.l1, n_aps, mid);
  shape(clf.enc.l2, mid, sae);
  shape(clf.h1, sae, hid);
  shape(clf.h2, hid, hid);
  shape(clf.h3, hid, hid);
  shape(clf.out, hid, ncls);
  clf.bn = BatchNorm(static_cast<int>(ncls));

  std::size_t i = 0;
  load_tensor(u, i++, "enc.l1.w", n_aps, mid, clf.enc.l1.w.data().data());
  load_tensor(u, i++, "enc.l1.b", 1, mid, clf.enc.l1.b.data());
  load_tensor(u, i++, "enc.l2.w", mid, sae, clf.enc.l2.w.data().data());
  load_tensor(u, i++, "enc.l2.b", 1, sae, clf.enc.l2.b.data());
  load_tensor(u, i++, "h1.w", sae, hid, clf.h1.w.data().data());
  load_tensor(u, i++, "h1.b", 1, hid, clf.h1.b.data());
  load_tensor(u, i++, "h2.w", hid, hid, clf.h2.w.data().data());
  load_tensor(u, i++, "h2.b", 1, hid, clf.h2.b.data());
  load_tensor(u, i++, "h3.w", hid, hid, clf.h3.w.data().data());
  load_tensor(u, i++, "h3.b", 1, hid, clf.h3.b.data());
  load_tensor(u, i++, "out.w", hid, ncls, clf.out.w.data().data());
  load_tensor(u, i++, "out.b", 1, ncls, clf.out.b.data());
  load_tensor(u, i++, "bn.gamma", 1, ncls, clf.bn.gamma.data());
  load_tensor(u, i++, "bn.beta", 1, ncls, clf.bn.beta.data());
  load_tensor(u, i++, "bn.running_mean", 1, ncls, clf.bn.running_mean.data());
  load_tensor(u, i++, "bn.running_var", 1, ncls, clf.bn.running_var.data());
  return clf;
}

std::uint64_t DnnClassifier::param_hash() const {
  return serial::fnv1a64(serialize());
}

}  // namespace driftbench::locmodels

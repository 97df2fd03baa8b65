#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "driftbench/fpdb.hpp"
#include "driftbench/matrix.hpp"
#include "driftbench/rng.hpp"

namespace driftbench::locmodels {

using numerics::Matrix;

struct DnnConfig {
  int n_aps = 465;
  int sae_dim = 64;
  int sae_mid = 0;  // 0 derives n_aps / 4
  int hid_dim = 512;
  int n_classes = 0;  // 0 derives the class count from the labels
  int epochs_sae = 30;
  int epochs_cls = 30;
  int batch_size = 20;
  double lr_sae = 1e-4;
  double lr_cls = 1e-3;
  std::uint64_t seed = 12345;
  bool freeze_encoder = false;  // default fine-tunes the encoder jointly

  int resolved_mid() const { return sae_mid > 0 ? sae_mid : n_aps / 4; }
  void validate() const;
};

// Levels map linearly from the observed span [-110, -25] onto [0, 1] and
// clamp beyond it, so the -110 sentinel lands exactly on 0.
double normalize_level(double rssi);
Matrix normalize_input(const Matrix& raw);

// ---------------------------------------------------------------------------
// Layers. forward() caches what backward() needs; apply() is the pure
// inference path (BatchNorm switches to running statistics there).

struct ParamRef {
  double* value;
  double* grad;
  std::size_t count;
};

class Linear {
 public:
  Linear() = default;
  Linear(int in_dim, int out_dim, numerics::RngStream& rng);

  Matrix apply(const Matrix& x) const;
  Matrix forward(const Matrix& x);
  Matrix backward(const Matrix& grad_out);
  void collect_params(std::vector<ParamRef>& out);

  int in_dim() const { return static_cast<int>(w.rows()); }
  int out_dim() const { return static_cast<int>(w.cols()); }

  Matrix w;  // in x out
  std::vector<double> b;
  Matrix dw;
  std::vector<double> db;

 private:
  Matrix x_;
};

class Elu {
 public:
  Matrix apply(const Matrix& x) const;
  Matrix forward(const Matrix& x);
  Matrix backward(const Matrix& grad_out);

 private:
  Matrix x_;
};

class BatchNorm {
 public:
  BatchNorm() = default;
  explicit BatchNorm(int dim);

  Matrix apply(const Matrix& x) const;  // running statistics
  Matrix forward(const Matrix& x);      // batch statistics + running update
  Matrix backward(const Matrix& grad_out);
  void collect_params(std::vector<ParamRef>& out);

  int dim() const { return static_cast<int>(gamma.size()); }

  std::vector<double> gamma, beta, dgamma, dbeta;
  std::vector<double> running_mean, running_var;
  double momentum = 0.1;
  double eps = 1e-5;

 private:
  Matrix x_centered_;
  Matrix x_hat_;
  std::vector<double> inv_std_;
};

struct LossResult {
  double value = 0.0;
  Matrix grad;
};

LossResult mse_loss(const Matrix& pred, const Matrix& target);
LossResult softmax_cross_entropy(const Matrix& logits, const std::vector<int>& targets);

// Textbook Adam (beta1 0.9, beta2 0.999, eps 1e-8, bias correction).
class Adam {
 public:
  Adam(std::vector<ParamRef> params, double lr);
  void step();

 private:
  std::vector<ParamRef> params_;
  std::vector<std::vector<double>> m_, v_;
  double lr_;
  double beta1_ = 0.9, beta2_ = 0.999, eps_ = 1e-8;
  long t_ = 0;
};

// ---------------------------------------------------------------------------

struct SaeEncoder {
  Linear l1;  // n_aps -> mid, ELU
  Linear l2;  // mid -> sae_dim
  Elu act;

  Matrix apply(const Matrix& x) const { return l2.apply(act.apply(l1.apply(x))); }
  Matrix forward(const Matrix& x) { return l2.forward(act.forward(l1.forward(x))); }
  Matrix backward(const Matrix& g) { return l1.backward(act.backward(l2.backward(g))); }
  void collect_params(std::vector<ParamRef>& out) {
    l1.collect_params(out);
    l2.collect_params(out);
  }
};

// Reconstruction pretraining: encoder plus mirrored decoder, minibatch Adam
// on MSE. epochs_sae == 0 returns the seeded initialization untouched.
SaeEncoder train_sae(const Matrix& x, const DnnConfig& cfg,
                     std::vector<double>* epoch_losses = nullptr);

class DnnClassifier {
 public:
  Matrix forward_train(const Matrix& x);
  Matrix logits(const Matrix& x) const;

  // argmax over logits, ties resolved toward the lowest class index
  std::vector<int> predict_indices(const Matrix& x) const;
  std::vector<int> predict_labels(const Matrix& x) const;  // rp ids

  const DnnConfig& config() const { return cfg_; }
  const std::vector<int>& class_labels() const { return class_labels_; }
  const std::vector<fpdb::ApId>& ap_universe() const { return ap_universe_; }
  void set_ap_universe(std::vector<fpdb::ApId> universe) {
    ap_universe_ = std::move(universe);
  }

  std::string serialize() const;
  static DnnClassifier deserialize(std::string_view bytes);
  std::uint64_t param_hash() const;

  SaeEncoder enc;
  Linear h1, h2, h3, out;
  Elu a1, a2, a3;
  BatchNorm bn;

  friend DnnClassifier train_classifier(const Matrix&, const std::vector<int>&,
                                        const SaeEncoder&, DnnConfig,
                                        std::vector<int>, std::vector<double>*);

 private:
  DnnConfig cfg_;
  std::vector<int> class_labels_;
  std::vector<fpdb::ApId> ap_universe_;
};

// Cross-entropy fine-tuning of encoder + head. class_labels may pin the
// class set; when empty it derives from the labels (sorted ascending).
DnnClassifier train_classifier(const Matrix& x, const std::vector<int>& labels,
                               const SaeEncoder& encoder, DnnConfig cfg,
                               std::vector<int> class_labels = {},
                               std::vector<double>* epoch_losses = nullptr);

}  // namespace driftbench::locmodels

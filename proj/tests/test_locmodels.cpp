#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "driftbench/errors.hpp"
#include "driftbench/gp.hpp"
#include "driftbench/nn.hpp"
#include "driftbench/rng.hpp"

using namespace driftbench;
using locmodels::Matrix;
using numerics::RngStream;

namespace {

constexpr double kGradStep = 1e-6;
constexpr double kGradTol = 1e-5;

Matrix random_matrix(std::size_t rows, std::size_t cols, RngStream& rng, double lo,
                     double hi, double keep_away_from_zero = 0.0) {
  Matrix m(rows, cols);
  for (auto& v : m.data()) {
    v = rng.uniform(lo, hi);
    if (keep_away_from_zero > 0.0 && std::fabs(v) < keep_away_from_zero)
      v = v >= 0.0 ? keep_away_from_zero : -keep_away_from_zero;
  }
  return m;
}

double rel_err(double a, double b) {
  return std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), 1e-6});
}

// Central-difference gradient of `loss` with respect to `values[i]`.
double numeric_grad(double* slot, const std::function<double()>& loss) {
  const double original = *slot;
  *slot = original + kGradStep;
  const double up = loss();
  *slot = original - kGradStep;
  const double down = loss();
  *slot = original;
  return (up - down) / (2.0 * kGradStep);
}

void check_grads(std::span<double> values, std::span<const double> analytic,
                 const std::function<double()>& loss) {
  REQUIRE(values.size() == analytic.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double numeric = numeric_grad(&values[i], loss);
    CAPTURE(i);
    CHECK(rel_err(analytic[i], numeric) <= kGradTol);
  }
}

// Scalar "probe" loss: L = sum(R .* f(x)) with fixed random R, so dL/df = R.
Matrix probe_weights(std::size_t rows, std::size_t cols, RngStream& rng) {
  return random_matrix(rows, cols, rng, -1.0, 1.0);
}

double weighted_sum(const Matrix& y, const Matrix& r) {
  double acc = 0.0;
  for (std::size_t i = 0; i < y.data().size(); ++i) acc += y.data()[i] * r.data()[i];
  return acc;
}

}  // namespace

TEST_CASE("normalize_input maps the observed span onto [0,1]") {
  CHECK(locmodels::normalize_level(-110) == 0.0);
  CHECK(locmodels::normalize_level(-25) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(locmodels::normalize_level(-67.5) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(locmodels::normalize_level(0) == 1.0);  // clamped above -25
  CHECK_THROWS_AS(locmodels::normalize_level(-111), Error);
  CHECK_THROWS_AS(locmodels::normalize_level(5), Error);
}

TEST_CASE("linear layer gradients match central differences") {
  RngStream rng(17, 0);
  locmodels::Linear layer(7, 4, rng);
  Matrix x = random_matrix(5, 7, rng, -2.0, 2.0);
  Matrix r = probe_weights(5, 4, rng);

  auto loss_now = [&]() { return weighted_sum(layer.apply(x), r); };
  layer.forward(x);
  Matrix dx = layer.backward(r);

  check_grads(std::span<double>(layer.w.data()), std::span<const double>(layer.dw.data()),
              loss_now);
  check_grads(std::span<double>(layer.b), std::span<const double>(layer.db), loss_now);
  auto loss_x = [&]() { return weighted_sum(layer.apply(x), r); };
  check_grads(std::span<double>(x.data()), std::span<const double>(dx.data()), loss_x);
}

TEST_CASE("elu gradients match central differences") {
  RngStream rng(18, 0);
  locmodels::Elu elu;
  Matrix x = random_matrix(5, 7, rng, -2.0, 2.0, 1e-3);
  Matrix r = probe_weights(5, 7, rng);

  elu.forward(x);
  Matrix dx = elu.backward(r);
  auto loss_x = [&]() { return weighted_sum(elu.apply(x), r); };
  check_grads(std::span<double>(x.data()), std::span<const double>(dx.data()), loss_x);
}

TEST_CASE("batch-norm gradients match central differences") {
  RngStream rng(19, 0);
  locmodels::BatchNorm bn(7);
  for (std::size_t j = 0; j < 7; ++j) {
    bn.gamma[j] = rng.uniform(0.5, 1.5);
    bn.beta[j] = rng.uniform(-0.5, 0.5);
  }
  Matrix x = random_matrix(5, 7, rng, -2.0, 2.0);
  Matrix r = probe_weights(5, 7, rng);

  bn.forward(x);
  Matrix dx = bn.backward(r);
  // training-mode output depends only on batch statistics, so repeated
  // forward calls during differencing are safe
  auto loss_x = [&]() { return weighted_sum(bn.forward(x), r); };
  check_grads(std::span<double>(x.data()), std::span<const double>(dx.data()), loss_x);
  check_grads(std::span<double>(bn.gamma), std::span<const double>(bn.dgamma), loss_x);
  check_grads(std::span<double>(bn.beta), std::span<const double>(bn.dbeta), loss_x);
}

TEST_CASE("loss gradients match central differences") {
  RngStream rng(20, 0);
  SUBCASE("mse") {
    Matrix pred = random_matrix(5, 7, rng, -1.0, 1.0);
    Matrix target = random_matrix(5, 7, rng, -1.0, 1.0);
    auto result = locmodels::mse_loss(pred, target);
    auto loss = [&]() { return locmodels::mse_loss(pred, target).value; };
    check_grads(std::span<double>(pred.data()),
                std::span<const double>(result.grad.data()), loss);
  }
  SUBCASE("softmax cross entropy") {
    Matrix logits = random_matrix(5, 7, rng, -2.0, 2.0);
    std::vector<int> targets{0, 3, 6, 2, 2};
    auto result = locmodels::softmax_cross_entropy(logits, targets);
    auto loss = [&]() {
      return locmodels::softmax_cross_entropy(logits, targets).value;
    };
    check_grads(std::span<double>(logits.data()),
                std::span<const double>(result.grad.data()), loss);
  }
}

TEST_CASE("adam matches a hand-stepped oracle on a scalar quadratic") {
  // f(theta) = theta^2, lr 0.1, starting from 1
  double theta = 1.0;
  double grad = 0.0;
  locmodels::Adam adam({locmodels::ParamRef{&theta, &grad, 1}}, 0.1);

  double oracle_theta = 1.0, m = 0.0, v = 0.0;
  const double b1 = 0.9, b2 = 0.999, eps = 1e-8, lr = 0.1;
  for (int t = 1; t <= 3; ++t) {
    grad = 2.0 * theta;
    adam.step();

    const double g = 2.0 * oracle_theta;
    m = b1 * m + (1 - b1) * g;
    v = b2 * v + (1 - b2) * g * g;
    const double mh = m / (1 - std::pow(b1, t));
    const double vh = v / (1 - std::pow(b2, t));
    oracle_theta -= lr * mh / (std::sqrt(vh) + eps);

    CHECK(theta == doctest::Approx(oracle_theta).epsilon(1e-15));
  }
}

TEST_CASE("sae pretraining drives reconstruction loss down") {
  locmodels::DnnConfig cfg;
  cfg.n_aps = 24;
  cfg.sae_dim = 8;
  cfg.hid_dim = 16;
  cfg.seed = 12345;

  // identical rows: the autoencoder needs only the constant function. Row
  // count sized so 30 epochs at the default learning rate give Adam enough
  // steps to close the gap.
  Matrix x(2000, 24);
  RngStream rng(4, 4);
  std::vector<double> pattern(24);
  for (auto& v : pattern) v = rng.uniform(0.0, 1.0);
  for (std::size_t i = 0; i < x.rows(); ++i)
    std::copy(pattern.begin(), pattern.end(), x.row(i));

  std::vector<double> losses;
  auto enc = locmodels::train_sae(x, cfg, &losses);
  REQUIRE(losses.size() == 30);
  CHECK(losses.back() <= 1e-3);
  CHECK(losses.back() <= losses.front());

  // zero epochs: parameters equal the seeded initialization
  auto cfg0 = cfg;
  cfg0.epochs_sae = 0;
  auto enc0 = locmodels::train_sae(x, cfg0, nullptr);
  RngStream fresh(cfg.seed, 0);
  locmodels::Linear expected(cfg.n_aps, cfg.resolved_mid(), fresh);
  CHECK(enc0.l1.w.data() == expected.w.data());
  CHECK(enc0.l1.b == expected.b);

  Matrix wrong(3, 99);
  CHECK_THROWS_AS(locmodels::train_sae(wrong, cfg), Error);
}

namespace {

// one-hot-ish separable classes: class k lights up a dedicated block of APs
void fill_separable(Matrix& x, std::vector<int>& labels, int n_classes, int block,
                    RngStream& rng) {
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const int cls = static_cast<int>(i % n_classes);
    labels[i] = 1000 + cls;  // rp ids need not start at zero
    for (std::size_t j = 0; j < x.cols(); ++j) {
      const bool lit = j >= static_cast<std::size_t>(cls * block) &&
                       j < static_cast<std::size_t>((cls + 1) * block);
      x(i, j) = lit ? rng.uniform(0.75, 0.95) : rng.uniform(0.0, 0.08);
    }
  }
}

}  // namespace

TEST_CASE("classifier separates block-coded classes (scaled-down smoke)") {
  locmodels::DnnConfig cfg;
  cfg.n_aps = 40;
  cfg.sae_dim = 16;
  cfg.hid_dim = 32;
  cfg.epochs_sae = 10;
  cfg.epochs_cls = 30;
  cfg.seed = 12345;

  const int n_classes = 10;
  Matrix x(300, 40);
  std::vector<int> labels(300);
  RngStream rng(7, 1);
  fill_separable(x, labels, n_classes, 4, rng);

  auto enc = locmodels::train_sae(x, cfg);
  auto clf = locmodels::train_classifier(x, labels, enc, cfg);
  CHECK(clf.class_labels().size() == n_classes);

  auto predicted = clf.predict_labels(x);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (predicted[i] == labels[i]) ++correct;
  CHECK(static_cast<double>(correct) / labels.size() >= 0.95);

  // inference is deterministic
  CHECK(clf.predict_labels(x) == predicted);

  // single-class data predicts that class everywhere
  std::vector<int> one_class(labels.size(), 42);
  auto clf_one = locmodels::train_classifier(x, one_class, enc, cfg);
  for (int p : clf_one.predict_labels(x)) CHECK(p == 42);

  // label outside a pinned class set
  CHECK_THROWS_AS(
      locmodels::train_classifier(x, labels, enc, cfg, std::vector<int>{1, 2, 3}),
      Error);
}

TEST_CASE("training is bit-deterministic for a fixed seed") {
  locmodels::DnnConfig cfg;
  cfg.n_aps = 20;
  cfg.sae_dim = 8;
  cfg.hid_dim = 16;
  cfg.epochs_sae = 4;
  cfg.epochs_cls = 4;
  cfg.seed = 999;

  Matrix x(30, 20);
  std::vector<int> labels(30);
  RngStream rng(11, 0);
  fill_separable(x, labels, 5, 4, rng);

  auto run = [&]() {
    auto enc = locmodels::train_sae(x, cfg);
    return locmodels::train_classifier(x, labels, enc, cfg).param_hash();
  };
  CHECK(run() == run());
}

TEST_CASE("argmax breaks ties toward the lowest class index") {
  locmodels::DnnConfig cfg;
  cfg.n_aps = 6;
  cfg.sae_dim = 4;
  cfg.sae_mid = 3;
  cfg.hid_dim = 5;
  cfg.epochs_sae = 0;
  cfg.epochs_cls = 0;
  Matrix x(4, 6, 0.5);
  std::vector<int> labels{7, 8, 9, 7};
  auto enc = locmodels::train_sae(x, cfg);
  auto clf = locmodels::train_classifier(x, labels, enc, cfg);

  // zero every parameter: logits become exactly equal across classes
  auto zero = [](locmodels::Linear& l) {
    std::fill(l.w.data().begin(), l.w.data().end(), 0.0);
    std::fill(l.b.begin(), l.b.end(), 0.0);
  };
  zero(clf.enc.l1);
  zero(clf.enc.l2);
  zero(clf.h1);
  zero(clf.h2);
  zero(clf.h3);
  zero(clf.out);
  for (int p : clf.predict_labels(x)) CHECK(p == 7);
}

TEST_CASE("dnn model serialization round-trips") {
  locmodels::DnnConfig cfg;
  cfg.n_aps = 12;
  cfg.sae_dim = 6;
  cfg.hid_dim = 8;
  cfg.epochs_sae = 2;
  cfg.epochs_cls = 2;
  Matrix x(20, 12);
  std::vector<int> labels(20);
  RngStream rng(13, 0);
  fill_separable(x, labels, 4, 3, rng);
  auto enc = locmodels::train_sae(x, cfg);
  auto clf = locmodels::train_classifier(x, labels, enc, cfg);
  clf.set_ap_universe({"ap_1", "ap_2"});

  const std::string bytes = clf.serialize();
  auto restored = locmodels::DnnClassifier::deserialize(bytes);
  CHECK(restored.param_hash() == clf.param_hash());
  CHECK(restored.predict_labels(x) == clf.predict_labels(x));
  CHECK(restored.ap_universe() == clf.ap_universe());

  CHECK_THROWS_AS(locmodels::DnnClassifier::deserialize("garbage"), Error);
}

// ---------------------------------------------------------------------------
// GP

namespace {

struct DenseGpOracle {
  // direct dense solve, independent of the Cholesky path
  std::vector<std::vector<double>> k_inv_rows;
  std::vector<double> alpha_x, alpha_y;
  double mean_x = 0.0, mean_y = 0.0;
  Matrix train;
  locmodels::GpConfig cfg;

  static std::vector<double> solve(std::vector<std::vector<double>> a,
                                   std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
      std::size_t pivot = col;
      for (std::size_t r = col + 1; r < n; ++r)
        if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
      std::swap(a[col], a[pivot]);
      std::swap(b[col], b[pivot]);
      for (std::size_t r = col + 1; r < n; ++r) {
        const double f = a[r][col] / a[col][col];
        for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
        b[r] -= f * b[col];
      }
    }
    std::vector<double> x(n);
    for (std::size_t ii = n; ii-- > 0;) {
      double acc = b[ii];
      for (std::size_t c = ii + 1; c < n; ++c) acc -= a[ii][c] * x[c];
      x[ii] = acc / a[ii][ii];
    }
    return x;
  }

  DenseGpOracle(const Matrix& rows,
                const std::vector<std::pair<double, double>>& coords,
                locmodels::GpConfig config)
      : train(rows), cfg(config) {
    const std::size_t n = rows.rows();
    std::vector<std::vector<double>> gram(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double d2 = 0.0;
        for (std::size_t c = 0; c < rows.cols(); ++c) {
          const double d = rows(i, c) - rows(j, c);
          d2 += d * d;
        }
        gram[i][j] = cfg.kernel_variance * std::exp(-std::sqrt(d2) / cfg.lengthscale) +
                     (i == j ? cfg.noise_variance : 0.0);
      }
    for (const auto& [x, y] : coords) {
      mean_x += x;
      mean_y += y;
    }
    mean_x /= static_cast<double>(n);
    mean_y /= static_cast<double>(n);
    std::vector<double> cx(n), cy(n);
    for (std::size_t i = 0; i < n; ++i) {
      cx[i] = coords[i].first - mean_x;
      cy[i] = coords[i].second - mean_y;
    }
    alpha_x = solve(gram, cx);
    alpha_y = solve(gram, cy);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> e(n, 0.0);
      e[i] = 1.0;
      k_inv_rows.push_back(solve(gram, e));
    }
  }

  locmodels::GpModel::Prediction predict(std::span<const double> row) const {
    const std::size_t n = train.rows();
    std::vector<double> k_star(n);
    for (std::size_t i = 0; i < n; ++i) {
      double d2 = 0.0;
      for (std::size_t c = 0; c < train.cols(); ++c) {
        const double d = train(i, c) - row[c];
        d2 += d * d;
      }
      k_star[i] = cfg.kernel_variance * std::exp(-std::sqrt(d2) / cfg.lengthscale);
    }
    locmodels::GpModel::Prediction pred;
    pred.x = mean_x;
    pred.y = mean_y;
    double reduction = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      pred.x += k_star[i] * alpha_x[i];
      pred.y += k_star[i] * alpha_y[i];
      double kinv_k = 0.0;
      for (std::size_t j = 0; j < n; ++j) kinv_k += k_inv_rows[i][j] * k_star[j];
      reduction += k_star[i] * kinv_k;
    }
    pred.variance = cfg.kernel_variance - reduction;
    return pred;
  }
};

}  // namespace

TEST_CASE("ou kernel values") {
  locmodels::GpConfig cfg;  // variance 1, lengthscale 100
  std::vector<double> a{-60, -70, -110};
  CHECK(locmodels::ou_kernel(a, a, cfg) == 1.0);

  std::vector<double> b{-60, -70, -10};  // distance 100 = lengthscale
  CHECK(locmodels::ou_kernel(a, b, cfg) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(locmodels::ou_kernel(a, b, cfg) == locmodels::ou_kernel(b, a, cfg));

  std::vector<double> c{1, 2};
  CHECK_THROWS_AS(locmodels::ou_kernel(a, c, cfg), Error);
}

TEST_CASE("gp predictions match the dense oracle") {
  RngStream rng(23, 0);
  Matrix rows(10, 6);
  for (auto& v : rows.data()) v = rng.uniform(-100.0, -30.0);
  std::vector<std::pair<double, double>> coords;
  for (int i = 0; i < 10; ++i)
    coords.emplace_back(rng.uniform(0.0, 20.0), rng.uniform(0.0, 10.0));

  locmodels::GpConfig cfg;
  cfg.lengthscale = 40.0;
  auto model = locmodels::GpModel::fit(rows, coords, cfg);
  DenseGpOracle oracle(rows, coords, cfg);

  for (int q = 0; q < 12; ++q) {
    std::vector<double> query(6);
    for (auto& v : query) v = rng.uniform(-100.0, -30.0);
    const auto got = model.predict(query);
    const auto want = oracle.predict(query);
    CHECK(std::fabs(got.x - want.x) <= 1e-8);
    CHECK(std::fabs(got.y - want.y) <= 1e-8);
    CHECK(std::fabs(got.variance - want.variance) <= 1e-8);
    CHECK(got.variance >= 0.0);
    CHECK(got.variance <= cfg.kernel_variance + 1e-9);
  }
}

TEST_CASE("gp interpolates as the noise vanishes") {
  RngStream rng(29, 0);
  Matrix rows(8, 5);
  for (auto& v : rows.data()) v = rng.uniform(-100.0, -30.0);
  std::vector<std::pair<double, double>> coords;
  for (int i = 0; i < 8; ++i)
    coords.emplace_back(rng.uniform(0.0, 20.0), rng.uniform(0.0, 10.0));

  locmodels::GpConfig cfg;
  cfg.lengthscale = 30.0;
  cfg.noise_variance = 1e-10;
  auto model = locmodels::GpModel::fit(rows, coords, cfg);
  for (std::size_t i = 0; i < rows.rows(); ++i) {
    const auto pred =
        model.predict(std::span<const double>(rows.row(i), rows.cols()));
    CHECK(std::fabs(pred.x - coords[i].first) <= 1e-5);
    CHECK(std::fabs(pred.y - coords[i].second) <= 1e-5);
  }

  // single point with near-zero noise behaves the same way
  Matrix one(1, 3);
  one(0, 0) = -50;
  one(0, 1) = -60;
  one(0, 2) = -70;
  std::vector<std::pair<double, double>> t{{4.0, 9.0}};
  locmodels::GpConfig tiny;
  tiny.noise_variance = 1e-12;
  auto m1 = locmodels::GpModel::fit(one, t, tiny);
  const auto p1 = m1.predict(std::span<const double>(one.row(0), 3));
  CHECK(std::fabs(p1.x - 4.0) <= 1e-6);
  CHECK(std::fabs(p1.y - 9.0) <= 1e-6);
}

TEST_CASE("far queries revert to the training means with prior variance") {
  Matrix rows(2, 2);
  rows(0, 0) = -100;
  rows(0, 1) = -100;
  rows(1, 0) = -90;
  rows(1, 1) = -95;
  std::vector<std::pair<double, double>> coords{{0.0, 0.0}, {10.0, 6.0}};
  locmodels::GpConfig cfg;
  cfg.lengthscale = 1.0;  // short lengthscale so the far query decouples
  auto model = locmodels::GpModel::fit(rows, coords, cfg);

  std::vector<double> far{0.0, 0.0};
  const auto pred = model.predict(far);
  CHECK(std::fabs(pred.x - 5.0) <= 1e-6);
  CHECK(std::fabs(pred.y - 3.0) <= 1e-6);
  CHECK(std::fabs(pred.variance - cfg.kernel_variance) <= 1e-6);
}

TEST_CASE("shrinkage splits the difference at unit signal-to-noise") {
  // two decoupled points, variance 1, noise 1: the posterior at a training
  // input moves halfway from the mean toward its target
  Matrix rows(2, 1);
  rows(0, 0) = 0.0;
  rows(1, 0) = 1000.0;
  std::vector<std::pair<double, double>> coords{{2.0, 8.0}, {6.0, 4.0}};
  locmodels::GpConfig cfg;
  cfg.lengthscale = 0.5;
  auto model = locmodels::GpModel::fit(rows, coords, cfg);
  const auto pred = model.predict(std::vector<double>{0.0});
  CHECK(pred.x == doctest::Approx(4.0 + (2.0 - 4.0) / 2.0).epsilon(1e-9));
  CHECK(pred.y == doctest::Approx(6.0 + (8.0 - 6.0) / 2.0).epsilon(1e-9));
}

TEST_CASE("degenerate kernels take the jitter path") {
  Matrix rows(3, 2);
  for (auto& v : rows.data()) v = -60.0;  // identical rows, singular kernel
  std::vector<std::pair<double, double>> coords{{0, 0}, {1, 1}, {2, 2}};
  locmodels::GpConfig cfg;
  cfg.noise_variance = 1e-18;
  auto model = locmodels::GpModel::fit(rows, coords, cfg);
  const auto pred = model.predict(std::vector<double>{-60.0, -60.0});
  CHECK(std::isfinite(pred.x));
  CHECK(std::isfinite(pred.variance));

  cfg.noise_variance = 0.0;
  CHECK_THROWS_AS(locmodels::GpModel::fit(rows, coords, cfg), Error);
}

TEST_CASE("gp model serialization round-trips") {
  RngStream rng(31, 0);
  Matrix rows(6, 4);
  for (auto& v : rows.data()) v = rng.uniform(-100.0, -30.0);
  std::vector<std::pair<double, double>> coords;
  for (int i = 0; i < 6; ++i)
    coords.emplace_back(rng.uniform(0.0, 20.0), rng.uniform(0.0, 10.0));
  locmodels::GpConfig cfg;
  auto model = locmodels::GpModel::fit(rows, coords, cfg);
  model.set_ap_universe({"a", "b", "c", "d"});

  auto restored = locmodels::GpModel::deserialize(model.serialize());
  CHECK(restored.param_hash() == model.param_hash());
  std::vector<double> q{-60, -61, -62, -63};
  CHECK(restored.predict(q).x == doctest::Approx(model.predict(q).x).epsilon(1e-12));
  CHECK(restored.predict(q).variance ==
        doctest::Approx(model.predict(q).variance).epsilon(1e-12));
}

TEST_CASE("localization error is the euclidean distance") {
  CHECK(locmodels::localization_error({0, 0}, {3, 4}) == 5.0);
  CHECK(locmodels::localization_error({2, 2}, {2, 2}) == 0.0);
  CHECK(locmodels::localization_error({1, 7}, {-2, 3}) ==
        locmodels::localization_error({-2, 3}, {1, 7}));
  CHECK_THROWS_AS(locmodels::localization_error({NAN, 0}, {0, 0}), Error);
}

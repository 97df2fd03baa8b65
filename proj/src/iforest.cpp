#include "driftbench/iforest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "driftbench/errors.hpp"
#include "driftbench/rng.hpp"
#include "driftbench/stats.hpp"

namespace driftbench::driftstats {

using numerics::RngStream;

void ForestHyperparams::validate() const {
  if (n_estimators < 1)
    throw Error(Errc::invalid_config, "n_estimators must be >= 1");
  if (!(contamination > 0.0 && contamination < 0.5))
    throw Error(Errc::invalid_config, "contamination must lie in (0, 0.5)");
  if (max_samples < 0)
    throw Error(Errc::invalid_config, "max_samples must be >= 0 (0 = auto)");
  if (!(max_features > 0.0 && max_features <= 1.0))
    throw Error(Errc::invalid_config, "max_features must lie in (0, 1]");
}

double c_norm(std::int64_t n) {
  if (n <= 1) return 0.0;
  if (n == 2) return 1.0;
  constexpr double kEulerGamma = 0.57721566490153286061;
  const double nd = static_cast<double>(n);
  return 2.0 * (std::log(nd - 1.0) + kEulerGamma) - 2.0 * (nd - 1.0) / nd;
}

double anomaly_score_from_path(double mean_path, std::int64_t n) {
  const double norm = c_norm(n);
  if (norm <= 0.0) return mean_path <= 0.0 ? 1.0 : 0.0;
  return std::exp2(-mean_path / norm);
}

double path_length(const IsolationTree& tree, const std::vector<double>& features) {
  int node = 0;
  double edges = 0.0;
  while (!tree.nodes[node].is_leaf()) {
    const TreeNode& split = tree.nodes[node];
    node = features[split.feature] < split.threshold ? split.left : split.right;
    edges += 1.0;
  }
  return edges + c_norm(tree.nodes[node].size);
}

namespace {

int ceil_log2(int n) {
  int depth = 0;
  while ((1 << depth) < n) ++depth;
  return depth;
}

struct TreeBuilder {
  const std::vector<const DailySample*>& rows;
  const std::vector<int>& candidate_features;
  int max_depth;
  RngStream& rng;
  IsolationTree tree;

  int build(std::vector<int>& indices, int begin, int end, int depth) {
    const int node_id = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back(TreeNode{});
    tree.nodes[node_id].size = end - begin;
    if (end - begin <= 1 || depth >= max_depth) return node_id;

    // candidate features with spread on this node's data
    std::vector<int> splittable;
    std::vector<std::pair<double, double>> ranges;
    for (int f : candidate_features) {
      double lo = rows[indices[begin]]->features[f];
      double hi = lo;
      for (int i = begin + 1; i < end; ++i) {
        const double v = rows[indices[i]]->features[f];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (lo < hi) {
        splittable.push_back(f);
        ranges.emplace_back(lo, hi);
      }
    }
    if (splittable.empty()) return node_id;  // all points identical

    const std::size_t pick = rng.uniform_int(splittable.size());
    const int feature = splittable[pick];
    const auto [lo, hi] = ranges[pick];
    double threshold = lo;
    while (!(threshold > lo && threshold < hi))
      threshold = rng.uniform(lo, hi);

    auto mid_it = std::partition(indices.begin() + begin, indices.begin() + end,
                                 [&](int idx) {
                                   return rows[idx]->features[feature] < threshold;
                                 });
    const int mid = static_cast<int>(mid_it - indices.begin());
    const int left = build(indices, begin, mid, depth + 1);
    const int right = build(indices, mid, end, depth + 1);
    tree.nodes[node_id].feature = feature;
    tree.nodes[node_id].threshold = threshold;
    tree.nodes[node_id].left = left;
    tree.nodes[node_id].right = right;
    return node_id;
  }
};

}  // namespace

ForestModel fit_forest(const std::vector<DailySample>& samples,
                       const ForestHyperparams& hyper) {
  hyper.validate();
  const std::size_t n = samples.size();
  if (n < 2) throw Error(Errc::too_few_samples, "fit_forest needs at least 2 samples");
  const std::size_t dim = samples[0].features.size();
  if (dim == 0) throw Error(Errc::too_few_samples, "samples carry no features");
  for (const auto& s : samples) {
    if (s.features.size() != dim)
      throw Error(Errc::dimension_mismatch, "inconsistent feature lengths");
    for (double v : s.features)
      if (!std::isfinite(v))
        throw Error(Errc::non_finite_feature,
                    "day " + std::to_string(s.day_index) + " has a non-finite feature");
  }

  // Subsampling draws indices into the lexicographically sorted sample list,
  // which makes the fit invariant to the order samples arrive in.
  std::vector<const DailySample*> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i] = &samples[i];
  std::sort(rows.begin(), rows.end(), [](const DailySample* a, const DailySample* b) {
    return a->features < b->features;
  });

  const int msamp = hyper.max_samples == 0
                        ? static_cast<int>(std::min<std::size_t>(256, n))
                        : static_cast<int>(std::min<std::size_t>(hyper.max_samples, n));
  const int n_candidate_features =
      static_cast<int>(std::ceil(hyper.max_features * static_cast<double>(dim)));
  const int max_depth = ceil_log2(msamp);

  std::vector<IsolationTree> trees;
  trees.reserve(hyper.n_estimators);
  for (int t = 0; t < hyper.n_estimators; ++t) {
    RngStream rng(hyper.random_state, static_cast<std::uint64_t>(t));

    // partial Fisher-Yates: first msamp entries form the subsample
    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < msamp; ++i) {
      const std::size_t j = i + rng.uniform_int(n - i);
      std::swap(pool[i], pool[j]);
    }
    std::vector<int> subsample(pool.begin(), pool.begin() + msamp);

    std::vector<int> features(dim);
    std::iota(features.begin(), features.end(), 0);
    for (int i = 0; i < n_candidate_features; ++i) {
      const std::size_t j = i + rng.uniform_int(dim - i);
      std::swap(features[i], features[j]);
    }
    features.resize(n_candidate_features);
    std::sort(features.begin(), features.end());

    TreeBuilder builder{rows, features, max_depth, rng, {}};
    builder.build(subsample, 0, msamp, 0);
    trees.push_back(std::move(builder.tree));
  }

  std::vector<double> negated(n);
  for (std::size_t i = 0; i < n; ++i) {
    double total = 0.0;
    for (const auto& tree : trees) total += path_length(tree, samples[i].features);
    negated[i] = -anomaly_score_from_path(
        total / static_cast<double>(trees.size()), msamp);
  }
  const double offset = numerics::percentile(negated, 100.0 * hyper.contamination);

  return ForestModel(std::move(trees), hyper, msamp, dim, offset);
}

double anomaly_score(const ForestModel& model, const DailySample& sample) {
  if (sample.features.size() != model.n_features())
    throw Error(Errc::dimension_mismatch,
                "sample has " + std::to_string(sample.features.size()) +
                    " features, model expects " + std::to_string(model.n_features()));
  double total = 0.0;
  for (const auto& tree : model.trees()) total += path_length(tree, sample.features);
  const double mean_path = total / static_cast<double>(model.trees().size());
  return anomaly_score_from_path(mean_path, model.samples_per_tree());
}

std::vector<double> decision_scores(const ForestModel& model,
                                    const std::vector<DailySample>& samples) {
  std::vector<double> scores;
  scores.reserve(samples.size());
  for (const auto& s : samples) scores.push_back(-anomaly_score(model, s) - model.offset());
  return scores;
}

}  // namespace driftbench::driftstats

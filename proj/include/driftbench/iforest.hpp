#pragma once

#include <cstdint>
#include <vector>

namespace driftbench::driftstats {

struct ForestHyperparams {
  int n_estimators = 100;
  double contamination = 0.10;
  int max_samples = 0;        // 0 = auto = min(256, n); larger values clamp to n
  double max_features = 1.0;  // fraction of features considered per tree
  std::uint64_t random_state = 42;

  void validate() const;
};

// Arena-allocated isolation tree. Internal nodes carry a split; leaves keep
// only the number of training samples that reached them.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;   // arena indices; -1 marks a leaf
  int right = -1;
  int size = 0;

  bool is_leaf() const { return left < 0; }
};

struct IsolationTree {
  std::vector<TreeNode> nodes;  // node 0 is the root
};

struct DailySample {
  int day_index = 0;
  std::vector<double> features;
};

// Average path length of an unsuccessful binary-search-tree lookup over n
// samples; normalizes isolation depths. Follows the reference scoring
// conventions: 0 for n <= 1 and exactly 1 for n == 2.
double c_norm(std::int64_t n);

// Score from an already-averaged path length: 2^(-mean_path / c(n)).
double anomaly_score_from_path(double mean_path, std::int64_t n);

class ForestModel {
 public:
  ForestModel(std::vector<IsolationTree> trees, ForestHyperparams hyper,
              int samples_per_tree, std::size_t n_features, double offset)
      : trees_(std::move(trees)),
        hyper_(hyper),
        samples_per_tree_(samples_per_tree),
        n_features_(n_features),
        offset_(offset) {}

  const std::vector<IsolationTree>& trees() const { return trees_; }
  const ForestHyperparams& hyper() const { return hyper_; }
  int samples_per_tree() const { return samples_per_tree_; }
  std::size_t n_features() const { return n_features_; }
  double offset() const { return offset_; }

 private:
  std::vector<IsolationTree> trees_;
  ForestHyperparams hyper_;
  int samples_per_tree_ = 0;  // the n of the score normalizer
  std::size_t n_features_ = 0;
  double offset_ = 0.0;
};

// Path length h(x) through one tree: edges from the root to the reached
// leaf plus c_norm(leaf size).
double path_length(const IsolationTree& tree, const std::vector<double>& features);

// Builds n_estimators trees on subsamples drawn without replacement from the
// lexicographically sorted sample list (tree i uses RngStream(random_state,
// i)), then fixes the signed-score offset so that the contamination fraction
// of training points is flagged.
ForestModel fit_forest(const std::vector<DailySample>& samples,
                       const ForestHyperparams& hyper);

// Anomaly score in [0, 1]; values near 1 are outliers.
double anomaly_score(const ForestModel& model, const DailySample& sample);

// Signed scores: -anomaly_score(x) - offset. Negative means flagged.
std::vector<double> decision_scores(const ForestModel& model,
                                    const std::vector<DailySample>& samples);

}  // namespace driftbench::driftstats

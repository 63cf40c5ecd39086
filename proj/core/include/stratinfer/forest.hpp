#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace stratinfer {

struct ForestOptions {
  std::size_t n_trees = 50;
  std::size_t max_depth = 4;
  /// Features tried per split; 0 selects ceil(sqrt(n_features)).
  std::size_t mtry = 0;
  std::size_t min_samples_split = 2;
  std::uint64_t seed = 0;
};

/// Seeded bootstrap ensemble of axis-aligned Gini decision trees.
class RandomForest {
 public:
  /// Rows of `x` are samples; labels lie in [0, n_classes).
  void fit(const std::vector<std::vector<double>>& x, std::span<const std::size_t> y, std::size_t n_classes,
           const ForestOptions& options = {});

  /// Averaged leaf class frequencies.
  std::vector<double> predict_proba(std::span<const double> features) const;
  /// Most probable class, lowest index on ties.
  std::size_t predict(std::span<const double> features) const;

  std::size_t n_classes() const noexcept { return n_classes_; }
  std::size_t n_trees() const noexcept { return trees_.size(); }

 private:
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    std::size_t left = 0;
    std::size_t right = 0;
    std::vector<double> distribution;
  };
  using Tree = std::vector<Node>;

  std::size_t n_classes_ = 0;
  std::vector<Tree> trees_;
};

}  // namespace stratinfer

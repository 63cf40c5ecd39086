#include "stratinfer/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "stratinfer/error.hpp"

namespace stratinfer {

namespace {

struct Builder {
  const std::vector<std::vector<double>>& x;
  std::span<const std::size_t> y;
  std::size_t n_classes;
  const ForestOptions& options;
  std::size_t mtry;
  std::mt19937_64& rng;

  std::vector<double> counts(const std::vector<std::size_t>& rows) const {
    std::vector<double> c(n_classes, 0.0);
    for (std::size_t r : rows) c[y[r]] += 1.0;
    return c;
  }

  static double gini(const std::vector<double>& c, double total) {
    if (total <= 0.0) return 0.0;
    double s = 1.0;
    for (double v : c) s -= (v / total) * (v / total);
    return s;
  }
};

}  // namespace

void RandomForest::fit(const std::vector<std::vector<double>>& x, std::span<const std::size_t> y,
                       std::size_t n_classes, const ForestOptions& options) {
  if (x.empty() || x.size() != y.size()) throw Error(ErrorCode::InvalidParam, "forest: bad training shape");
  if (n_classes == 0 || options.n_trees == 0) throw Error(ErrorCode::InvalidParam, "forest: empty model");
  const std::size_t d = x.front().size();
  for (const auto& row : x) {
    if (row.size() != d) throw Error(ErrorCode::InvalidParam, "forest: ragged feature rows");
  }
  for (std::size_t label : y) {
    if (label >= n_classes) throw Error(ErrorCode::InvalidParam, "forest: label out of range");
  }

  n_classes_ = n_classes;
  trees_.clear();
  std::mt19937_64 rng(options.seed);
  const std::size_t mtry =
      std::clamp<std::size_t>(options.mtry ? options.mtry : static_cast<std::size_t>(std::ceil(std::sqrt(d))), 1, d);
  Builder b{x, y, n_classes, options, mtry, rng};

  for (std::size_t tree_index = 0; tree_index < options.n_trees; ++tree_index) {
    std::vector<std::size_t> sample(x.size());
    for (auto& s : sample) s = static_cast<std::size_t>(rng() % x.size());

    Tree tree;
    struct Pending {
      std::size_t node;
      std::vector<std::size_t> rows;
      std::size_t depth;
    };
    tree.push_back(Node{});
    std::vector<Pending> stack{{0, sample, 0}};
    while (!stack.empty()) {
      Pending job = std::move(stack.back());
      stack.pop_back();
      const std::vector<double> c = b.counts(job.rows);
      const double total = static_cast<double>(job.rows.size());
      const double parent = Builder::gini(c, total);

      int best_feature = -1;
      double best_threshold = 0.0;
      double best_score = parent - 1e-12;
      if (job.depth < options.max_depth && job.rows.size() >= options.min_samples_split && parent > 0.0) {
        std::vector<std::size_t> features(d);
        std::iota(features.begin(), features.end(), 0);
        std::shuffle(features.begin(), features.end(), rng);
        for (std::size_t fi = 0; fi < mtry; ++fi) {
          const std::size_t f = features[fi];
          std::vector<std::size_t> rows = job.rows;
          std::sort(rows.begin(), rows.end(), [&](std::size_t a, std::size_t c2) { return x[a][f] < x[c2][f]; });
          std::vector<double> left(n_classes, 0.0);
          std::vector<double> right = c;
          for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
            left[y[rows[k]]] += 1.0;
            right[y[rows[k]]] -= 1.0;
            const double lo = x[rows[k]][f];
            const double hi = x[rows[k + 1]][f];
            if (!(lo < hi)) continue;
            const double nl = static_cast<double>(k + 1);
            const double nr = total - nl;
            const double score = (nl * Builder::gini(left, nl) + nr * Builder::gini(right, nr)) / total;
            if (score < best_score) {
              best_score = score;
              best_feature = static_cast<int>(f);
              best_threshold = 0.5 * (lo + hi);
            }
          }
        }
      }

      if (best_feature < 0) {
        Node& leaf = tree[job.node];
        leaf.distribution = c;
        for (double& v : leaf.distribution) v /= total;
        continue;
      }
      std::vector<std::size_t> left_rows, right_rows;
      for (std::size_t r : job.rows) {
        (x[r][static_cast<std::size_t>(best_feature)] <= best_threshold ? left_rows : right_rows).push_back(r);
      }
      const std::size_t left_id = tree.size();
      tree.push_back(Node{});
      const std::size_t right_id = tree.size();
      tree.push_back(Node{});
      Node& node = tree[job.node];
      node.feature = best_feature;
      node.threshold = best_threshold;
      node.left = left_id;
      node.right = right_id;
      stack.push_back({right_id, std::move(right_rows), job.depth + 1});
      stack.push_back({left_id, std::move(left_rows), job.depth + 1});
    }
    trees_.push_back(std::move(tree));
  }
}

std::vector<double> RandomForest::predict_proba(std::span<const double> features) const {
  std::vector<double> out(n_classes_, 0.0);
  for (const Tree& tree : trees_) {
    std::size_t id = 0;
    while (tree[id].feature >= 0) {
      const Node& n = tree[id];
      id = features[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
    }
    for (std::size_t k = 0; k < n_classes_; ++k) out[k] += tree[id].distribution[k];
  }
  if (!trees_.empty()) {
    for (double& v : out) v /= static_cast<double>(trees_.size());
  }
  return out;
}

std::size_t RandomForest::predict(std::span<const double> features) const {
  const auto p = predict_proba(features);
  return static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
}

}  // namespace stratinfer

// forest.hpp — random forest classifier: bagging + gini splits over random
// feature subsets, depth-capped trees, leaf class-1 fractions.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "intraday/errors.hpp"

namespace intraday {

struct ForestParams {
    int n_trees{1000};
    int max_depth{10};
    int features_per_split{0};  // 0 = floor(sqrt(feature count))
    bool bootstrap{true};       // resample size n with replacement per tree
};

struct TreeNode {
    int split_feature{-1};  // -1 marks a leaf
    double split_threshold{0.0};
    int left{-1};
    int right{-1};
    double class1_fraction{0.0};  // meaningful on leaves

    bool is_leaf() const { return split_feature < 0; }
    bool operator==(const TreeNode&) const = default;
};

struct DecisionTree {
    std::vector<TreeNode> nodes;  // preorder, root first

    double predict(const double* row) const;
    int depth() const;
    bool operator==(const DecisionTree&) const = default;
};

struct RandomForestModel {
    int feature_count{0};
    std::vector<DecisionTree> trees;

    double predict_row(const double* row) const;  // mean leaf fraction over trees
    bool operator==(const RandomForestModel&) const = default;
};

struct SplitChoice {
    int feature{-1};
    double threshold{0.0};
    double impurity_decrease{0.0};
};

// Training-set view: row-major matrix plus labels; `sample_indices` selects
// the rows of one node.
struct SplitProblem {
    const double* x{nullptr};
    std::size_t feature_count{0};
    const uint8_t* y{nullptr};
    std::span<const int> sample_indices;
};

// Best (feature, midpoint threshold) by weighted child gini over the given
// candidates; ties go to the lowest feature index, then lowest threshold.
// Throws NoValidSplitError when every candidate is constant on the node and
// Error when the node is pure or has fewer than 2 samples.
SplitChoice gini_best_split(const SplitProblem& problem, std::span<const int> candidate_features);

// Trees are seeded individually from (seed, "tree", index), so fitting is
// reproducible and, with threads > 1, bit-identical to sequential fitting.
RandomForestModel fit_forest(const double* x, const uint8_t* y, std::size_t n_samples,
                             std::size_t n_features, const ForestParams& params, uint64_t seed,
                             int threads = 1);

}  // namespace intraday

#include "intraday/forest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <numeric>
#include <thread>

#include "intraday/rng.hpp"

namespace intraday {

double DecisionTree::predict(const double* row) const {
    int i = 0;
    while (!nodes[static_cast<std::size_t>(i)].is_leaf()) {
        const TreeNode& node = nodes[static_cast<std::size_t>(i)];
        i = row[node.split_feature] <= node.split_threshold ? node.left : node.right;
    }
    return nodes[static_cast<std::size_t>(i)].class1_fraction;
}

namespace {

int depth_below(const std::vector<TreeNode>& nodes, int i) {
    const TreeNode& node = nodes[static_cast<std::size_t>(i)];
    if (node.is_leaf()) return 0;
    return 1 + std::max(depth_below(nodes, node.left), depth_below(nodes, node.right));
}

}  // namespace

int DecisionTree::depth() const { return nodes.empty() ? 0 : depth_below(nodes, 0); }

double RandomForestModel::predict_row(const double* row) const {
    double sum = 0.0;
    for (const DecisionTree& tree : trees) sum += tree.predict(row);
    return sum / static_cast<double>(trees.size());
}

namespace {

struct WeightedValue {
    double value;
    uint32_t weight;
    uint8_t label;
};

// Monotone map from finite doubles to uint64: a < b iff key(a) < key(b).
inline uint64_t order_key(double v) {
    uint64_t u;
    std::memcpy(&u, &v, sizeof u);
    return (u & 0x8000000000000000ULL) ? ~u : (u | 0x8000000000000000ULL);
}

// LSD radix sort by order_key(value). Ordering of equal values is
// irrelevant downstream: thresholds only arise between distinct values and
// the scan uses cumulative counts.
void sort_by_value(std::vector<WeightedValue>& a, std::vector<WeightedValue>& tmp) {
    const std::size_t n = a.size();
    if (n < 4096) {  // below this the per-pass histogram overhead loses
        std::sort(a.begin(), a.end(),
                  [](const WeightedValue& x, const WeightedValue& y) { return x.value < y.value; });
        return;
    }
    constexpr int kBits = 11;
    constexpr std::size_t kBuckets = std::size_t{1} << kBits;
    constexpr uint64_t kMask = kBuckets - 1;
    tmp.resize(n);
    uint32_t hist[kBuckets];
    for (int shift = 0; shift < 64; shift += kBits) {
        std::fill(hist, hist + kBuckets, 0u);
        for (const WeightedValue& e : a) ++hist[(order_key(e.value) >> shift) & kMask];
        if (hist[(order_key(a.front().value) >> shift) & kMask] == n) continue;  // digit constant
        uint32_t offset = 0;
        for (std::size_t b = 0; b < kBuckets; ++b) {
            const uint32_t count = hist[b];
            hist[b] = offset;
            offset += count;
        }
        for (const WeightedValue& e : a) tmp[hist[(order_key(e.value) >> shift) & kMask]++] = e;
        a.swap(tmp);
    }
}

// Shared split-search core. `gather` fills the (value, weight, label) column
// of one feature for the node's samples. Candidates must be iterated in
// ascending feature order; keeping only strictly better splits then realizes
// the (lowest feature, lowest threshold) tie rule.
template <typename GatherFn>
SplitChoice best_split_core(GatherFn&& gather, const std::vector<int>& candidates,
                            double total_weight, double total_ones,
                            std::vector<WeightedValue>& scratch, std::vector<WeightedValue>& tmp) {
    const double parent_gini = 1.0 - (total_ones / total_weight) * (total_ones / total_weight) -
                               ((total_weight - total_ones) / total_weight) *
                                   ((total_weight - total_ones) / total_weight);

    SplitChoice best;
    double best_weighted = std::numeric_limits<double>::infinity();

    for (int f : candidates) {
        gather(f, scratch);
        sort_by_value(scratch, tmp);
        if (scratch.front().value == scratch.back().value) continue;  // constant on this node

        double left_w = 0.0, left_ones = 0.0;
        for (std::size_t k = 0; k + 1 < scratch.size(); ++k) {
            left_w += scratch[k].weight;
            left_ones += scratch[k].label ? static_cast<double>(scratch[k].weight) : 0.0;
            if (scratch[k].value == scratch[k + 1].value) continue;

            const double right_w = total_weight - left_w;
            const double right_ones = total_ones - left_ones;
            const double gini_l = 1.0 - (left_ones / left_w) * (left_ones / left_w) -
                                  ((left_w - left_ones) / left_w) * ((left_w - left_ones) / left_w);
            const double gini_r =
                1.0 - (right_ones / right_w) * (right_ones / right_w) -
                ((right_w - right_ones) / right_w) * ((right_w - right_ones) / right_w);
            const double weighted = (left_w * gini_l + right_w * gini_r) / total_weight;
            if (weighted < best_weighted) {
                best_weighted = weighted;
                best.feature = f;
                best.threshold = 0.5 * (scratch[k].value + scratch[k + 1].value);
            }
        }
    }

    if (best.feature < 0) {
        throw NoValidSplitError("all candidate features constant on this node");
    }
    best.impurity_decrease = parent_gini - best_weighted;
    return best;
}

}  // namespace

SplitChoice gini_best_split(const SplitProblem& problem, std::span<const int> candidate_features) {
    const std::size_t n = problem.sample_indices.size();
    if (n < 2) {
        throw Error("gini_best_split requires at least 2 samples");
    }
    double ones = 0.0;
    for (int i : problem.sample_indices) ones += problem.y[i];
    if (ones == 0.0 || ones == static_cast<double>(n)) {
        throw Error("gini_best_split requires both classes present");
    }

    std::vector<int> candidates(candidate_features.begin(), candidate_features.end());
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    std::vector<WeightedValue> scratch, tmp;
    auto gather = [&problem, n](int f, std::vector<WeightedValue>& out) {
        out.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            const int i = problem.sample_indices[k];
            out[k] = {problem.x[static_cast<std::size_t>(i) * problem.feature_count +
                                static_cast<std::size_t>(f)],
                      1, problem.y[i]};
        }
    };
    return best_split_core(gather, candidates, static_cast<double>(n), ones, scratch, tmp);
}

namespace {

// Per-tree builder over column-major features and bootstrap weights. Nodes
// partition a shared id array in place; only ids with positive weight are
// kept, so bootstrap duplicates cost nothing extra.
struct TreeBuilder {
    const double* columns;  // [feature * n_samples + sample]
    std::size_t n_samples;
    const uint8_t* y;
    const uint32_t* weights;
    std::size_t n_features;
    int max_depth;
    int n_candidates;
    Rng* rng;
    std::vector<int> ids;
    std::vector<int> feature_pool;
    std::vector<int> candidates;
    std::vector<WeightedValue> scratch;
    std::vector<WeightedValue> tmp;
    DecisionTree tree;

    int build(int lo, int hi, int depth) {
        double total = 0.0, ones = 0.0;
        for (int k = lo; k < hi; ++k) {
            const int i = ids[static_cast<std::size_t>(k)];
            total += weights[i];
            if (y[i]) ones += weights[i];
        }

        const int node_index = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        auto make_leaf = [&] {
            tree.nodes[static_cast<std::size_t>(node_index)].class1_fraction = ones / total;
            return node_index;
        };

        if (ones == 0.0 || ones == total || total < 2.0 || depth == max_depth) return make_leaf();

        // Partial Fisher-Yates draw of distinct candidate features; rng cost
        // is fixed per node so tree structure depends only on the seed.
        for (int j = 0; j < n_candidates; ++j) {
            const auto pick =
                j + static_cast<int>(rng->uniform_index(feature_pool.size() - static_cast<std::size_t>(j)));
            std::swap(feature_pool[static_cast<std::size_t>(j)], feature_pool[static_cast<std::size_t>(pick)]);
        }
        candidates.assign(feature_pool.begin(), feature_pool.begin() + n_candidates);
        std::sort(candidates.begin(), candidates.end());

        SplitChoice split;
        try {
            auto gather = [this, lo, hi](int f, std::vector<WeightedValue>& out) {
                const double* column = columns + static_cast<std::size_t>(f) * n_samples;
                out.resize(static_cast<std::size_t>(hi - lo));
                for (int k = lo; k < hi; ++k) {
                    const int i = ids[static_cast<std::size_t>(k)];
                    out[static_cast<std::size_t>(k - lo)] = {column[i], weights[i], y[i]};
                }
            };
            split = best_split_core(gather, candidates, total, ones, scratch, tmp);
        } catch (const NoValidSplitError&) {
            return make_leaf();
        }

        const double* column = columns + static_cast<std::size_t>(split.feature) * n_samples;
        auto mid_it = std::partition(ids.begin() + lo, ids.begin() + hi,
                                     [&](int i) { return column[i] <= split.threshold; });
        const int mid = static_cast<int>(mid_it - ids.begin());

        tree.nodes[static_cast<std::size_t>(node_index)].split_feature = split.feature;
        tree.nodes[static_cast<std::size_t>(node_index)].split_threshold = split.threshold;
        const int left = build(lo, mid, depth + 1);
        const int right = build(mid, hi, depth + 1);
        tree.nodes[static_cast<std::size_t>(node_index)].left = left;
        tree.nodes[static_cast<std::size_t>(node_index)].right = right;
        return node_index;
    }
};

}  // namespace

RandomForestModel fit_forest(const double* x, const uint8_t* y, std::size_t n_samples,
                             std::size_t n_features, const ForestParams& params, uint64_t seed,
                             int threads) {
    if (n_samples == 0) {
        throw EmptyTrainingSetError("forest fit on an empty training set");
    }
    if (n_features == 0) {
        throw ShapeMismatchError("forest fit with zero features");
    }
    int m = params.features_per_split;
    if (m <= 0) m = static_cast<int>(std::floor(std::sqrt(static_cast<double>(n_features))));
    m = std::min(m, static_cast<int>(n_features));

    // Column-major copy: node gathers then touch one compact array per
    // feature instead of striding across 93-wide rows.
    std::vector<double> columns(n_features * n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        for (std::size_t f = 0; f < n_features; ++f) {
            columns[f * n_samples + i] = x[i * n_features + f];
        }
    }

    RandomForestModel model;
    model.feature_count = static_cast<int>(n_features);
    model.trees.resize(static_cast<std::size_t>(params.n_trees));

    auto fit_one = [&](int tree_index) {
        Rng rng(seed, "tree", static_cast<uint64_t>(tree_index));

        // Bootstrap as per-sample multiplicities; the split search weights
        // unique rows, which is exactly equivalent to duplicating them.
        std::vector<uint32_t> weights(n_samples, 0);
        if (params.bootstrap) {
            for (std::size_t d = 0; d < n_samples; ++d) {
                weights[rng.uniform_index(n_samples)] += 1;
            }
        } else {
            std::fill(weights.begin(), weights.end(), 1);
        }

        TreeBuilder builder{columns.data(), n_samples, y, weights.data(), n_features,
                            params.max_depth, m, &rng, {}, {}, {}, {}, {}, {}};
        builder.ids.reserve(n_samples);
        for (std::size_t i = 0; i < n_samples; ++i) {
            if (weights[i] > 0) builder.ids.push_back(static_cast<int>(i));
        }
        builder.feature_pool.resize(n_features);
        std::iota(builder.feature_pool.begin(), builder.feature_pool.end(), 0);
        builder.build(0, static_cast<int>(builder.ids.size()), 0);
        model.trees[static_cast<std::size_t>(tree_index)] = std::move(builder.tree);
    };

    threads = std::max(1, std::min(threads, params.n_trees));
    if (threads == 1) {
        for (int i = 0; i < params.n_trees; ++i) fit_one(i);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        pool.reserve(static_cast<std::size_t>(threads));
        for (int w = 0; w < threads; ++w) {
            pool.emplace_back([&] {
                for (int i = next.fetch_add(1); i < params.n_trees; i = next.fetch_add(1)) fit_one(i);
            });
        }
        for (auto& worker : pool) worker.join();
    }
    return model;
}

}  // namespace intraday

#include "tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace socon::detail {

namespace {

struct SortedSample {
    double value;
    std::size_t row;
};

std::vector<int> candidate_features(std::size_t cols, int mtry, Rng* rng) {
    std::vector<int> all(cols);
    std::iota(all.begin(), all.end(), 0);
    if (mtry <= 0 || static_cast<std::size_t>(mtry) >= cols || rng == nullptr) return all;
    // Partial Fisher-Yates, then ascending order so gain ties break by index.
    for (int i = 0; i < mtry; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng->below(cols - i));
        std::swap(all[i], all[j]);
    }
    all.resize(mtry);
    std::sort(all.begin(), all.end());
    return all;
}

struct ClassSplit {
    bool found = false;
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
};

}  // namespace

Tree grow_classification_tree(const double* x, std::size_t cols, const std::uint8_t* y,
                              const double* weights, std::span<const std::size_t> samples,
                              const TreeOptions& opts, Rng* rng) {
    Tree tree;
    std::vector<std::size_t> idx(samples.begin(), samples.end());

    struct Frame {
        std::size_t begin, end;
        int depth;
        int node;
    };

    auto weight_of = [&](std::size_t r) { return weights == nullptr ? 1.0 : weights[r]; };

    auto make_leaf = [&](std::size_t begin, std::size_t end) {
        double pos = 0.0, total = 0.0;
        for (std::size_t i = begin; i < end; ++i) {
            const double w = weight_of(idx[i]);
            total += w;
            if (y[idx[i]] != 0) pos += w;
        }
        TreeNode leaf;
        leaf.value = total > 0.0 ? pos / total : 0.5;
        return leaf;
    };

    tree.nodes.push_back(TreeNode{});
    std::vector<Frame> stack{{0, idx.size(), 0, 0}};
    std::vector<SortedSample> sorted;

    while (!stack.empty()) {
        const Frame f = stack.back();
        stack.pop_back();
        const std::size_t n = f.end - f.begin;

        double pos = 0.0, total = 0.0;
        for (std::size_t i = f.begin; i < f.end; ++i) {
            const double w = weight_of(idx[i]);
            total += w;
            if (y[idx[i]] != 0) pos += w;
        }
        const bool pure = pos <= 0.0 || pos >= total;
        const bool depth_capped = opts.max_depth > 0 && f.depth >= opts.max_depth;
        if (pure || depth_capped || n < static_cast<std::size_t>(opts.min_samples_split) || total <= 0.0) {
            tree.nodes[f.node] = make_leaf(f.begin, f.end);
            continue;
        }

        const double p = pos / total;
        const double parent_impurity = 2.0 * p * (1.0 - p);

        ClassSplit best;
        for (int feat : candidate_features(cols, opts.mtry, rng)) {
            sorted.clear();
            sorted.reserve(n);
            for (std::size_t i = f.begin; i < f.end; ++i) {
                sorted.push_back({x[idx[i] * cols + feat], idx[i]});
            }
            std::sort(sorted.begin(), sorted.end(),
                      [](const SortedSample& a, const SortedSample& b) { return a.value < b.value; });
            if (sorted.front().value == sorted.back().value) continue;

            double left_pos = 0.0, left_total = 0.0;
            for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
                const double w = weight_of(sorted[i].row);
                left_total += w;
                if (y[sorted[i].row] != 0) left_pos += w;
                if (sorted[i].value == sorted[i + 1].value) continue;

                const double right_total = total - left_total;
                const double right_pos = pos - left_pos;
                if (left_total <= 0.0 || right_total <= 0.0) continue;
                const double pl = left_pos / left_total;
                const double pr = right_pos / right_total;
                const double child =
                    (left_total * 2.0 * pl * (1.0 - pl) + right_total * 2.0 * pr * (1.0 - pr)) / total;
                const double gain = parent_impurity - child;
                if (gain > best.gain + 1e-15) {
                    best.found = true;
                    best.gain = gain;
                    best.feature = feat;
                    best.threshold = sorted[i].value + 0.5 * (sorted[i + 1].value - sorted[i].value);
                }
            }
        }

        if (!best.found) {
            tree.nodes[f.node] = make_leaf(f.begin, f.end);
            continue;
        }

        const auto mid = std::stable_partition(
            idx.begin() + f.begin, idx.begin() + f.end,
            [&](std::size_t r) { return x[r * cols + best.feature] <= best.threshold; });
        const std::size_t split_at = static_cast<std::size_t>(mid - idx.begin());
        if (split_at == f.begin || split_at == f.end) {
            tree.nodes[f.node] = make_leaf(f.begin, f.end);
            continue;
        }

        TreeNode node;
        node.feature = best.feature;
        node.threshold = best.threshold;
        node.left = static_cast<int>(tree.nodes.size());
        node.right = node.left + 1;
        tree.nodes[f.node] = node;
        tree.nodes.emplace_back();
        tree.nodes.emplace_back();
        stack.push_back({split_at, f.end, f.depth + 1, node.right});
        stack.push_back({f.begin, split_at, f.depth + 1, node.left});
    }
    return tree;
}

Tree grow_gradient_tree(const double* x, std::size_t cols, const double* grad, const double* hess,
                        std::span<const std::size_t> samples, const TreeOptions& opts,
                        double reg_lambda, double min_gain) {
    Tree tree;
    std::vector<std::size_t> idx(samples.begin(), samples.end());

    struct Frame {
        std::size_t begin, end;
        int depth;
        int node;
    };

    auto leaf_value = [&](double g, double h) { return -g / (h + reg_lambda); };
    auto score = [&](double g, double h) { return g * g / (h + reg_lambda); };

    tree.nodes.push_back(TreeNode{});
    std::vector<Frame> stack{{0, idx.size(), 0, 0}};
    std::vector<SortedSample> sorted;

    while (!stack.empty()) {
        const Frame f = stack.back();
        stack.pop_back();
        const std::size_t n = f.end - f.begin;

        double g_sum = 0.0, h_sum = 0.0;
        for (std::size_t i = f.begin; i < f.end; ++i) {
            g_sum += grad[idx[i]];
            h_sum += hess[idx[i]];
        }

        const bool depth_capped = opts.max_depth > 0 && f.depth >= opts.max_depth;
        if (depth_capped || n < static_cast<std::size_t>(opts.min_samples_split)) {
            tree.nodes[f.node].value = leaf_value(g_sum, h_sum);
            continue;
        }

        bool found = false;
        int best_feature = -1;
        double best_threshold = 0.0;
        double best_gain = 0.0;
        for (std::size_t feat = 0; feat < cols; ++feat) {
            sorted.clear();
            sorted.reserve(n);
            for (std::size_t i = f.begin; i < f.end; ++i) {
                sorted.push_back({x[idx[i] * cols + feat], idx[i]});
            }
            std::sort(sorted.begin(), sorted.end(),
                      [](const SortedSample& a, const SortedSample& b) { return a.value < b.value; });
            if (sorted.front().value == sorted.back().value) continue;

            double gl = 0.0, hl = 0.0;
            for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
                gl += grad[sorted[i].row];
                hl += hess[sorted[i].row];
                if (sorted[i].value == sorted[i + 1].value) continue;
                const double gain =
                    0.5 * (score(gl, hl) + score(g_sum - gl, h_sum - hl) - score(g_sum, h_sum)) - min_gain;
                if (gain > best_gain + 1e-15) {
                    found = true;
                    best_gain = gain;
                    best_feature = static_cast<int>(feat);
                    best_threshold = sorted[i].value + 0.5 * (sorted[i + 1].value - sorted[i].value);
                }
            }
        }

        if (!found || best_gain <= 0.0) {
            tree.nodes[f.node].value = leaf_value(g_sum, h_sum);
            continue;
        }

        const auto mid = std::stable_partition(
            idx.begin() + f.begin, idx.begin() + f.end,
            [&](std::size_t r) { return x[r * cols + best_feature] <= best_threshold; });
        const std::size_t split_at = static_cast<std::size_t>(mid - idx.begin());
        if (split_at == f.begin || split_at == f.end) {
            tree.nodes[f.node].value = leaf_value(g_sum, h_sum);
            continue;
        }

        TreeNode node;
        node.feature = best_feature;
        node.threshold = best_threshold;
        node.left = static_cast<int>(tree.nodes.size());
        node.right = node.left + 1;
        node.value = 0.0;
        tree.nodes[f.node] = node;
        tree.nodes.emplace_back();
        tree.nodes.emplace_back();
        stack.push_back({split_at, f.end, f.depth + 1, node.right});
        stack.push_back({f.begin, split_at, f.depth + 1, node.left});
    }
    return tree;
}

}  // namespace socon::detail

#pragma once

// Internal CART-style trees shared by the forest and boosting learners.
// Not installed; the public surface is socon/models.hpp.

#include <cstdint>
#include <span>
#include <vector>

#include "socon/rng.hpp"

namespace socon::detail {

struct TreeNode {
    int feature = -1;       // -1 marks a leaf
    double threshold = 0.0; // go left when x[feature] <= threshold
    int left = -1;
    int right = -1;
    double value = 0.0;     // leaf payload: class-1 frequency or regression weight
};

struct Tree {
    std::vector<TreeNode> nodes;

    double predict(const double* x) const {
        int i = 0;
        while (nodes[i].feature >= 0) {
            i = x[nodes[i].feature] <= nodes[i].threshold ? nodes[i].left : nodes[i].right;
        }
        return nodes[i].value;
    }
    bool empty() const { return nodes.empty(); }
};

struct TreeOptions {
    int max_depth = 0;          // 0 = unbounded
    int min_samples_split = 2;
    int mtry = 0;               // candidate features per split; 0 = all
};

// Weighted binary classification tree (Gini impurity). Leaves hold the
// weighted positive-class frequency. Ties in split gain resolve toward the
// lower feature index, then the lower threshold. `rng` drives the per-split
// feature subsample and may be null when mtry == 0.
Tree grow_classification_tree(const double* x, std::size_t cols, const std::uint8_t* y,
                              const double* weights, std::span<const std::size_t> samples,
                              const TreeOptions& opts, Rng* rng);

// Second-order regression tree on per-row gradients/hessians. A split is kept
// when gain = 0.5*(GL^2/(HL+reg) + GR^2/(HR+reg) - G^2/(H+reg)) - min_gain
// is positive; leaves hold -G/(H+reg).
Tree grow_gradient_tree(const double* x, std::size_t cols, const double* grad, const double* hess,
                        std::span<const std::size_t> samples, const TreeOptions& opts,
                        double reg_lambda, double min_gain);

}  // namespace socon::detail

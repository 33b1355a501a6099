#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "socon/matrix.hpp"
#include "socon/preprocess.hpp"

namespace socon {

enum class ModelFamily : std::uint8_t {
    logistic_l2,
    random_forest,
    gradient_boosted_trees,
    adaptive_boosting,
    majority_baseline,
    random_baseline,
};

std::string_view to_string(ModelFamily f);
std::optional<ModelFamily> parse_model_family(std::string_view s);
bool is_baseline(ModelFamily f);

struct ModelSpec {
    ModelFamily family = ModelFamily::random_forest;
    std::map<std::string, double> hyperparameters;
    std::uint64_t rng_seed = 0;

    // Family defaults:
    //   logistic_l2: l2_strength 0.1, max_iterations 300, tolerance 1e-6
    //   random_forest: n_trees 100, max_depth 16 (0 = unbounded),
    //                  min_samples_split 2, features_per_split 0 (= sqrt),
    //                  bootstrap 1
    //   gradient_boosted_trees: learning_rate 0.3, min_split_loss 0,
    //                  max_depth 6, l2_leaf_penalty 1, n_rounds 200
    //   adaptive_boosting: n_rounds 100, stump_depth 1
    static ModelSpec defaults(ModelFamily family);

    double param(const std::string& name) const;
    // Rejects hyperparameter names that do not belong to the family.
    void validate() const;
};

// Borrowed dense view; y may be null when only predicting.
struct DataView {
    const double* x = nullptr;
    std::size_t rows = 0;
    std::size_t cols = 0;
    const std::uint8_t* y = nullptr;
};
DataView view_of(const FeatureMatrix& m);

namespace detail {
struct ModelImpl;
}

class TrainedModel {
public:
    TrainedModel() = default;

    const ModelSpec& spec() const { return spec_; }
    const std::vector<std::string>& feature_names() const { return feature_names_; }

    // Scores in [0,1], one per row. The FeatureMatrix overload enforces the
    // schema binding; the raw overload trusts the caller's column order.
    std::vector<double> predict_proba(const FeatureMatrix& m) const;
    std::vector<double> predict_proba(DataView data) const;

    // Versioned JSON document (family, hyperparameters, parameters).
    std::string to_json() const;
    static TrainedModel from_json(const std::string& text);

private:
    friend TrainedModel train(const ModelSpec&, DataView, std::vector<std::string>, int);

    ModelSpec spec_;
    std::vector<std::string> feature_names_;
    std::shared_ptr<const detail::ModelImpl> impl_;
};

// Trains a model; deterministic given spec.rng_seed. Trainable families require
// both classes in y. `jobs` parallelizes ensemble members with a reduction in
// fixed member order.
TrainedModel train(const ModelSpec& spec, DataView data, std::vector<std::string> feature_names,
                   int jobs = 1);
TrainedModel train(const ModelSpec& spec, const FeatureMatrix& m, int jobs = 1);

// The stock hyperparameter grid searched when tuning is enabled.
std::vector<ModelSpec> default_grid(ModelFamily family);

// Exhaustive grid search maximizing mean validation AUC over user-disjoint
// folds of the training matrix; ties break toward the earlier grid point.
// When smote_cfg is given, each fold's training part is oversampled before
// fitting (validation rows never are).
ModelSpec grid_search(ModelFamily family, std::span<const ModelSpec> grid, const FeatureMatrix& train,
                      int folds = 3, std::uint64_t seed = 0,
                      const PreprocessConfig* smote_cfg = nullptr, int jobs = 1);

// Mean penalized negative log-likelihood of a logistic model and its gradient;
// params = [w_0..w_{d-1}, bias], the bias is unpenalized. Exposed so the
// analytic gradient can be checked against finite differences.
double logistic_l2_objective(std::span<const double> params, DataView data, double l2_strength,
                             std::span<double> grad_out);

}  // namespace socon

#include "socon/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <variant>

#include "json.hpp"
#include "lbfgs.hpp"
#include "socon/common.hpp"
#include "socon/metrics.hpp"
#include "socon/rng.hpp"
#include "socon/splits.hpp"
#include "tree.hpp"

namespace socon {

using nlohmann::json;

namespace {

constexpr std::string_view kFamilyNames[] = {
    "logistic_l2",       "random_forest", "gradient_boosted_trees",
    "adaptive_boosting", "majority_baseline", "random_baseline",
};

double sigmoid(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

const std::set<std::string>& allowed_params(ModelFamily f) {
    static const std::set<std::string> logistic = {"l2_strength", "max_iterations", "tolerance"};
    static const std::set<std::string> forest = {"n_trees", "max_depth", "min_samples_split",
                                                 "features_per_split", "bootstrap"};
    static const std::set<std::string> gbt = {"learning_rate", "min_split_loss", "max_depth",
                                              "l2_leaf_penalty", "n_rounds"};
    static const std::set<std::string> ada = {"n_rounds", "stump_depth"};
    static const std::set<std::string> none = {};
    switch (f) {
        case ModelFamily::logistic_l2: return logistic;
        case ModelFamily::random_forest: return forest;
        case ModelFamily::gradient_boosted_trees: return gbt;
        case ModelFamily::adaptive_boosting: return ada;
        default: return none;
    }
}

}  // namespace

std::string_view to_string(ModelFamily f) { return kFamilyNames[static_cast<int>(f)]; }

std::optional<ModelFamily> parse_model_family(std::string_view s) {
    for (int i = 0; i < 6; ++i) {
        if (kFamilyNames[i] == s) return static_cast<ModelFamily>(i);
    }
    return std::nullopt;
}

bool is_baseline(ModelFamily f) {
    return f == ModelFamily::majority_baseline || f == ModelFamily::random_baseline;
}

ModelSpec ModelSpec::defaults(ModelFamily family) {
    ModelSpec spec;
    spec.family = family;
    switch (family) {
        case ModelFamily::logistic_l2:
            spec.hyperparameters = {{"l2_strength", 0.1}, {"max_iterations", 300}, {"tolerance", 1e-6}};
            break;
        case ModelFamily::random_forest:
            spec.hyperparameters = {{"n_trees", 100},
                                    {"max_depth", 16},
                                    {"min_samples_split", 2},
                                    {"features_per_split", 0},
                                    {"bootstrap", 1}};
            break;
        case ModelFamily::gradient_boosted_trees:
            spec.hyperparameters = {{"learning_rate", 0.3},
                                    {"min_split_loss", 0},
                                    {"max_depth", 6},
                                    {"l2_leaf_penalty", 1},
                                    {"n_rounds", 200}};
            break;
        case ModelFamily::adaptive_boosting:
            spec.hyperparameters = {{"n_rounds", 100}, {"stump_depth", 1}};
            break;
        case ModelFamily::majority_baseline:
        case ModelFamily::random_baseline:
            break;
    }
    return spec;
}

double ModelSpec::param(const std::string& name) const {
    auto it = hyperparameters.find(name);
    if (it != hyperparameters.end()) return it->second;
    const ModelSpec def = defaults(family);
    auto dit = def.hyperparameters.find(name);
    if (dit == def.hyperparameters.end()) {
        throw Error("model spec has no hyperparameter '" + name + "'");
    }
    return dit->second;
}

void ModelSpec::validate() const {
    const auto& allowed = allowed_params(family);
    for (const auto& [name, value] : hyperparameters) {
        if (allowed.find(name) == allowed.end()) {
            throw ValidationError("hyperparameter '" + name + "' does not belong to family " +
                                  std::string(to_string(family)));
        }
        if (!std::isfinite(value)) {
            throw ValidationError("hyperparameter '" + name + "' must be finite");
        }
    }
}

DataView view_of(const FeatureMatrix& m) {
    return DataView{m.values.data(), m.rows(), m.cols(), m.label.data()};
}

// ---------------------------------------------------------------------------
// Internal parameter blocks

namespace detail {

struct LogisticParams {
    std::vector<double> weights;
    double bias = 0.0;
};

struct ForestParams {
    std::vector<Tree> trees;
};

struct GbtParams {
    double base_score = 0.0;
    double learning_rate = 0.3;
    std::vector<Tree> trees;
};

struct AdaParams {
    std::vector<double> alphas;
    std::vector<Tree> stumps;
};

struct MajorityParams {
    double score = 1.0;
};

struct RandomParams {
    std::uint64_t seed = 0;
};

struct ModelImpl {
    std::variant<LogisticParams, ForestParams, GbtParams, AdaParams, MajorityParams, RandomParams> params;
};

}  // namespace detail

using detail::ModelImpl;
using detail::Tree;
using detail::TreeOptions;

// ---------------------------------------------------------------------------
// Logistic regression

double logistic_l2_objective(std::span<const double> params, DataView data, double l2_strength,
                             std::span<double> grad_out) {
    const std::size_t d = data.cols;
    if (params.size() != d + 1 || grad_out.size() != d + 1) {
        throw Error("logistic_l2_objective: parameter size mismatch");
    }
    const double inv_n = 1.0 / static_cast<double>(data.rows);
    std::fill(grad_out.begin(), grad_out.end(), 0.0);
    double nll = 0.0;
    for (std::size_t r = 0; r < data.rows; ++r) {
        const double* x = data.x + r * d;
        double z = params[d];
        for (std::size_t j = 0; j < d; ++j) z += params[j] * x[j];
        const double y = data.y[r] != 0 ? 1.0 : 0.0;
        // log(1 + e^z) - y*z, computed stably.
        nll += (z > 0.0 ? z : 0.0) + std::log1p(std::exp(-std::abs(z))) - y * z;
        const double residual = sigmoid(z) - y;
        for (std::size_t j = 0; j < d; ++j) grad_out[j] += residual * x[j];
        grad_out[d] += residual;
    }
    nll *= inv_n;
    for (std::size_t j = 0; j <= d; ++j) grad_out[j] *= inv_n;
    double penalty = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        penalty += 0.5 * l2_strength * params[j] * params[j];
        grad_out[j] += l2_strength * params[j];
    }
    return nll + penalty;
}

namespace {

detail::LogisticParams train_logistic(const ModelSpec& spec, DataView data) {
    const double l2 = spec.param("l2_strength");
    const int max_iter = static_cast<int>(spec.param("max_iterations"));
    const double tol = spec.param("tolerance");
    if (l2 < 0.0) throw ValidationError("l2_strength must be >= 0");

    std::vector<double> x0(data.cols + 1, 0.0);
    auto fg = [&](const std::vector<double>& p, std::vector<double>& g) {
        return logistic_l2_objective(p, data, l2, g);
    };
    const auto res = detail::lbfgs_minimize(std::move(x0), fg, max_iter, tol);
    if (!res.converged) {
        warn("logistic_l2: stopped after " + std::to_string(res.iterations) +
             " iterations with gradient norm " + std::to_string(res.grad_norm));
    }
    detail::LogisticParams params;
    params.weights.assign(res.x.begin(), res.x.begin() + data.cols);
    params.bias = res.x[data.cols];
    return params;
}

// ---------------------------------------------------------------------------
// Random forest

detail::ForestParams train_forest(const ModelSpec& spec, DataView data, int jobs) {
    const int n_trees = static_cast<int>(spec.param("n_trees"));
    if (n_trees < 1) throw ValidationError("n_trees must be >= 1");
    TreeOptions opts;
    opts.max_depth = static_cast<int>(spec.param("max_depth"));
    opts.min_samples_split = std::max(2, static_cast<int>(spec.param("min_samples_split")));
    int mtry = static_cast<int>(spec.param("features_per_split"));
    if (mtry <= 0) mtry = std::max(1, static_cast<int>(std::lround(std::sqrt(static_cast<double>(data.cols)))));
    opts.mtry = std::min<int>(mtry, static_cast<int>(data.cols));
    const bool bootstrap = spec.param("bootstrap") != 0.0;

    detail::ForestParams params;
    params.trees.resize(n_trees);
    parallel_for(static_cast<std::size_t>(n_trees), jobs, [&](std::size_t t) {
        Rng rng(Rng::mix(Rng::mix(spec.rng_seed, "forest"), static_cast<std::uint64_t>(t)));
        std::vector<std::size_t> sample(data.rows);
        if (bootstrap) {
            for (auto& s : sample) s = static_cast<std::size_t>(rng.below(data.rows));
        } else {
            std::iota(sample.begin(), sample.end(), 0);
        }
        const bool subsample_features = opts.mtry < static_cast<int>(data.cols);
        params.trees[t] = detail::grow_classification_tree(
            data.x, data.cols, data.y, nullptr, sample, opts, subsample_features ? &rng : nullptr);
    });
    return params;
}

// ---------------------------------------------------------------------------
// Gradient boosted trees (second-order logistic boosting)

detail::GbtParams train_gbt(const ModelSpec& spec, DataView data) {
    const int rounds = static_cast<int>(spec.param("n_rounds"));
    if (rounds < 1) throw ValidationError("n_rounds must be >= 1");
    detail::GbtParams params;
    params.learning_rate = spec.param("learning_rate");
    if (!(params.learning_rate > 0.0)) throw ValidationError("learning_rate must be > 0");
    const double reg_lambda = spec.param("l2_leaf_penalty");
    const double min_gain = spec.param("min_split_loss");
    TreeOptions opts;
    opts.max_depth = static_cast<int>(spec.param("max_depth"));
    opts.min_samples_split = 2;

    double mean = 0.0;
    for (std::size_t r = 0; r < data.rows; ++r) mean += data.y[r] != 0 ? 1.0 : 0.0;
    mean = std::clamp(mean / static_cast<double>(data.rows), 1e-6, 1.0 - 1e-6);
    params.base_score = std::log(mean / (1.0 - mean));

    std::vector<double> score(data.rows, params.base_score);
    std::vector<double> grad(data.rows), hess(data.rows);
    std::vector<std::size_t> all(data.rows);
    std::iota(all.begin(), all.end(), 0);

    params.trees.reserve(rounds);
    for (int round = 0; round < rounds; ++round) {
        for (std::size_t r = 0; r < data.rows; ++r) {
            const double p = sigmoid(score[r]);
            grad[r] = p - (data.y[r] != 0 ? 1.0 : 0.0);
            hess[r] = std::max(p * (1.0 - p), 1e-16);
        }
        Tree tree = detail::grow_gradient_tree(data.x, data.cols, grad.data(), hess.data(), all,
                                               opts, reg_lambda, min_gain);
        for (std::size_t r = 0; r < data.rows; ++r) {
            score[r] += params.learning_rate * tree.predict(data.x + r * data.cols);
        }
        params.trees.push_back(std::move(tree));
    }
    return params;
}

// ---------------------------------------------------------------------------
// Adaptive boosting with shallow tree learners

detail::AdaParams train_ada(const ModelSpec& spec, DataView data) {
    const int rounds = static_cast<int>(spec.param("n_rounds"));
    if (rounds < 1) throw ValidationError("n_rounds must be >= 1");
    TreeOptions opts;
    opts.max_depth = std::max(1, static_cast<int>(spec.param("stump_depth")));
    opts.min_samples_split = 2;

    std::vector<double> weights(data.rows, 1.0 / static_cast<double>(data.rows));
    std::vector<std::size_t> all(data.rows);
    std::iota(all.begin(), all.end(), 0);

    detail::AdaParams params;
    for (int round = 0; round < rounds; ++round) {
        Tree stump = detail::grow_classification_tree(data.x, data.cols, data.y, weights.data(),
                                                      all, opts, nullptr);
        double err = 0.0;
        for (std::size_t r = 0; r < data.rows; ++r) {
            const bool pred = stump.predict(data.x + r * data.cols) >= 0.5;
            if (pred != (data.y[r] != 0)) err += weights[r];
        }
        err = std::clamp(err, 1e-10, 1.0 - 1e-10);
        if (err >= 0.5) break;  // learner no better than chance; stop
        const double alpha = 0.5 * std::log((1.0 - err) / err);
        double total = 0.0;
        for (std::size_t r = 0; r < data.rows; ++r) {
            const bool pred = stump.predict(data.x + r * data.cols) >= 0.5;
            const double margin = (pred == (data.y[r] != 0)) ? 1.0 : -1.0;
            weights[r] *= std::exp(-alpha * margin);
            total += weights[r];
        }
        for (auto& w : weights) w /= total;
        params.alphas.push_back(alpha);
        params.stumps.push_back(std::move(stump));
        if (err <= 1e-9) break;  // perfect learner
    }
    if (params.stumps.empty()) {
        // Degenerate data; keep a single stump so predictions are defined.
        params.stumps.push_back(detail::grow_classification_tree(data.x, data.cols, data.y,
                                                                 weights.data(), all, opts, nullptr));
        params.alphas.push_back(0.0);
    }
    return params;
}

// ---------------------------------------------------------------------------
// Serialization helpers

json tree_to_json(const Tree& t) {
    json nodes = json::array();
    for (const auto& n : t.nodes) {
        nodes.push_back(json::array({n.feature, n.threshold, n.left, n.right, n.value}));
    }
    return nodes;
}

Tree tree_from_json(const json& j) {
    Tree t;
    for (const auto& n : j) {
        detail::TreeNode node;
        node.feature = n.at(0).get<int>();
        node.threshold = n.at(1).get<double>();
        node.left = n.at(2).get<int>();
        node.right = n.at(3).get<int>();
        node.value = n.at(4).get<double>();
        t.nodes.push_back(node);
    }
    return t;
}

}  // namespace

// ---------------------------------------------------------------------------
// Public training / prediction

TrainedModel train(const ModelSpec& spec, DataView data, std::vector<std::string> feature_names,
                   int jobs) {
    spec.validate();
    if (data.rows == 0 || data.y == nullptr) throw ValidationError("train: empty training data");
    if (feature_names.size() != data.cols) throw Error("train: feature name count mismatch");

    std::size_t n_pos = 0;
    for (std::size_t r = 0; r < data.rows; ++r) n_pos += data.y[r] != 0;
    if (!is_baseline(spec.family) && (n_pos == 0 || n_pos == data.rows)) {
        throw ValidationError("train: " + std::string(to_string(spec.family)) +
                              " requires both classes in y");
    }
    for (std::size_t i = 0; i < data.rows * data.cols; ++i) {
        if (std::isnan(data.x[i])) throw ValidationError("train: feature matrix must be dense");
    }

    auto impl = std::make_shared<ModelImpl>();
    switch (spec.family) {
        case ModelFamily::logistic_l2:
            impl->params = train_logistic(spec, data);
            break;
        case ModelFamily::random_forest:
            impl->params = train_forest(spec, data, jobs);
            break;
        case ModelFamily::gradient_boosted_trees:
            impl->params = train_gbt(spec, data);
            break;
        case ModelFamily::adaptive_boosting:
            impl->params = train_ada(spec, data);
            break;
        case ModelFamily::majority_baseline:
            impl->params = detail::MajorityParams{n_pos * 2 >= data.rows ? 1.0 : 0.0};
            break;
        case ModelFamily::random_baseline:
            impl->params = detail::RandomParams{spec.rng_seed};
            break;
    }

    TrainedModel model;
    model.spec_ = spec;
    model.feature_names_ = std::move(feature_names);
    model.impl_ = std::move(impl);
    return model;
}

TrainedModel train(const ModelSpec& spec, const FeatureMatrix& m, int jobs) {
    return train(spec, view_of(m), m.schema.feature_names, jobs);
}

std::vector<double> TrainedModel::predict_proba(DataView data) const {
    if (impl_ == nullptr) throw Error("predict_proba: model is not trained");
    if (data.cols != feature_names_.size()) {
        throw ValidationError("predict_proba: column count does not match the model's schema");
    }
    std::vector<double> out(data.rows, 0.0);
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, detail::LogisticParams>) {
                for (std::size_t r = 0; r < data.rows; ++r) {
                    const double* x = data.x + r * data.cols;
                    double z = p.bias;
                    for (std::size_t j = 0; j < data.cols; ++j) z += p.weights[j] * x[j];
                    out[r] = sigmoid(z);
                }
            } else if constexpr (std::is_same_v<T, detail::ForestParams>) {
                for (std::size_t r = 0; r < data.rows; ++r) {
                    const double* x = data.x + r * data.cols;
                    double sum = 0.0;
                    for (const auto& t : p.trees) sum += t.predict(x);
                    out[r] = sum / static_cast<double>(p.trees.size());
                }
            } else if constexpr (std::is_same_v<T, detail::GbtParams>) {
                for (std::size_t r = 0; r < data.rows; ++r) {
                    const double* x = data.x + r * data.cols;
                    double z = p.base_score;
                    for (const auto& t : p.trees) z += p.learning_rate * t.predict(x);
                    out[r] = sigmoid(z);
                }
            } else if constexpr (std::is_same_v<T, detail::AdaParams>) {
                for (std::size_t r = 0; r < data.rows; ++r) {
                    const double* x = data.x + r * data.cols;
                    double score = 0.0;
                    for (std::size_t t = 0; t < p.stumps.size(); ++t) {
                        const double h = p.stumps[t].predict(x) >= 0.5 ? 1.0 : -1.0;
                        score += p.alphas[t] * h;
                    }
                    out[r] = sigmoid(2.0 * score);
                }
            } else if constexpr (std::is_same_v<T, detail::MajorityParams>) {
                std::fill(out.begin(), out.end(), p.score);
            } else if constexpr (std::is_same_v<T, detail::RandomParams>) {
                for (std::size_t r = 0; r < data.rows; ++r) {
                    out[r] = Rng(Rng::mix(p.seed, static_cast<std::uint64_t>(r))).next_double();
                }
            }
        },
        impl_->params);
    return out;
}

std::vector<double> TrainedModel::predict_proba(const FeatureMatrix& m) const {
    if (m.schema.feature_names != feature_names_) {
        throw ValidationError("predict_proba: matrix schema does not match the model's schema binding");
    }
    return predict_proba(view_of(m));
}

std::string TrainedModel::to_json() const {
    if (impl_ == nullptr) throw Error("to_json: model is not trained");
    json doc;
    doc["format"] = "socon-model";
    doc["version"] = 1;
    doc["family"] = std::string(to_string(spec_.family));
    doc["hyperparameters"] = spec_.hyperparameters;
    doc["rng_seed"] = spec_.rng_seed;
    doc["feature_names"] = feature_names_;

    json params;
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, detail::LogisticParams>) {
                params["weights"] = p.weights;
                params["bias"] = p.bias;
            } else if constexpr (std::is_same_v<T, detail::ForestParams>) {
                json trees = json::array();
                for (const auto& t : p.trees) trees.push_back(tree_to_json(t));
                params["trees"] = std::move(trees);
            } else if constexpr (std::is_same_v<T, detail::GbtParams>) {
                params["base_score"] = p.base_score;
                params["learning_rate"] = p.learning_rate;
                json trees = json::array();
                for (const auto& t : p.trees) trees.push_back(tree_to_json(t));
                params["trees"] = std::move(trees);
            } else if constexpr (std::is_same_v<T, detail::AdaParams>) {
                params["alphas"] = p.alphas;
                json trees = json::array();
                for (const auto& t : p.stumps) trees.push_back(tree_to_json(t));
                params["stumps"] = std::move(trees);
            } else if constexpr (std::is_same_v<T, detail::MajorityParams>) {
                params["score"] = p.score;
            } else if constexpr (std::is_same_v<T, detail::RandomParams>) {
                params["seed"] = p.seed;
            }
        },
        impl_->params);
    doc["parameters"] = std::move(params);
    return doc.dump();
}

TrainedModel TrainedModel::from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& ex) {
        throw ValidationError(std::string("model document is not valid JSON: ") + ex.what());
    }
    if (doc.value("format", "") != "socon-model" || doc.value("version", 0) != 1) {
        throw ValidationError("unsupported model document format/version");
    }
    const auto family = parse_model_family(doc.at("family").get<std::string>());
    if (!family) throw ValidationError("unknown model family in document");

    TrainedModel model;
    model.spec_.family = *family;
    model.spec_.hyperparameters = doc.at("hyperparameters").get<std::map<std::string, double>>();
    model.spec_.rng_seed = doc.at("rng_seed").get<std::uint64_t>();
    model.feature_names_ = doc.at("feature_names").get<std::vector<std::string>>();

    const json& params = doc.at("parameters");
    auto impl = std::make_shared<ModelImpl>();
    switch (*family) {
        case ModelFamily::logistic_l2: {
            detail::LogisticParams p;
            p.weights = params.at("weights").get<std::vector<double>>();
            p.bias = params.at("bias").get<double>();
            impl->params = std::move(p);
            break;
        }
        case ModelFamily::random_forest: {
            detail::ForestParams p;
            for (const auto& t : params.at("trees")) p.trees.push_back(tree_from_json(t));
            impl->params = std::move(p);
            break;
        }
        case ModelFamily::gradient_boosted_trees: {
            detail::GbtParams p;
            p.base_score = params.at("base_score").get<double>();
            p.learning_rate = params.at("learning_rate").get<double>();
            for (const auto& t : params.at("trees")) p.trees.push_back(tree_from_json(t));
            impl->params = std::move(p);
            break;
        }
        case ModelFamily::adaptive_boosting: {
            detail::AdaParams p;
            p.alphas = params.at("alphas").get<std::vector<double>>();
            for (const auto& t : params.at("stumps")) p.stumps.push_back(tree_from_json(t));
            impl->params = std::move(p);
            break;
        }
        case ModelFamily::majority_baseline:
            impl->params = detail::MajorityParams{params.at("score").get<double>()};
            break;
        case ModelFamily::random_baseline:
            impl->params = detail::RandomParams{params.at("seed").get<std::uint64_t>()};
            break;
    }
    model.impl_ = std::move(impl);
    return model;
}

// ---------------------------------------------------------------------------
// Grid search

std::vector<ModelSpec> default_grid(ModelFamily family) {
    std::vector<ModelSpec> grid;
    auto push = [&](std::map<std::string, double> hp) {
        ModelSpec s = ModelSpec::defaults(family);
        for (auto& [k, v] : hp) s.hyperparameters[k] = v;
        grid.push_back(std::move(s));
    };
    switch (family) {
        case ModelFamily::logistic_l2:
            for (double l2 : {0.01, 0.1, 1.0}) push({{"l2_strength", l2}});
            break;
        case ModelFamily::random_forest:
            for (double trees : {100.0, 300.0}) {
                for (double depth : {8.0, 16.0, 0.0}) {  // 0 = unbounded
                    for (double mss : {2.0, 10.0}) {
                        push({{"n_trees", trees}, {"max_depth", depth}, {"min_samples_split", mss}});
                    }
                }
            }
            break;
        case ModelFamily::gradient_boosted_trees:
            for (double lr : {0.1, 0.3}) {
                for (double depth : {4.0, 6.0}) {
                    for (double gamma : {0.0, 1.0}) {
                        for (double lambda : {1.0, 5.0}) {
                            push({{"learning_rate", lr},
                                  {"max_depth", depth},
                                  {"min_split_loss", gamma},
                                  {"l2_leaf_penalty", lambda},
                                  {"n_rounds", 200.0}});
                        }
                    }
                }
            }
            break;
        case ModelFamily::adaptive_boosting:
            for (double rounds : {100.0, 300.0}) push({{"n_rounds", rounds}});
            break;
        case ModelFamily::majority_baseline:
        case ModelFamily::random_baseline:
            grid.push_back(ModelSpec::defaults(family));
            break;
    }
    return grid;
}

ModelSpec grid_search(ModelFamily family, std::span<const ModelSpec> grid, const FeatureMatrix& train_m,
                      int folds, std::uint64_t seed, const PreprocessConfig* smote_cfg, int jobs) {
    if (grid.empty()) throw ValidationError("grid_search: grid must be nonempty");
    for (const auto& spec : grid) {
        if (spec.family != family) throw ValidationError("grid_search: grid entry family mismatch");
        spec.validate();
    }
    if (grid.size() == 1) return grid[0];

    const auto fold_of = user_folds(train_m, folds, Rng::mix(seed, "grid_folds"));

    // Materialize fold train/validation matrices once; candidates share them.
    struct FoldData {
        FeatureMatrix fit;  // oversampled when requested
        FeatureMatrix val;
        bool usable = false;
    };
    std::vector<FoldData> fold_data(static_cast<std::size_t>(folds));
    for (int f = 0; f < folds; ++f) {
        std::vector<std::size_t> fit_rows, val_rows;
        for (std::size_t r = 0; r < train_m.rows(); ++r) {
            (fold_of[r] == f ? val_rows : fit_rows).push_back(r);
        }
        if (fit_rows.empty() || val_rows.empty()) continue;
        FeatureMatrix fit = train_m.subset(fit_rows);
        FeatureMatrix val = train_m.subset(val_rows);
        const bool fit_two_class = fit.count_label(BinaryLabel::Alone) > 0 &&
                                   fit.count_label(BinaryLabel::NotAlone) > 0;
        const bool val_two_class = val.count_label(BinaryLabel::Alone) > 0 &&
                                   val.count_label(BinaryLabel::NotAlone) > 0;
        if (!fit_two_class || !val_two_class) continue;
        if (smote_cfg != nullptr) {
            fit = smote(fit, *smote_cfg, Rng::mix(seed, static_cast<std::uint64_t>(1000 + f)));
        }
        fold_data[f].fit = std::move(fit);
        fold_data[f].val = std::move(val);
        fold_data[f].usable = true;
    }

    std::vector<double> mean_auc(grid.size(), -1.0);
    parallel_for(grid.size(), jobs, [&](std::size_t g) {
        ModelSpec spec = grid[g];
        double sum = 0.0;
        int used = 0;
        for (int f = 0; f < folds; ++f) {
            if (!fold_data[f].usable) continue;
            spec.rng_seed = Rng::mix(seed, static_cast<std::uint64_t>(f));
            const TrainedModel model = train(spec, fold_data[f].fit, 1);
            const auto scores = model.predict_proba(fold_data[f].val);
            sum += auc(scores, fold_data[f].val.label);
            ++used;
        }
        if (used > 0) mean_auc[g] = sum / used;
    });

    std::size_t best = 0;
    for (std::size_t g = 1; g < grid.size(); ++g) {
        if (mean_auc[g] > mean_auc[best]) best = g;  // ties keep the earlier point
    }
    return grid[best];
}

}  // namespace socon

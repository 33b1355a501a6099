#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "json.hpp"
#include "oracles.hpp"
#include "socon/common.hpp"
#include "socon/metrics.hpp"
#include "socon/models.hpp"
#include "socon/rng.hpp"
#include "socon/splits.hpp"

using namespace socon;
using test_helpers::make_matrix;
using test_helpers::RowSpec;
using test_helpers::tiny_schema;

namespace {

FeatureMatrix dense_matrix(Rng& rng, int rows, int cols, double signal,
                           const std::vector<SensorGroup>& groups) {
    std::vector<RowSpec> specs;
    for (int i = 0; i < rows; ++i) {
        RowSpec r{"u" + std::to_string(i % 8), i, static_cast<std::uint8_t>(rng.bernoulli(0.5)), {}, {}};
        for (int j = 0; j < cols; ++j) {
            const double shift = j == 0 ? signal * (r.label != 0 ? 1.0 : -1.0) : 0.0;
            r.values.push_back(shift + rng.normal(0.0, 1.0));
        }
        specs.push_back(std::move(r));
    }
    return make_matrix(tiny_schema(groups), specs);
}

double training_accuracy(const TrainedModel& model, const FeatureMatrix& m) {
    const auto scores = model.predict_proba(m);
    int hits = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        hits += (scores[i] >= 0.5) == (m.label[i] != 0);
    }
    return static_cast<double>(hits) / static_cast<double>(m.rows());
}

}  // namespace

TEST_SUITE("models") {

TEST_CASE("majority baseline is a constant predictor") {
    Rng rng(1);
    FeatureMatrix m = dense_matrix(rng, 200, 2, 0.0, {SensorGroup::location, SensorGroup::steps});
    // Force a 51.31%-style majority for the positive class.
    for (std::size_t i = 0; i < m.rows(); ++i) m.label[i] = i < 103 ? 1 : 0;
    const auto model = train(ModelSpec::defaults(ModelFamily::majority_baseline), m);
    const auto scores = model.predict_proba(m);
    for (double s : scores) CHECK(s == 1.0);
    CHECK(auc(scores, m.label) == doctest::Approx(0.5));
}

TEST_CASE("logistic on a separable two-point set reaches full training accuracy") {
    auto schema = tiny_schema({SensorGroup::location});
    const FeatureMatrix m = make_matrix(schema, {
                                                    {"a", 0, 0, {-1.0}, {}},
                                                    {"b", 0, 1, {1.0}, {}},
                                                });
    ModelSpec spec = ModelSpec::defaults(ModelFamily::logistic_l2);
    spec.hyperparameters["l2_strength"] = 1e-4;
    const auto model = train(spec, m);
    CHECK(training_accuracy(model, m) == 1.0);
}

TEST_CASE("logistic with all-zero coefficients scores one half everywhere") {
    const std::string doc = R"({
        "format": "socon-model", "version": 1, "family": "logistic_l2",
        "hyperparameters": {"l2_strength": 0.1}, "rng_seed": 0,
        "feature_names": ["location_value", "steps_value"],
        "parameters": {"weights": [0.0, 0.0], "bias": 0.0}
    })";
    const TrainedModel model = TrainedModel::from_json(doc);
    Rng rng(3);
    const FeatureMatrix m = dense_matrix(rng, 50, 2, 0.0, {SensorGroup::location, SensorGroup::steps});
    for (double s : model.predict_proba(m)) CHECK(s == doctest::Approx(0.5));
}

TEST_CASE("logistic objective gradient matches central finite differences") {
    Rng rng(2024);
    for (int rep = 0; rep < 30; ++rep) {
        const std::size_t n = 10 + rng.below(40);
        const std::size_t d = 1 + rng.below(5);
        std::vector<double> x(n * d);
        std::vector<std::uint8_t> y(n);
        for (auto& v : x) v = rng.normal(0.0, 1.5);
        for (auto& l : y) l = rng.bernoulli(0.5) ? 1 : 0;
        const double l2 = std::exp(rng.uniform(-4.0, 1.0));
        std::vector<double> params(d + 1);
        for (auto& p : params) p = rng.normal(0.0, 0.8);

        const DataView data{x.data(), n, d, y.data()};
        std::vector<double> grad(d + 1);
        logistic_l2_objective(params, data, l2, grad);
        const auto fd = test_oracles::fd_gradient(
            [&](const std::vector<double>& p) {
                std::vector<double> scratch(d + 1);
                return logistic_l2_objective(p, data, l2, scratch);
            },
            params);
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k <= d; ++k) {
            num += (grad[k] - fd[k]) * (grad[k] - fd[k]);
            den += fd[k] * fd[k];
        }
        CHECK(std::sqrt(num) <= 1e-5 * std::max(1.0, std::sqrt(den)));
    }
}

TEST_CASE("logistic gradient norm at the returned optimum is within tolerance") {
    Rng rng(555);
    const FeatureMatrix m = dense_matrix(rng, 120, 3, 0.8,
                                         {SensorGroup::location, SensorGroup::steps, SensorGroup::touch});
    ModelSpec spec = ModelSpec::defaults(ModelFamily::logistic_l2);
    const auto model = train(spec, m);

    const auto doc = nlohmann::json::parse(model.to_json());
    std::vector<double> params = doc["parameters"]["weights"].get<std::vector<double>>();
    params.push_back(doc["parameters"]["bias"].get<double>());
    std::vector<double> grad(params.size());
    logistic_l2_objective(params, view_of(m), spec.param("l2_strength"), grad);
    double norm = 0.0;
    for (double g : grad) norm += g * g;
    CHECK(std::sqrt(norm) <= spec.param("tolerance"));
}

TEST_CASE("single fully-grown unsampled tree memorizes a noiseless training set") {
    Rng rng(77);
    for (int rep = 0; rep < 10; ++rep) {
        FeatureMatrix m = dense_matrix(rng, 60, 3, 0.0,
                                       {SensorGroup::location, SensorGroup::steps, SensorGroup::touch});
        bool pos = false, neg = false;
        for (auto l : m.label) (l ? pos : neg) = true;
        if (!pos || !neg) continue;
        ModelSpec spec = ModelSpec::defaults(ModelFamily::random_forest);
        spec.hyperparameters["n_trees"] = 1;
        spec.hyperparameters["max_depth"] = 0;  // unbounded
        spec.hyperparameters["features_per_split"] = 3;
        spec.hyperparameters["bootstrap"] = 0;
        const auto model = train(spec, m);
        CHECK(training_accuracy(model, m) == 1.0);
    }
}

TEST_CASE("three-row single-tree forest matches the hand-traced leaves") {
    auto schema = tiny_schema({SensorGroup::location});
    const FeatureMatrix m = make_matrix(schema, {
                                                    {"a", 0, 0, {0.0}, {}},
                                                    {"b", 0, 0, {1.0}, {}},
                                                    {"c", 0, 1, {2.0}, {}},
                                                });
    ModelSpec spec = ModelSpec::defaults(ModelFamily::random_forest);
    spec.hyperparameters["n_trees"] = 1;
    spec.hyperparameters["max_depth"] = 0;
    spec.hyperparameters["features_per_split"] = 1;
    spec.hyperparameters["bootstrap"] = 0;
    const auto model = train(spec, m);
    const auto scores = model.predict_proba(m);
    // Best split is at 1.5 (both children pure); leaf frequencies 0 and 1.
    CHECK(scores[0] == 0.0);
    CHECK(scores[1] == 0.0);
    CHECK(scores[2] == 1.0);
}

TEST_CASE("forest predictions are invariant under tree order") {
    Rng rng(88);
    const FeatureMatrix m =
        dense_matrix(rng, 150, 3, 0.7, {SensorGroup::location, SensorGroup::steps, SensorGroup::touch});
    ModelSpec spec = ModelSpec::defaults(ModelFamily::random_forest);
    spec.hyperparameters["n_trees"] = 20;
    spec.rng_seed = 42;
    const auto model = train(spec, m);
    const auto scores = model.predict_proba(m);

    // Reverse the serialized tree order and reload.
    auto doc = nlohmann::json::parse(model.to_json());
    auto& trees = doc["parameters"]["trees"];
    std::reverse(trees.begin(), trees.end());
    const auto reversed = TrainedModel::from_json(doc.dump());
    const auto scores2 = reversed.predict_proba(m);
    for (std::size_t i = 0; i < scores.size(); ++i) {
        CHECK(scores[i] == doctest::Approx(scores2[i]).epsilon(1e-12));
    }
}

TEST_CASE("training is deterministic in the rng seed") {
    Rng rng(123);
    const FeatureMatrix m =
        dense_matrix(rng, 100, 3, 0.4, {SensorGroup::location, SensorGroup::steps, SensorGroup::touch});
    for (ModelFamily family : {ModelFamily::random_forest, ModelFamily::gradient_boosted_trees,
                               ModelFamily::adaptive_boosting, ModelFamily::logistic_l2}) {
        ModelSpec spec = ModelSpec::defaults(family);
        if (family == ModelFamily::random_forest) spec.hyperparameters["n_trees"] = 10;
        if (family == ModelFamily::gradient_boosted_trees) spec.hyperparameters["n_rounds"] = 15;
        if (family == ModelFamily::adaptive_boosting) spec.hyperparameters["n_rounds"] = 15;
        spec.rng_seed = 7;
        const auto a = train(spec, m);
        const auto b = train(spec, m);
        CHECK(a.to_json() == b.to_json());
    }
}

TEST_CASE("boosted families separate an easy signal") {
    Rng rng(9);
    const FeatureMatrix m =
        dense_matrix(rng, 240, 3, 1.2, {SensorGroup::location, SensorGroup::steps, SensorGroup::touch});
    for (ModelFamily family : {ModelFamily::gradient_boosted_trees, ModelFamily::adaptive_boosting}) {
        ModelSpec spec = ModelSpec::defaults(family);
        spec.hyperparameters["n_rounds"] = 40;
        const auto model = train(spec, m);
        const auto scores = model.predict_proba(m);
        CHECK(auc(scores, m.label) > 0.9);
    }
}

TEST_CASE("trainable families reject single-class targets; baselines accept them") {
    auto schema = tiny_schema({SensorGroup::location});
    const FeatureMatrix m = make_matrix(schema, {
                                                    {"a", 0, 1, {0.0}, {}},
                                                    {"b", 0, 1, {1.0}, {}},
                                                });
    CHECK_THROWS_AS((void)train(ModelSpec::defaults(ModelFamily::logistic_l2), m), ValidationError);
    CHECK_THROWS_AS((void)train(ModelSpec::defaults(ModelFamily::random_forest), m), ValidationError);
    CHECK_NOTHROW((void)train(ModelSpec::defaults(ModelFamily::majority_baseline), m));
    CHECK_NOTHROW((void)train(ModelSpec::defaults(ModelFamily::random_baseline), m));
}

TEST_CASE("hyperparameter names are validated against the family") {
    ModelSpec spec = ModelSpec::defaults(ModelFamily::logistic_l2);
    spec.hyperparameters["n_trees"] = 10;
    CHECK_THROWS_AS(spec.validate(), ValidationError);
}

TEST_CASE("prediction rejects a schema mismatch") {
    Rng rng(5);
    const FeatureMatrix m = dense_matrix(rng, 40, 2, 0.5, {SensorGroup::location, SensorGroup::steps});
    const auto model = train(ModelSpec::defaults(ModelFamily::logistic_l2), m);
    const FeatureMatrix other =
        dense_matrix(rng, 4, 3, 0.0, {SensorGroup::location, SensorGroup::steps, SensorGroup::touch});
    CHECK_THROWS_AS((void)model.predict_proba(other), ValidationError);
}

TEST_CASE("model json round-trip preserves predictions") {
    Rng rng(15);
    const FeatureMatrix m =
        dense_matrix(rng, 90, 3, 0.6, {SensorGroup::location, SensorGroup::steps, SensorGroup::touch});
    for (ModelFamily family : {ModelFamily::logistic_l2, ModelFamily::random_forest,
                               ModelFamily::gradient_boosted_trees, ModelFamily::adaptive_boosting,
                               ModelFamily::majority_baseline, ModelFamily::random_baseline}) {
        ModelSpec spec = ModelSpec::defaults(family);
        if (family == ModelFamily::random_forest) spec.hyperparameters["n_trees"] = 8;
        if (family == ModelFamily::gradient_boosted_trees) spec.hyperparameters["n_rounds"] = 10;
        if (family == ModelFamily::adaptive_boosting) spec.hyperparameters["n_rounds"] = 10;
        spec.rng_seed = 11;
        const auto model = train(spec, m);
        const auto loaded = TrainedModel::from_json(model.to_json());
        CHECK(model.predict_proba(m) == loaded.predict_proba(m));
    }
}

TEST_CASE("grid search with a single point returns that point") {
    Rng rng(21);
    const FeatureMatrix m = dense_matrix(rng, 60, 2, 0.5, {SensorGroup::location, SensorGroup::steps});
    ModelSpec only = ModelSpec::defaults(ModelFamily::logistic_l2);
    only.hyperparameters["l2_strength"] = 0.25;
    const ModelSpec chosen = grid_search(ModelFamily::logistic_l2, std::vector<ModelSpec>{only}, m);
    CHECK(chosen.param("l2_strength") == 0.25);
}

TEST_CASE("grid search prefers an informative model over a constant one") {
    Rng rng(22);
    const FeatureMatrix m = dense_matrix(rng, 240, 2, 1.0, {SensorGroup::location, SensorGroup::steps});
    ModelSpec crushed = ModelSpec::defaults(ModelFamily::logistic_l2);
    crushed.hyperparameters["l2_strength"] = 1e9;  // weights squashed to ~0 -> constant scores
    ModelSpec sane = ModelSpec::defaults(ModelFamily::logistic_l2);
    sane.hyperparameters["l2_strength"] = 0.1;
    const ModelSpec chosen = grid_search(ModelFamily::logistic_l2,
                                         std::vector<ModelSpec>{crushed, sane}, m, 3, 5);
    CHECK(chosen.param("l2_strength") == 0.1);
}

TEST_CASE("grid search equals exhaustive evaluation with shared folds") {
    Rng rng(23);
    const FeatureMatrix m = dense_matrix(rng, 300, 3, 0.6,
                                         {SensorGroup::location, SensorGroup::steps, SensorGroup::touch});
    std::vector<ModelSpec> grid;
    for (double l2 : {0.003, 0.03, 0.3, 3.0}) {
        ModelSpec s = ModelSpec::defaults(ModelFamily::logistic_l2);
        s.hyperparameters["l2_strength"] = l2;
        grid.push_back(s);
    }
    const std::uint64_t seed = 77;
    const ModelSpec chosen = grid_search(ModelFamily::logistic_l2, grid, m, 3, seed);

    // Exhaustive reference using the same deterministic fold derivation.
    const auto fold_of = user_folds(m, 3, Rng::mix(seed, "grid_folds"));
    double best = -1.0;
    double best_l2 = 0.0;
    for (const auto& cand : grid) {
        double sum = 0.0;
        int used = 0;
        for (int f = 0; f < 3; ++f) {
            std::vector<std::size_t> fit_rows, val_rows;
            for (std::size_t r = 0; r < m.rows(); ++r) {
                (fold_of[r] == f ? val_rows : fit_rows).push_back(r);
            }
            ModelSpec spec = cand;
            spec.rng_seed = Rng::mix(seed, static_cast<std::uint64_t>(f));
            const auto model = train(spec, m.subset(fit_rows));
            const auto val = m.subset(val_rows);
            sum += auc(model.predict_proba(val), val.label);
            ++used;
        }
        const double mean = sum / used;
        if (mean > best) {
            best = mean;
            best_l2 = cand.param("l2_strength");
        }
    }
    CHECK(chosen.param("l2_strength") == best_l2);
}

}  // TEST_SUITE

#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"
#include "socon/common.hpp"
#include "socon/preprocess.hpp"
#include "socon/rng.hpp"

using namespace socon;
using test_helpers::make_matrix;
using test_helpers::RowSpec;
using test_helpers::tiny_schema;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

PreprocessConfig raw_config() {
    PreprocessConfig cfg;
    cfg.standardize = false;
    cfg.knn_max_reference = 0;
    return cfg;
}

FeatureMatrix two_group_train() {
    return make_matrix(tiny_schema({SensorGroup::location, SensorGroup::steps}),
                       {
                           {"a", 0, 1, {0.0, 10.0}, {}},
                           {"b", 0, 0, {4.0, 50.0}, {}},
                       });
}

}  // namespace

TEST_SUITE("preprocess") {

TEST_CASE("groups missing in over 90% of training rows are dropped") {
    auto schema = tiny_schema({SensorGroup::location, SensorGroup::wifi});
    std::vector<RowSpec> rows;
    for (int i = 0; i < 100; ++i) {
        // wifi observed in exactly 5 rows -> 95% missing.
        rows.push_back({"u" + std::to_string(i % 7), i, static_cast<std::uint8_t>(i % 2),
                        {static_cast<double>(i), i < 5 ? 1.0 : kNaN},
                        {}});
    }
    const FeatureMatrix train = make_matrix(schema, rows);
    const FittedPreprocessor fp = fit(train, raw_config());
    CHECK(fp.retained.feature_index("wifi_value") == -1);
    CHECK(fp.retained.feature_index("location_value") == 0);
    CHECK(fp.dropped_groups == std::vector<SensorGroup>{SensorGroup::wifi});
    CHECK(fp.retained.marker_index(SensorGroup::wifi) == -1);
}

TEST_CASE("a group missing in exactly 90% of rows is retained") {
    auto schema = tiny_schema({SensorGroup::location, SensorGroup::wifi});
    std::vector<RowSpec> rows;
    for (int i = 0; i < 100; ++i) {
        rows.push_back({"u" + std::to_string(i % 7), i, static_cast<std::uint8_t>(i % 2),
                        {static_cast<double>(i), i < 10 ? 1.0 : kNaN},
                        {}});
    }
    const FittedPreprocessor fp = fit(make_matrix(schema, rows), raw_config());
    CHECK(fp.retained.feature_index("wifi_value") >= 0);
    CHECK(fp.dropped_groups.empty());
}

TEST_CASE("fit fails when every sensor group is dropped") {
    auto schema = tiny_schema({SensorGroup::wifi});
    std::vector<RowSpec> rows;
    for (int i = 0; i < 50; ++i) {
        rows.push_back({"u" + std::to_string(i % 3), i, static_cast<std::uint8_t>(i % 2),
                        {i == 0 ? 1.0 : kNaN},
                        {}});
    }
    CHECK_THROWS_AS((void)fit(make_matrix(schema, rows), raw_config()), Error);
}

TEST_CASE("rows with nothing missing pass through unchanged without standardization") {
    const FeatureMatrix train = two_group_train();
    const FittedPreprocessor fp = fit(train, raw_config());
    const FeatureMatrix out = transform(fp, train);
    CHECK(out.values == train.values);
    CHECK(out.markers == train.markers);
}

TEST_CASE("nearest-neighbor imputation, k=1") {
    const FeatureMatrix train = two_group_train();
    PreprocessConfig cfg = raw_config();
    cfg.knn_k = 1;
    const FittedPreprocessor fp = fit(train, cfg);

    const FeatureMatrix query = make_matrix(train.schema, {{"q", 0, 1, {1.0, kNaN}, {}}});
    const FeatureMatrix out = transform(fp, query);
    CHECK(out.row(0)[1] == 10.0);  // row (0,10) is nearest
    CHECK(out.marker_row(0)[1] == 1);
    CHECK(out.row(0)[0] == 1.0);  // observed entry untouched
    CHECK(out.marker_row(0)[0] == 0);
}

TEST_CASE("nearest-neighbor imputation, k=2 averages both neighbors") {
    const FeatureMatrix train = two_group_train();
    PreprocessConfig cfg = raw_config();
    cfg.knn_k = 2;
    const FittedPreprocessor fp = fit(train, cfg);
    const FeatureMatrix query = make_matrix(train.schema, {{"q", 0, 1, {2.0, kNaN}, {}}});
    const FeatureMatrix out = transform(fp, query);
    CHECK(out.row(0)[1] == 30.0);  // mean(10, 50)
}

TEST_CASE("rows with zero mutually observed features fall back to train means") {
    const FeatureMatrix train = two_group_train();
    PreprocessConfig cfg = raw_config();
    const FittedPreprocessor fp = fit(train, cfg);
    const FeatureMatrix query = make_matrix(train.schema, {{"q", 0, 1, {kNaN, kNaN}, {}}});
    TransformStats stats;
    const FeatureMatrix out = transform(fp, query, &stats);
    CHECK(stats.fallback_rows == 1);
    CHECK(out.row(0)[0] == doctest::Approx(2.0));   // mean(0, 4)
    CHECK(out.row(0)[1] == doctest::Approx(30.0));  // mean(10, 50)
}

TEST_CASE("imputation matches the brute-force oracle on random instances") {
    Rng rng(4242);
    const auto schema = tiny_schema({SensorGroup::location, SensorGroup::wifi, SensorGroup::steps,
                                     SensorGroup::touch});
    for (int rep = 0; rep < 120; ++rep) {
        const int n_train = 4 + static_cast<int>(rng.below(40));
        const int k = 1 + static_cast<int>(rng.below(3));
        std::vector<RowSpec> train_rows;
        for (int i = 0; i < n_train; ++i) {
            RowSpec r{"u" + std::to_string(i % 5), i, static_cast<std::uint8_t>(i % 2), {}, {}};
            for (int j = 0; j < 4; ++j) {
                r.values.push_back(rng.bernoulli(0.25) ? kNaN : rng.normal(0.0, 2.0));
            }
            train_rows.push_back(std::move(r));
        }
        PreprocessConfig cfg = raw_config();
        cfg.knn_k = k;
        cfg.sparse_group_threshold = 1.0;  // keep all groups regardless of sparsity
        const FeatureMatrix train = make_matrix(schema, train_rows);
        const FittedPreprocessor fp = fit(train, cfg);

        test_oracles::KnnOracle oracle;
        oracle.cols = 4;
        oracle.group_of = {0, 1, 2, 3};
        oracle.train = train.values;
        oracle.train_rows = train.rows();

        RowSpec q{"q", 0, 1, {}, {}};
        for (int j = 0; j < 4; ++j) {
            q.values.push_back(rng.bernoulli(0.4) ? kNaN : rng.normal(0.0, 2.0));
        }
        const FeatureMatrix query = make_matrix(schema, {q});
        const FeatureMatrix out = transform(fp, query);
        for (int j = 0; j < 4; ++j) {
            if (!std::isnan(q.values[j])) {
                CHECK(out.row(0)[j] == q.values[j]);
                continue;
            }
            const double expect = oracle.impute(q.values.data(), j, k);
            if (std::isnan(expect)) continue;  // fallback-to-mean case, checked elsewhere
            CHECK(out.row(0)[j] == expect);
        }
    }
}

TEST_CASE("transform is a pure function of the fitted state") {
    const FeatureMatrix train = two_group_train();
    const FittedPreprocessor fp = fit(train, raw_config());
    const FeatureMatrix q1 = make_matrix(train.schema, {{"q", 0, 1, {1.0, kNaN}, {}}});
    const FeatureMatrix q2 = make_matrix(train.schema, {{"z", 5, 0, {-100.0, 3.0}, {}},
                                                        {"q", 0, 1, {1.0, kNaN}, {}}});
    const FeatureMatrix a = transform(fp, q1);
    const FeatureMatrix b = transform(fp, q2);
    CHECK(a.row(0)[1] == b.row(1)[1]);  // other test rows never influence a row's result
}

TEST_CASE("standardization uses observed training statistics") {
    auto schema = tiny_schema({SensorGroup::location});
    const FeatureMatrix train = make_matrix(schema, {
                                                        {"a", 0, 1, {2.0}, {}},
                                                        {"b", 0, 0, {4.0}, {}},
                                                        {"c", 0, 1, {6.0}, {}},
                                                    });
    PreprocessConfig cfg;
    cfg.standardize = true;
    const FittedPreprocessor fp = fit(train, cfg);
    const FeatureMatrix out = transform(fp, train);
    CHECK(out.row(0)[0] == doctest::Approx((2.0 - 4.0) / std::sqrt(8.0 / 3.0)));
    CHECK(out.row(1)[0] == doctest::Approx(0.0));
}

TEST_CASE("smote midpoint and endpoint interpolation") {
    auto schema = tiny_schema({SensorGroup::location, SensorGroup::steps});
    // Minority = label 1 with two points (0,0) and (2,2); majority = four rows.
    std::vector<RowSpec> rows = {
        {"a", 0, 1, {0.0, 0.0}, {}},
        {"b", 0, 1, {2.0, 2.0}, {}},
        {"c", 0, 0, {10.0, 0.0}, {}},
        {"d", 0, 0, {11.0, 0.0}, {}},
        {"e", 0, 0, {12.0, 0.0}, {}},
        {"f", 0, 0, {13.0, 0.0}, {}},
    };
    PreprocessConfig cfg = raw_config();
    cfg.smote_neighbors = 1;
    const FeatureMatrix train = make_matrix(schema, rows);
    const FeatureMatrix grown = smote(train, cfg, 77);
    REQUIRE(grown.rows() == 8);  // 2 synthetic rows to reach 4 vs 4
    for (std::size_t r = 6; r < 8; ++r) {
        CHECK(grown.synthetic[r] == 1);
        CHECK(grown.label[r] == 1);
        // Both minority points lie on the segment x=y, 0..2; so must synthetics.
        CHECK(grown.row(r)[0] == doctest::Approx(grown.row(r)[1]));
        CHECK(grown.row(r)[0] >= 0.0);
        CHECK(grown.row(r)[0] <= 2.0);
    }
}

TEST_CASE("balanced input yields no synthetic rows") {
    auto schema = tiny_schema({SensorGroup::location});
    const FeatureMatrix train = make_matrix(schema, {
                                                        {"a", 0, 1, {0.0}, {}},
                                                        {"b", 0, 0, {1.0}, {}},
                                                    });
    const FeatureMatrix grown = smote(train, raw_config(), 1);
    CHECK(grown.rows() == 2);
}

TEST_CASE("smote synthetic points lie on minority segments") {
    Rng rng(31);
    auto schema = tiny_schema({SensorGroup::location, SensorGroup::steps, SensorGroup::touch});
    std::vector<RowSpec> rows;
    for (int i = 0; i < 40; ++i) {
        RowSpec r{"u" + std::to_string(i), 0, static_cast<std::uint8_t>(i < 12 ? 1 : 0), {}, {}};
        for (int j = 0; j < 3; ++j) r.values.push_back(rng.normal(0.0, 3.0));
        rows.push_back(std::move(r));
    }
    const FeatureMatrix train = make_matrix(schema, rows);
    const FeatureMatrix grown = smote(train, raw_config(), 5);
    CHECK(grown.rows() == 56);  // 28 majority, 12 original + 16 synthetic minority

    // Collect the minority originals.
    std::vector<const double*> minority;
    for (std::size_t r = 0; r < train.rows(); ++r) {
        if (train.label[r] == 1) minority.push_back(train.row(r));
    }
    for (std::size_t r = train.rows(); r < grown.rows(); ++r) {
        const double* s = grown.row(r);
        bool on_some_segment = false;
        for (std::size_t a = 0; a < minority.size() && !on_some_segment; ++a) {
            for (std::size_t b = 0; b < minority.size() && !on_some_segment; ++b) {
                if (a == b) continue;
                // Solve for lambda on the first coordinate, check the rest.
                const double denom = minority[b][0] - minority[a][0];
                if (std::abs(denom) < 1e-12) continue;
                const double lambda = (s[0] - minority[a][0]) / denom;
                if (lambda < -1e-9 || lambda > 1.0 + 1e-9) continue;
                bool all = true;
                for (int j = 0; j < 3; ++j) {
                    const double expect = minority[a][j] + lambda * (minority[b][j] - minority[a][j]);
                    if (std::abs(expect - s[j]) > 1e-9) {
                        all = false;
                        break;
                    }
                }
                on_some_segment = all;
            }
        }
        CHECK(on_some_segment);
    }
}

TEST_CASE("smote is deterministic per seed and reduces k when minority is tiny") {
    auto schema = tiny_schema({SensorGroup::location});
    std::vector<RowSpec> rows = {
        {"a", 0, 1, {0.0}, {}},  {"b", 0, 1, {1.0}, {}},  {"c", 0, 0, {5.0}, {}},
        {"d", 0, 0, {6.0}, {}},  {"e", 0, 0, {7.0}, {}},  {"f", 0, 0, {8.0}, {}},
        {"g", 0, 0, {9.0}, {}},
    };
    const FeatureMatrix train = make_matrix(schema, rows);
    PreprocessConfig cfg = raw_config();
    cfg.smote_neighbors = 5;  // only one neighbor actually available
    const FeatureMatrix g1 = smote(train, cfg, 9);
    const FeatureMatrix g2 = smote(train, cfg, 9);
    const FeatureMatrix g3 = smote(train, cfg, 10);
    CHECK(test_helpers::matrices_equal(g1, g2));
    CHECK(!test_helpers::matrices_equal(g1, g3));
    CHECK(g1.rows() == 10);
}

TEST_CASE("imputation never modifies observed entries") {
    Rng rng(1234);
    auto schema = tiny_schema({SensorGroup::location, SensorGroup::wifi, SensorGroup::steps});
    std::vector<RowSpec> rows;
    for (int i = 0; i < 60; ++i) {
        RowSpec r{"u" + std::to_string(i % 6), i, static_cast<std::uint8_t>(i % 2), {}, {}};
        for (int j = 0; j < 3; ++j) {
            r.values.push_back(rng.bernoulli(0.3) ? kNaN : rng.normal(0.0, 1.0));
        }
        rows.push_back(std::move(r));
    }
    const FeatureMatrix train = make_matrix(schema, rows);
    PreprocessConfig cfg;
    cfg.standardize = true;
    cfg.sparse_group_threshold = 1.0;
    const FittedPreprocessor fp = fit(train, cfg);
    const FeatureMatrix out = transform(fp, train);
    for (std::size_t r = 0; r < train.rows(); ++r) {
        for (std::size_t j = 0; j < 3; ++j) {
            if (std::isnan(train.row(r)[j])) continue;
            const double expect = (train.row(r)[j] - fp.mean[j]) / fp.stddev[j];
            CHECK(out.row(r)[j] == doctest::Approx(expect).epsilon(1e-12));
        }
    }
}

}  // TEST_SUITE

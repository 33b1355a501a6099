#include <algorithm>
#include <limits>
#include <map>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "socon/rng.hpp"
#include "socon/common.hpp"
#include "socon/splits.hpp"

using namespace socon;
using test_helpers::make_matrix;
using test_helpers::RowSpec;
using test_helpers::tiny_schema;

namespace {

FeatureMatrix users_matrix(const std::vector<std::pair<std::string, int>>& user_rows) {
    std::vector<RowSpec> rows;
    std::int64_t t = 0;
    for (const auto& [user, n] : user_rows) {
        for (int i = 0; i < n; ++i) {
            rows.push_back({user, t += 3600, static_cast<std::uint8_t>(i % 2), {0.0}, {}});
        }
    }
    return make_matrix(tiny_schema({SensorGroup::location}), rows);
}

std::set<std::string> users_of(const FeatureMatrix& m, const std::vector<std::size_t>& rows) {
    std::set<std::string> out;
    for (std::size_t r : rows) out.insert(m.participant_id[r]);
    return out;
}

bool disjoint(const std::set<std::string>& a, const std::set<std::string>& b) {
    for (const auto& x : a) {
        if (b.count(x)) return false;
    }
    return true;
}

}  // namespace

TEST_SUITE("splits") {

TEST_CASE("ten equal users at fraction 0.2 give a 8:2 user split") {
    std::vector<std::pair<std::string, int>> spec;
    for (int i = 0; i < 10; ++i) spec.push_back({"u" + std::to_string(i), 30});
    const FeatureMatrix m = users_matrix(spec);
    const SplitIndices s = split_population(m, 0.2, 123);
    CHECK(users_of(m, s.test).size() == 2);
    CHECK(users_of(m, s.train).size() == 8);
    CHECK(s.test.size() == 60);
    CHECK(s.train.size() == 240);
}

TEST_CASE("population split train and test users are always disjoint") {
    const FeatureMatrix m = users_matrix({{"a", 10}, {"b", 25}, {"c", 3}, {"d", 40}, {"e", 17}});
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const SplitIndices s = split_population(m, 0.2, seed);
        CHECK(disjoint(users_of(m, s.train), users_of(m, s.test)));
        CHECK(s.train.size() + s.test.size() == m.rows());
        CHECK(!s.train.empty());
        CHECK(!s.test.empty());
    }
}

TEST_CASE("population split rejects a single user") {
    const FeatureMatrix m = users_matrix({{"only", 50}});
    CHECK_THROWS_AS((void)split_population(m, 0.2, 1), ValidationError);
}

TEST_CASE("population split picks the closest-to-target prefix of the shuffled users") {
    Rng meta(900);
    for (int rep = 0; rep < 60; ++rep) {
        // Up to 12 users with skewed sizes.
        std::vector<std::pair<std::string, int>> spec;
        const int n_users = 2 + static_cast<int>(meta.below(11));
        for (int u = 0; u < n_users; ++u) {
            spec.push_back({"u" + std::to_string(u), 1 + static_cast<int>(meta.below(60))});
        }
        const FeatureMatrix m = users_matrix(spec);
        const std::uint64_t seed = meta.next_u64();
        const SplitIndices s = split_population(m, 0.2, seed);
        const auto test_users = users_of(m, s.test);

        // Oracle: replay the same seeded shuffle over id-sorted users and
        // exhaustively pick the prefix whose row share is closest to 0.2.
        struct U {
            std::string id;
            std::size_t rows;
        };
        std::vector<U> order;
        for (const auto& [id, n] : spec) order.push_back({id, static_cast<std::size_t>(n)});
        std::sort(order.begin(), order.end(), [](const U& a, const U& b) { return a.id < b.id; });
        Rng shuffler(Rng::mix(seed, "split_population"));
        shuffler.shuffle(order);
        const double total = static_cast<double>(m.rows());
        double best_err = 2.0;
        std::size_t best_k = 1;
        std::size_t cum = 0;
        for (std::size_t k = 1; k + 1 <= order.size(); ++k) {
            cum += order[k - 1].rows;
            const double err = std::abs(static_cast<double>(cum) / total - 0.2);
            if (err < best_err) {
                best_err = err;
                best_k = k;
            }
        }
        std::set<std::string> expected;
        for (std::size_t k = 0; k < best_k; ++k) expected.insert(order[k].id);
        CHECK(test_users == expected);
    }
}

TEST_CASE("hybrid split moves the first half of each testing user's rows") {
    // One user's rows are time-ordered 1..10; whenever that user tests, rows
    // 1-5 must land in train and 6-10 in test.
    const FeatureMatrix m = users_matrix({{"a", 10}, {"b", 10}, {"c", 10}, {"d", 10}, {"e", 10}});
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const SplitIndices s = split_hybrid(m, seed);
        std::set<std::string> test_users = users_of(m, s.test);
        for (const auto& u : test_users) {
            std::vector<std::int64_t> train_ts, test_ts;
            for (std::size_t r : s.train) {
                if (m.participant_id[r] == u) train_ts.push_back(m.report_timestamp[r]);
            }
            for (std::size_t r : s.test) {
                if (m.participant_id[r] == u) test_ts.push_back(m.report_timestamp[r]);
            }
            CHECK(train_ts.size() == 5);
            CHECK(test_ts.size() == 5);
            CHECK(*std::max_element(train_ts.begin(), train_ts.end()) <
                  *std::min_element(test_ts.begin(), test_ts.end()));
        }
    }
}

TEST_CASE("hybrid split uses the ceiling on odd row counts") {
    const FeatureMatrix m = users_matrix({{"a", 3}, {"b", 3}, {"c", 3}, {"d", 3}, {"e", 3}});
    const SplitIndices s = split_hybrid(m, 4);
    for (const auto& u : users_of(m, s.test)) {
        std::size_t train_n = 0, test_n = 0;
        for (std::size_t r : s.train) train_n += m.participant_id[r] == u;
        for (std::size_t r : s.test) test_n += m.participant_id[r] == u;
        CHECK(train_n == 2);
        CHECK(test_n == 1);
    }
}

TEST_CASE("hybrid split lands near 80:20 overall") {
    Rng rng(1000);
    std::vector<std::pair<std::string, int>> spec;
    for (int u = 0; u < 40; ++u) {
        spec.push_back({"u" + std::to_string(u), 100 + static_cast<int>(rng.below(500))});
    }
    const FeatureMatrix m = users_matrix(spec);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const SplitIndices s = split_hybrid(m, seed);
        const double train_frac = static_cast<double>(s.train.size()) / m.rows();
        CHECK(train_frac > 0.77);
        CHECK(train_frac < 0.83);
    }
}

TEST_CASE("hybrid split never leaks a testing user's future into training") {
    Rng rng(2000);
    std::vector<std::pair<std::string, int>> spec;
    for (int u = 0; u < 12; ++u) {
        spec.push_back({"u" + std::to_string(u), 2 + static_cast<int>(rng.below(30))});
    }
    const FeatureMatrix m = users_matrix(spec);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const SplitIndices s = split_hybrid(m, seed);
        for (const auto& u : users_of(m, s.test)) {
            std::int64_t max_train = std::numeric_limits<std::int64_t>::min();
            std::int64_t min_test = std::numeric_limits<std::int64_t>::max();
            for (std::size_t r : s.train) {
                if (m.participant_id[r] == u) max_train = std::max(max_train, m.report_timestamp[r]);
            }
            for (std::size_t r : s.test) {
                if (m.participant_id[r] == u) min_test = std::min(min_test, m.report_timestamp[r]);
            }
            if (max_train != std::numeric_limits<std::int64_t>::min()) {
                CHECK(max_train < min_test);
            }
        }
    }
}

TEST_CASE("user folds are user-disjoint and cover all rows") {
    const FeatureMatrix m = users_matrix({{"a", 12}, {"b", 7}, {"c", 20}, {"d", 5}, {"e", 9},
                                          {"f", 14}});
    const auto fold = user_folds(m, 3, 99);
    REQUIRE(fold.size() == m.rows());
    std::map<std::string, std::set<int>> user_fold;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        CHECK(fold[r] >= 0);
        CHECK(fold[r] < 3);
        user_fold[m.participant_id[r]].insert(fold[r]);
    }
    for (const auto& [u, folds] : user_fold) CHECK(folds.size() == 1);
}

}  // TEST_SUITE

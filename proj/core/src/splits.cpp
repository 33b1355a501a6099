#include "socon/splits.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "socon/common.hpp"
#include "socon/rng.hpp"

namespace socon {

namespace {

struct UserRows {
    std::string id;
    std::vector<std::size_t> rows;
};

std::vector<UserRows> rows_by_user(const FeatureMatrix& m) {
    std::unordered_map<std::string, std::size_t> slot;
    std::vector<UserRows> users;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        auto [it, inserted] = slot.try_emplace(m.participant_id[r], users.size());
        if (inserted) users.push_back({m.participant_id[r], {}});
        users[it->second].rows.push_back(r);
    }
    // Deterministic base order regardless of row order.
    std::sort(users.begin(), users.end(),
              [](const UserRows& a, const UserRows& b) { return a.id < b.id; });
    return users;
}

}  // namespace

SplitIndices split_population(const FeatureMatrix& m, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw ValidationError("test_fraction must be in (0,1)");
    }
    auto users = rows_by_user(m);
    if (users.size() < 2) {
        throw ValidationError("split_population: need at least two users");
    }
    Rng rng(Rng::mix(seed, "split_population"));
    rng.shuffle(users);

    const double total = static_cast<double>(m.rows());
    double best_err = std::numeric_limits<double>::infinity();
    std::size_t best_k = 1;
    double cum = 0.0;
    for (std::size_t k = 1; k + 1 <= users.size(); ++k) {
        cum += static_cast<double>(users[k - 1].rows.size());
        const double err = std::abs(cum / total - test_fraction);
        if (err < best_err) {
            best_err = err;
            best_k = k;
        }
    }

    SplitIndices out;
    for (std::size_t u = 0; u < users.size(); ++u) {
        auto& dst = u < best_k ? out.test : out.train;
        dst.insert(dst.end(), users[u].rows.begin(), users[u].rows.end());
    }
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

SplitIndices split_hybrid(const FeatureMatrix& m, double initial_test_fraction,
                          double transfer_fraction, std::uint64_t seed) {
    if (!(transfer_fraction > 0.0 && transfer_fraction < 1.0)) {
        throw ValidationError("transfer_fraction must be in (0,1)");
    }
    SplitIndices base = split_population(m, initial_test_fraction, seed);

    // Regroup the testing rows per user, ordered by time.
    std::unordered_map<std::string, std::vector<std::size_t>> per_user;
    for (std::size_t r : base.test) per_user[m.participant_id[r]].push_back(r);

    SplitIndices out;
    out.train = base.train;
    for (auto& [id, rows] : per_user) {
        std::sort(rows.begin(), rows.end(), [&](std::size_t a, std::size_t b) {
            if (m.report_timestamp[a] != m.report_timestamp[b]) {
                return m.report_timestamp[a] < m.report_timestamp[b];
            }
            return a < b;
        });
        std::size_t k = static_cast<std::size_t>(
            std::ceil(transfer_fraction * static_cast<double>(rows.size())));
        if (k >= rows.size()) k = rows.size() - 1;  // keep at least one testing row
        // Extend past timestamp ties so train strictly precedes test in time.
        while (k > 0 && k < rows.size() &&
               m.report_timestamp[rows[k]] == m.report_timestamp[rows[k - 1]]) {
            ++k;
        }
        for (std::size_t i = 0; i < rows.size(); ++i) {
            (i < k ? out.train : out.test).push_back(rows[i]);
        }
    }
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

SplitIndices split_hybrid(const FeatureMatrix& m, std::uint64_t seed) {
    return split_hybrid(m, 0.4, 0.5, seed);
}

std::vector<int> user_folds(const FeatureMatrix& m, int k, std::uint64_t seed) {
    if (k < 2) throw ValidationError("user_folds: k must be >= 2");
    auto users = rows_by_user(m);
    Rng rng(Rng::mix(seed, "user_folds"));
    rng.shuffle(users);
    // Largest users first so the greedy balance stays tight.
    std::stable_sort(users.begin(), users.end(), [](const UserRows& a, const UserRows& b) {
        return a.rows.size() > b.rows.size();
    });

    std::vector<std::size_t> load(static_cast<std::size_t>(k), 0);
    std::vector<int> fold(m.rows(), 0);
    for (const auto& u : users) {
        int lightest = 0;
        for (int f = 1; f < k; ++f) {
            if (load[f] < load[lightest]) lightest = f;
        }
        load[lightest] += u.rows.size();
        for (std::size_t r : u.rows) fold[r] = lightest;
    }
    return fold;
}

}  // namespace socon

#pragma once

// Independent reference implementations the test suites check the library
// against. Deliberately brute-force and kept free of library internals.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace test_oracles {

// AUC as the literal pairwise definition: wins + half-ties over all
// positive-negative pairs.
inline double pairwise_auc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
    double wins = 0.0;
    long long pairs = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] == 0) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j] != 0) continue;
            ++pairs;
            if (scores[i] > scores[j]) wins += 1.0;
            else if (scores[i] == scores[j]) wins += 0.5;
        }
    }
    return wins / static_cast<double>(pairs);
}

// Nearest-neighbor imputation oracle over group-structured rows.
// values: row-major with NaN for missing cells; group_of[j] gives each
// column's group; a row "misses" group g when all its g-columns are NaN.
// Distance between rows is the mean squared difference over columns whose
// group is observed in both rows; candidates must observe the target group.
// Returns the imputed value for (query_row x target column) as the mean of the
// k nearest train rows (ties by train row index).
struct KnnOracle {
    std::size_t cols = 0;
    std::vector<int> group_of;
    std::vector<double> train;   // rows x cols
    std::size_t train_rows = 0;

    bool row_misses(const double* row, int g) const {
        for (std::size_t j = 0; j < cols; ++j) {
            if (group_of[j] == g && !std::isnan(row[j])) return false;
        }
        return true;
    }

    // NaN when no candidate exists.
    double impute(const double* query, std::size_t target_col, int k) const {
        const int g = group_of[target_col];
        std::vector<std::pair<double, std::size_t>> cand;
        for (std::size_t r = 0; r < train_rows; ++r) {
            const double* row = train.data() + r * cols;
            if (row_misses(row, g)) continue;
            double acc = 0.0;
            std::size_t used = 0;
            for (std::size_t j = 0; j < cols; ++j) {
                if (std::isnan(query[j]) || std::isnan(row[j])) continue;
                const double diff = query[j] - row[j];
                acc += diff * diff;
                ++used;
            }
            if (used == 0) continue;
            cand.emplace_back(acc / static_cast<double>(used), r);
        }
        if (cand.empty()) return std::numeric_limits<double>::quiet_NaN();
        std::sort(cand.begin(), cand.end());
        const std::size_t kk = std::min<std::size_t>(static_cast<std::size_t>(k), cand.size());
        double sum = 0.0;
        for (std::size_t t = 0; t < kk; ++t) {
            sum += train[cand[t].second * cols + target_col];
        }
        return sum / static_cast<double>(kk);
    }
};

// Central finite-difference gradient of a scalar function.
inline std::vector<double> fd_gradient(const std::function<double(const std::vector<double>&)>& f,
                                       std::vector<double> x, double h_scale = 1e-6) {
    std::vector<double> g(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double h = h_scale * (1.0 + std::abs(x[k]));
        const double keep = x[k];
        x[k] = keep + h;
        const double fp = f(x);
        x[k] = keep - h;
        const double fm = f(x);
        x[k] = keep;
        g[k] = (fp - fm) / (2.0 * h);
    }
    return g;
}

// Screen-episode statistics from explicit on/off intervals, for checking the
// event-walk reconstruction. Intervals are [on, off) already clipped to the
// window by the caller.
struct EpisodeStats {
    double count = 0, total = 0, mean = 0, max = 0, min = 0, std = 0;
};

inline EpisodeStats episode_stats(const std::vector<std::pair<double, double>>& intervals) {
    EpisodeStats s;
    if (intervals.empty()) return s;
    std::vector<double> durs;
    for (auto [a, b] : intervals) durs.push_back(b - a);
    s.count = static_cast<double>(durs.size());
    for (double d : durs) s.total += d;
    s.mean = s.total / s.count;
    s.max = *std::max_element(durs.begin(), durs.end());
    s.min = *std::min_element(durs.begin(), durs.end());
    double sq = 0.0;
    for (double d : durs) sq += (d - s.mean) * (d - s.mean);
    s.std = std::sqrt(sq / s.count);
    return s;
}

}  // namespace test_oracles

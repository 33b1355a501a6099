#include "socon/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "socon/common.hpp"

namespace socon {

double auc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
    if (scores.size() != labels.size()) throw Error("auc: size mismatch");
    const std::size_t n = scores.size();
    std::size_t n_pos = 0;
    for (auto l : labels) n_pos += (l != 0);
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) {
        throw ValidationError("auc: undefined when only one class is present");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Sum of average ranks of the positives (Mann-Whitney U).
    double rank_sum = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
        for (std::size_t k = i; k < j; ++k) {
            if (labels[order[k]] != 0) rank_sum += avg_rank;
        }
        i = j;
    }
    const double u = rank_sum - static_cast<double>(n_pos) * (static_cast<double>(n_pos) + 1.0) / 2.0;
    return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double f1_macro(std::span<const double> scores, std::span<const std::uint8_t> labels,
                double threshold) {
    if (scores.size() != labels.size()) throw Error("f1_macro: size mismatch");
    long long tp = 0, fp = 0, fn = 0, tn = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const bool pred = scores[i] >= threshold;
        const bool truth = labels[i] != 0;
        if (pred && truth) ++tp;
        else if (pred && !truth) ++fp;
        else if (!pred && truth) ++fn;
        else ++tn;
    }
    auto f1 = [](long long tp_c, long long fp_c, long long fn_c) {
        const double denom = 2.0 * tp_c + fp_c + fn_c;
        return denom == 0.0 ? 0.0 : 2.0 * tp_c / denom;
    };
    // Positive class, then negative class (where negatives are the "hits").
    return 0.5 * (f1(tp, fp, fn) + f1(tn, fn, fp));
}

}  // namespace socon

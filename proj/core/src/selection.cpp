#include "socon/selection.hpp"

#include <algorithm>
#include <ostream>

#include "socon/common.hpp"
#include "socon/csv.hpp"
#include "socon/metrics.hpp"
#include "socon/rng.hpp"
#include "socon/splits.hpp"

namespace socon {

namespace {

struct Fold {
    std::vector<std::size_t> fit_rows;
    std::vector<std::size_t> val_rows;
    bool usable = false;
};

// Copies the chosen columns of the chosen rows into a dense buffer.
void gather(const FeatureMatrix& m, const std::vector<std::size_t>& rows,
            const std::vector<std::size_t>& cols, std::vector<double>& x,
            std::vector<std::uint8_t>& y) {
    x.resize(rows.size() * cols.size());
    y.resize(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double* src = m.row(rows[i]);
        for (std::size_t j = 0; j < cols.size(); ++j) x[i * cols.size() + j] = src[cols[j]];
        y[i] = m.label[rows[i]];
    }
}

}  // namespace

SelectionResult forward_select(const FeatureMatrix& train_m, ModelFamily family, int max_features,
                               int patience, std::uint64_t seed, int folds, int jobs) {
    const std::size_t d = train_m.schema.n_features();
    if (d == 0 || train_m.rows() == 0) throw ValidationError("forward_select: empty training matrix");
    if (max_features < 0 || static_cast<std::size_t>(max_features) > d) {
        throw ValidationError("forward_select: max_features exceeds available features");
    }
    const std::size_t cap = max_features == 0 ? d : static_cast<std::size_t>(max_features);
    if (patience < 1) throw ValidationError("forward_select: patience must be >= 1");

    // One fold split reused across all steps.
    const auto fold_of = user_folds(train_m, folds, Rng::mix(seed, "fs_folds"));
    std::vector<Fold> fold_data(static_cast<std::size_t>(folds));
    for (int f = 0; f < folds; ++f) {
        auto& fd = fold_data[f];
        for (std::size_t r = 0; r < train_m.rows(); ++r) {
            (fold_of[r] == f ? fd.val_rows : fd.fit_rows).push_back(r);
        }
        auto two_class = [&](const std::vector<std::size_t>& rows) {
            bool pos = false, neg = false;
            for (std::size_t r : rows) (train_m.label[r] != 0 ? pos : neg) = true;
            return pos && neg;
        };
        fd.usable = !fd.fit_rows.empty() && !fd.val_rows.empty() && two_class(fd.fit_rows) &&
                    two_class(fd.val_rows);
    }

    ModelSpec base_spec = ModelSpec::defaults(family);

    std::vector<std::size_t> selected;
    std::vector<double> trajectory;
    std::vector<bool> in_set(d, false);
    double best_auc = -1.0;
    std::size_t best_step = 0;  // 1-based
    int stalls = 0;

    while (selected.size() < cap) {
        std::vector<std::size_t> candidates;
        for (std::size_t c = 0; c < d; ++c) {
            if (!in_set[c]) candidates.push_back(c);
        }
        if (candidates.empty()) break;

        std::vector<double> cand_auc(candidates.size(), -1.0);
        parallel_for(candidates.size(), jobs, [&](std::size_t ci) {
            std::vector<std::size_t> cols = selected;
            cols.push_back(candidates[ci]);
            std::vector<std::string> names;
            names.reserve(cols.size());
            for (std::size_t c : cols) names.push_back(train_m.schema.feature_names[c]);

            std::vector<double> x_fit, x_val;
            std::vector<std::uint8_t> y_fit, y_val;
            double sum = 0.0;
            int used = 0;
            for (int f = 0; f < folds; ++f) {
                if (!fold_data[f].usable) continue;
                gather(train_m, fold_data[f].fit_rows, cols, x_fit, y_fit);
                gather(train_m, fold_data[f].val_rows, cols, x_val, y_val);
                ModelSpec spec = base_spec;
                spec.rng_seed = Rng::mix(seed, static_cast<std::uint64_t>(f));
                const auto model = train(
                    spec, DataView{x_fit.data(), y_fit.size(), cols.size(), y_fit.data()}, names);
                const auto scores =
                    model.predict_proba(DataView{x_val.data(), y_val.size(), cols.size(), nullptr});
                sum += auc(scores, y_val);
                ++used;
            }
            if (used > 0) cand_auc[ci] = sum / used;
        });

        std::size_t best_ci = 0;
        for (std::size_t ci = 1; ci < candidates.size(); ++ci) {
            if (cand_auc[ci] > cand_auc[best_ci]) best_ci = ci;  // ties keep lower index
        }
        if (cand_auc[best_ci] < 0.0) {
            warn("forward_select: no usable fold; stopping");
            break;
        }

        selected.push_back(candidates[best_ci]);
        in_set[candidates[best_ci]] = true;
        trajectory.push_back(cand_auc[best_ci]);

        if (cand_auc[best_ci] > best_auc) {
            best_auc = cand_auc[best_ci];
            best_step = selected.size();
            stalls = 0;
        } else {
            ++stalls;
            if (stalls >= patience) break;
        }
    }

    SelectionResult result;
    if (best_step == 0) return result;
    result.stopping_step = best_step;
    for (std::size_t i = 0; i < best_step; ++i) {
        result.features.push_back(train_m.schema.feature_names[selected[i]]);
        result.auc_trajectory.push_back(trajectory[i]);
    }
    return result;
}

void write_selection_csv(const SelectionResult& r, std::ostream& out) {
    csv::Writer w(out);
    w.field(std::string("step")).field(std::string("feature")).field(std::string("auc"));
    w.end_row();
    for (std::size_t i = 0; i < r.features.size(); ++i) {
        w.field(static_cast<long long>(i + 1)).field(r.features[i]).field(r.auc_trajectory[i]);
        w.end_row();
    }
}

}  // namespace socon

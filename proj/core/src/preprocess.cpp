#include "socon/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "socon/common.hpp"
#include "socon/rng.hpp"

namespace socon {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void PreprocessConfig::validate() const {
    if (!(sparse_group_threshold > 0.0 && sparse_group_threshold <= 1.0)) {
        throw ValidationError("sparse_group_threshold must be in (0,1]");
    }
    if (knn_k < 1) throw ValidationError("knn_k must be >= 1");
    if (smote_neighbors < 1) throw ValidationError("smote_neighbors must be >= 1");
    if (smote_target_ratio < 0.0 || smote_target_ratio > 1.0) {
        throw ValidationError("smote_target_ratio must be in [0,1]");
    }
    if (knn_max_reference < 0) throw ValidationError("knn_max_reference must be >= 0");
}

FittedPreprocessor fit(const FeatureMatrix& train, const PreprocessConfig& cfg) {
    cfg.validate();
    if (train.rows() == 0) throw ValidationError("fit: training matrix is empty");

    const auto& schema = train.schema;
    const std::size_t n = train.rows();

    // Group missing fractions, from the markers.
    std::vector<SensorGroup> dropped;
    for (std::size_t g = 0; g < schema.n_markers(); ++g) {
        std::size_t missing = 0;
        for (std::size_t r = 0; r < n; ++r) missing += train.marker_row(r)[g];
        const double frac = static_cast<double>(missing) / static_cast<double>(n);
        if (frac > cfg.sparse_group_threshold) dropped.push_back(schema.marker_groups[g]);
    }
    if (dropped.size() == schema.n_markers() && !dropped.empty()) {
        throw Error("fit: every sensor group exceeds the sparsity threshold");
    }

    FittedPreprocessor fp;
    fp.dropped_groups = dropped;
    fp.retained = schema.drop_groups(dropped);
    fp.standardized = cfg.standardize;
    fp.knn_k = cfg.knn_k;
    for (std::size_t j = 0; j < schema.n_features(); ++j) {
        if (fp.retained.feature_index(schema.feature_names[j]) >= 0) {
            fp.kept_feature_indices.push_back(j);
        }
    }

    const std::size_t d = fp.retained.n_features();
    fp.mean.assign(d, 0.0);
    fp.stddev.assign(d, 1.0);

    // Marker column (in the original schema) guarding each retained feature;
    // -1 for marker-less groups (time), which are always observed.
    std::vector<int> guard(d, -1);
    for (std::size_t j = 0; j < d; ++j) {
        guard[j] = schema.marker_index(fp.retained.feature_group[j]);
    }

    for (std::size_t j = 0; j < d; ++j) {
        const std::size_t src = fp.kept_feature_indices[j];
        double sum = 0.0, sq = 0.0;
        std::size_t seen = 0;
        for (std::size_t r = 0; r < n; ++r) {
            if (guard[j] >= 0 && train.marker_row(r)[guard[j]] != 0) continue;
            const double v = train.row(r)[src];
            if (std::isnan(v)) continue;
            sum += v;
            sq += v * v;
            ++seen;
        }
        if (seen == 0) continue;
        const double mean = sum / static_cast<double>(seen);
        const double var = std::max(0.0, sq / static_cast<double>(seen) - mean * mean);
        fp.mean[j] = mean;
        fp.stddev[j] = var > 1e-24 ? std::sqrt(var) : 1.0;
    }

    // Reference rows for imputation, projected and standardized. Thinned with
    // a fixed stride when larger than the configured cap.
    std::vector<std::size_t> ref_rows;
    if (cfg.knn_max_reference > 0 && n > static_cast<std::size_t>(cfg.knn_max_reference)) {
        const std::size_t stride =
            (n + static_cast<std::size_t>(cfg.knn_max_reference) - 1) / cfg.knn_max_reference;
        for (std::size_t r = 0; r < n; r += stride) ref_rows.push_back(r);
    } else {
        ref_rows.resize(n);
        for (std::size_t r = 0; r < n; ++r) ref_rows[r] = r;
    }

    const std::size_t nm = fp.retained.n_markers();
    fp.ref_rows = ref_rows.size();
    fp.ref_values.resize(fp.ref_rows * d);
    fp.ref_missing.resize(fp.ref_rows * nm);
    std::vector<int> marker_src(nm);
    for (std::size_t g = 0; g < nm; ++g) marker_src[g] = schema.marker_index(fp.retained.marker_groups[g]);

    for (std::size_t i = 0; i < fp.ref_rows; ++i) {
        const std::size_t r = ref_rows[i];
        for (std::size_t j = 0; j < d; ++j) {
            double v = train.row(r)[fp.kept_feature_indices[j]];
            if (!std::isnan(v) && fp.standardized) v = (v - fp.mean[j]) / fp.stddev[j];
            fp.ref_values[i * d + j] = v;
        }
        for (std::size_t g = 0; g < nm; ++g) {
            fp.ref_missing[i * nm + g] = train.marker_row(r)[marker_src[g]];
        }
    }
    return fp;
}

FeatureMatrix transform(const FittedPreprocessor& fp, const FeatureMatrix& m,
                        TransformStats* stats, int jobs) {
    FeatureMatrix out = m.project(fp.kept_feature_indices);
    if (out.schema.feature_names != fp.retained.feature_names) {
        throw ValidationError("transform: matrix schema does not match the fitted schema");
    }
    const std::size_t n = out.rows();
    const std::size_t d = fp.n_features();
    const std::size_t nm = out.schema.n_markers();

    // Feature columns per retained marker group.
    std::vector<std::vector<std::size_t>> group_cols(nm);
    std::vector<int> col_marker(d, -1);  // marker index guarding each column
    for (std::size_t g = 0; g < nm; ++g) {
        group_cols[g] = out.schema.features_of(out.schema.marker_groups[g]);
        for (std::size_t c : group_cols[g]) col_marker[c] = static_cast<int>(g);
    }

    std::vector<std::uint8_t> row_imputed(n, 0);
    std::vector<std::uint8_t> row_fallback(n, 0);

    parallel_for(n, jobs, [&](std::size_t r) {
        double* row = out.row(r);
        const std::uint8_t* marks = out.marker_row(r);

        if (fp.standardized) {
            for (std::size_t j = 0; j < d; ++j) {
                if (col_marker[j] >= 0 && marks[col_marker[j]] != 0) continue;
                if (std::isnan(row[j])) continue;
                row[j] = (row[j] - fp.mean[j]) / fp.stddev[j];
            }
        }

        bool any_missing = false;
        for (std::size_t g = 0; g < nm; ++g) any_missing |= marks[g] != 0;
        if (!any_missing) return;
        row_imputed[r] = 1;

        // Nearest reference rows per missing group; distance is the mean
        // squared difference over features observed on both sides.
        for (std::size_t g = 0; g < nm; ++g) {
            if (marks[g] == 0) continue;
            std::vector<std::pair<double, std::size_t>> candidates;
            candidates.reserve(fp.ref_rows);
            for (std::size_t i = 0; i < fp.ref_rows; ++i) {
                const std::uint8_t* ref_miss = fp.ref_missing.data() + i * nm;
                if (ref_miss[g] != 0) continue;  // neighbor must observe the group
                const double* ref = fp.ref_values.data() + i * d;
                double acc = 0.0;
                std::size_t used = 0;
                for (std::size_t j = 0; j < d; ++j) {
                    const int cm = col_marker[j];
                    if (cm >= 0 && (marks[cm] != 0 || ref_miss[cm] != 0)) continue;
                    const double diff = row[j] - ref[j];
                    acc += diff * diff;
                    ++used;
                }
                const double dist = used == 0 ? kInf : acc / static_cast<double>(used);
                if (dist < kInf) candidates.emplace_back(dist, i);
            }
            if (candidates.empty()) {
                // No usable neighbor; fall back to the training means.
                for (std::size_t c : group_cols[g]) row[c] = fp.standardized ? 0.0 : fp.mean[c];
                row_fallback[r] = 1;
                continue;
            }
            const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(fp.knn_k),
                                                        candidates.size());
            std::partial_sort(candidates.begin(), candidates.begin() + k, candidates.end());
            for (std::size_t c : group_cols[g]) {
                double sum = 0.0;
                for (std::size_t t = 0; t < k; ++t) {
                    sum += fp.ref_values[candidates[t].second * d + c];
                }
                row[c] = sum / static_cast<double>(k);
            }
        }
    });

    if (stats != nullptr) {
        for (std::size_t r = 0; r < n; ++r) {
            stats->rows_imputed += row_imputed[r];
            stats->fallback_rows += row_fallback[r];
        }
    }
    std::size_t fallbacks = 0;
    for (auto v : row_fallback) fallbacks += v;
    if (fallbacks > 0) {
        warn("transform: " + std::to_string(fallbacks) +
             " row(s) had no usable neighbor; imputed from training means");
    }
    return out;
}

FeatureMatrix smote(const FeatureMatrix& train, const PreprocessConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    const long long n_alone = train.count_label(BinaryLabel::Alone);
    const long long n_not = train.count_label(BinaryLabel::NotAlone);
    if (n_alone == 0 || n_not == 0) {
        throw ValidationError("smote: training matrix must contain both classes");
    }
    for (double v : train.values) {
        if (std::isnan(v)) throw ValidationError("smote: matrix must be dense (impute first)");
    }

    const BinaryLabel minority_label = n_alone <= n_not ? BinaryLabel::Alone : BinaryLabel::NotAlone;
    const long long minority = std::min(n_alone, n_not);
    const long long majority = std::max(n_alone, n_not);
    const long long needed = static_cast<long long>(
        std::ceil(cfg.smote_target_ratio * static_cast<double>(majority) - 1e-9)) - minority;

    FeatureMatrix out = train;
    if (needed <= 0) return out;

    std::vector<std::size_t> minority_rows;
    for (std::size_t r = 0; r < train.rows(); ++r) {
        if (train.label[r] == static_cast<std::uint8_t>(minority_label)) minority_rows.push_back(r);
    }

    const std::size_t d = train.cols();
    const std::size_t nm = train.schema.n_markers();
    const std::size_t n_min = minority_rows.size();

    int k = cfg.smote_neighbors;
    if (static_cast<long long>(n_min) <= k) {
        k = static_cast<int>(n_min) - 1;
        warn("smote: minority class smaller than requested neighbor count; using k=" + std::to_string(k));
    }

    // Neighbor lists among minority rows (Euclidean over features + markers).
    std::vector<std::vector<std::size_t>> neighbors(n_min);
    if (k > 0) {
        for (std::size_t a = 0; a < n_min; ++a) {
            std::vector<std::pair<double, std::size_t>> dists;
            dists.reserve(n_min - 1);
            const double* xa = train.row(minority_rows[a]);
            const std::uint8_t* ma = train.marker_row(minority_rows[a]);
            for (std::size_t b = 0; b < n_min; ++b) {
                if (a == b) continue;
                const double* xb = train.row(minority_rows[b]);
                const std::uint8_t* mb = train.marker_row(minority_rows[b]);
                double acc = 0.0;
                for (std::size_t j = 0; j < d; ++j) {
                    const double diff = xa[j] - xb[j];
                    acc += diff * diff;
                }
                for (std::size_t j = 0; j < nm; ++j) {
                    const double diff = static_cast<double>(ma[j]) - static_cast<double>(mb[j]);
                    acc += diff * diff;
                }
                dists.emplace_back(acc, b);
            }
            const std::size_t kk = std::min<std::size_t>(static_cast<std::size_t>(k), dists.size());
            std::partial_sort(dists.begin(), dists.begin() + kk, dists.end());
            neighbors[a].reserve(kk);
            for (std::size_t t = 0; t < kk; ++t) neighbors[a].push_back(dists[t].second);
        }
    }

    Rng rng(Rng::mix(seed, "smote"));
    std::vector<double> vals(d);
    std::vector<std::uint8_t> marks(nm);
    for (long long s = 0; s < needed; ++s) {
        const std::size_t a = static_cast<std::size_t>(rng.below(n_min));
        const double* xa = train.row(minority_rows[a]);
        const std::uint8_t* ma = train.marker_row(minority_rows[a]);
        const double lambda = rng.next_double();

        if (neighbors[a].empty()) {
            // Single minority point: replicate it.
            std::copy(xa, xa + d, vals.begin());
            std::copy(ma, ma + nm, marks.begin());
        } else {
            const std::size_t b = neighbors[a][rng.below(neighbors[a].size())];
            const double* xb = train.row(minority_rows[b]);
            const std::uint8_t* mb = train.marker_row(minority_rows[b]);
            for (std::size_t j = 0; j < d; ++j) vals[j] = xa[j] + lambda * (xb[j] - xa[j]);
            for (std::size_t j = 0; j < nm; ++j) {
                const double interp =
                    static_cast<double>(ma[j]) +
                    lambda * (static_cast<double>(mb[j]) - static_cast<double>(ma[j]));
                marks[j] = interp >= 0.5 ? 1 : 0;
            }
        }
        const std::size_t src = minority_rows[a];
        out.push_row(train.participant_id[src], train.country[src], train.report_timestamp[src],
                     static_cast<std::uint8_t>(minority_label), vals, marks, 1);
    }
    return out;
}

}  // namespace socon

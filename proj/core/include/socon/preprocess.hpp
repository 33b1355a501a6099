#pragma once

#include <cstdint>
#include <vector>

#include "socon/matrix.hpp"

namespace socon {

struct PreprocessConfig {
    double sparse_group_threshold = 0.9;  // drop groups missing in > this fraction of train rows
    int knn_k = 2;
    int smote_neighbors = 5;
    double smote_target_ratio = 1.0;      // minority/majority ratio to reach
    bool standardize = true;
    // Upper bound on retained reference rows for neighbor lookups; 0 keeps all.
    // Rows are thinned with a deterministic stride.
    int knn_max_reference = 2000;

    void validate() const;
};

// Everything learned from a training matrix: the retained schema, per-feature
// standardization statistics (over observed values), and the reference rows
// used to impute missing groups. Immutable once fitted.
struct FittedPreprocessor {
    FeatureSchema retained;
    std::vector<std::size_t> kept_feature_indices;  // into the original schema
    std::vector<SensorGroup> dropped_groups;
    std::vector<double> mean;    // per retained feature
    std::vector<double> stddev;  // per retained feature; 1 where degenerate
    bool standardized = true;
    int knn_k = 2;

    // Reference rows, already projected and standardized.
    std::size_t ref_rows = 0;
    std::vector<double> ref_values;          // ref_rows x retained features
    std::vector<std::uint8_t> ref_missing;   // ref_rows x retained markers

    std::size_t n_features() const { return retained.n_features(); }
};

struct TransformStats {
    std::size_t rows_imputed = 0;    // rows with at least one imputed group
    std::size_t fallback_rows = 0;   // rows imputed from plain train means
};

// Learns retained groups (missing fraction <= threshold), standardization
// statistics, and the imputation reference set from the training matrix only.
FittedPreprocessor fit(const FeatureMatrix& train, const PreprocessConfig& cfg = {});

// Projects to the retained schema, standardizes, and imputes each missing
// group from the k nearest reference rows (squared distance averaged over
// features observed on both sides; neighbors must have the group observed).
// Markers are 1 exactly where imputation occurred. Pure function of
// (preprocessor, input).
FeatureMatrix transform(const FittedPreprocessor& fp, const FeatureMatrix& m,
                        TransformStats* stats = nullptr, int jobs = 1);

// Oversamples the minority class by interpolating between minority rows and
// their nearest minority neighbors until the class ratio reaches the target.
// Synthetic rows carry the synthetic flag, inherit the seed row's metadata,
// and have markers rounded back to {0,1}. Input must be dense (post-transform).
FeatureMatrix smote(const FeatureMatrix& train, const PreprocessConfig& cfg, std::uint64_t seed);

}  // namespace socon

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "socon/matrix.hpp"

namespace socon {

struct MixedEffectsResult {
    std::string feature;
    double coefficient = 0.0;            // slope on the feature
    double std_error = 0.0;
    double z_score = 0.0;
    double p_value = 1.0;                // two-sided normal
    double p_adjusted = 1.0;             // Bonferroni, filled by rank_features
    double random_intercept_variance = 0.0;
    double log_likelihood = 0.0;         // Laplace-approximate marginal log-likelihood
};

// Logistic regression with a per-cluster random intercept, fitted by
// maximizing the Laplace-approximated marginal likelihood with a quasi-Newton
// optimizer. `labels` are 1 = Alone; the model's positive direction is
// NotAlone = 1, so reported coefficients refer to not being alone. Requires
// at least two clusters and both classes; throws Error (with the last
// gradient norm) on non-convergence.
MixedEffectsResult fit_glmm(std::span<const double> feature_values,
                            std::span<const std::uint8_t> labels,
                            std::span<const int> cluster_ids);

// The Laplace objective (mean negative marginal log-likelihood) and gradient
// at params = (beta0, beta1, log_sigma); exposed for gradient checking.
double glmm_objective(std::span<const double> params, std::span<const double> feature_values,
                      std::span<const std::uint8_t> labels, std::span<const int> cluster_ids,
                      std::span<double> grad_out);

// min(1, m * p) with m = p_values.size().
std::vector<double> bonferroni(std::span<const double> p_values);

// One univariate mixed-effects fit per feature column (markers included as
// 0/1 features) over the scoped rows; sorted by ascending adjusted p-value,
// then p-value, then schema index. scope is a country name or empty for all
// rows. Features whose fit fails are excluded with a warning.
std::vector<MixedEffectsResult> rank_features(const FeatureMatrix& fm, int top_k = 10,
                                              const std::string& scope = "", int jobs = 1);

void write_ranking_csv(std::span<const MixedEffectsResult> ranking, std::ostream& out);

}  // namespace socon

#pragma once

#include <cstdint>
#include <span>

namespace socon {

// Rank-based AUC: the probability that a uniformly drawn positive outscores a
// uniformly drawn negative, ties counted one half. Throws ValidationError when
// only one class is present.
double auc(std::span<const double> scores, std::span<const std::uint8_t> labels);

// Unweighted mean of the two per-class F1 values of the thresholded
// predictions (score >= threshold -> positive). A class with a zero
// denominator contributes 0.
double f1_macro(std::span<const double> scores, std::span<const std::uint8_t> labels,
                double threshold = 0.5);

}  // namespace socon

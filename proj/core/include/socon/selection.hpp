#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "socon/matrix.hpp"
#include "socon/models.hpp"

namespace socon {

struct SelectionResult {
    std::vector<std::string> features;      // selection order, truncated at the best step
    std::vector<double> auc_trajectory;     // validation AUC after each kept step
    std::size_t stopping_step = 0;          // 1-based; equals features.size()
};

// Greedy sequential forward selection. At every step the candidate feature
// with the highest mean validation AUC (family defaults, user-disjoint folds
// fixed once per call) joins the set; the loop stops after `patience` steps
// without improvement or at max_features (0 = no cap), and the prefix ending
// at the best step is returned. Ties break toward the lower schema index.
SelectionResult forward_select(const FeatureMatrix& train, ModelFamily family, int max_features,
                               int patience = 5, std::uint64_t seed = 0, int folds = 3, int jobs = 1);

// CSV rows of (step, feature, auc).
void write_selection_csv(const SelectionResult& r, std::ostream& out);

}  // namespace socon

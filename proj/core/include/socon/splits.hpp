#pragma once

#include <cstdint>
#include <vector>

#include "socon/matrix.hpp"

namespace socon {

struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

// User-disjoint split: users are shuffled with `seed` and the prefix whose row
// count lands closest to test_fraction of all rows becomes the test set
// (at least one user on each side). Throws with fewer than two users.
SplitIndices split_population(const FeatureMatrix& m, double test_fraction, std::uint64_t seed);

// Partially personalized split: first a user-disjoint split at
// initial_test_fraction, then for each testing user their chronologically
// first ceil(transfer_fraction * n) rows move into training. The boundary is
// extended past timestamp ties so every training row of a testing user
// strictly precedes all of that user's testing rows.
SplitIndices split_hybrid(const FeatureMatrix& m, double initial_test_fraction,
                          double transfer_fraction, std::uint64_t seed);
SplitIndices split_hybrid(const FeatureMatrix& m, std::uint64_t seed);

// Per-row fold assignment in 0..k-1; all rows of a user share a fold. Users
// are dealt greedily (largest first in shuffled order) onto the lightest fold.
std::vector<int> user_folds(const FeatureMatrix& m, int k, std::uint64_t seed);

}  // namespace socon

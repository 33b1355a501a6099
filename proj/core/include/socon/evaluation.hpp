#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "socon/matrix.hpp"
#include "socon/models.hpp"
#include "socon/preprocess.hpp"

namespace socon {

enum class Approach : std::uint8_t {
    multi_country,
    country_specific,
    country_agnostic_one_to_many,
    country_agnostic_many_to_one,
};

enum class Personalization : std::uint8_t { population, hybrid };

std::string_view to_string(Approach a);
std::string_view to_string(Personalization p);
std::optional<Approach> parse_approach(std::string_view s);
std::optional<Personalization> parse_personalization(std::string_view s);

struct EvalConfig {
    Approach approach = Approach::multi_country;
    Personalization personalization = Personalization::population;
    int n_seeds = 10;
    std::uint64_t master_seed = 0;  // run seeds are master_seed + 0..n_seeds-1
    double plm_test_fraction = 0.2;
    double hm_initial_test_fraction = 0.4;
    double hm_transfer_fraction = 0.5;
    ModelFamily family = ModelFamily::random_forest;
    bool use_feature_selection = false;
    int selection_max_features = 0;  // 0 = no cap
    int selection_patience = 5;
    bool tune = false;           // grid-search the family's stock grid
    bool tune_per_seed = true;   // false: settle the grid once (seed 0) per cell
    bool smote_per_country = false;  // oversample within each country's rows
    int grid_folds = 3;
    PreprocessConfig preprocess;

    void validate() const;
};

struct RunRecord {
    Approach approach;
    std::string train_countries;  // "all", one country, or "+"-joined set
    std::string test_country;
    ModelFamily family;
    Personalization personalization;
    bool feature_selection = false;
    int seed = 0;
    double auc = 0.0;
    double f1 = 0.0;
};

struct CellSummary {
    std::string train_countries;
    std::string test_country;
    double auc_mean = 0.0, auc_std = 0.0;
    double f1_mean = 0.0, f1_std = 0.0;
    int n_seeds = 0;
    bool diagonal = false;  // one-to-many cell whose protocol is country-specific
};

struct ExperimentResult {
    EvalConfig config;
    std::vector<RunRecord> runs;

    // Mean and population standard deviation over the seeds of each cell.
    std::vector<CellSummary> summaries() const;

    void write_csv(std::ostream& out) const;
    void write_json(std::ostream& out) const;
    // Human-readable rollup; a train x test matrix for one-to-many runs
    // (diagonal cells starred), per-cell rows otherwise.
    void write_summary(std::ostream& out) const;
};

// Runs every (cell, seed) of the configured protocol: split (population or
// hybrid) where the approach trains and tests inside the same rows, fit the
// preprocessor on training rows only, optional forward selection, optional
// grid search, oversample, train, score. Baseline families skip oversampling.
// Component failures are rethrown with (approach, countries, seed) context.
ExperimentResult run_experiment(const EvalConfig& cfg, const FeatureMatrix& fm, int jobs = 1);

}  // namespace socon

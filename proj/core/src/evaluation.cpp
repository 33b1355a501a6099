#include "socon/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "socon/common.hpp"
#include "socon/csv.hpp"
#include "socon/metrics.hpp"
#include "socon/rng.hpp"
#include "socon/selection.hpp"
#include "socon/splits.hpp"

namespace socon {

using nlohmann::json;

namespace {

constexpr std::string_view kApproachNames[] = {
    "multi_country",
    "country_specific",
    "country_agnostic_one_to_many",
    "country_agnostic_many_to_one",
};
constexpr std::string_view kPersonalizationNames[] = {"population", "hybrid"};

}  // namespace

std::string_view to_string(Approach a) { return kApproachNames[static_cast<int>(a)]; }
std::string_view to_string(Personalization p) { return kPersonalizationNames[static_cast<int>(p)]; }

std::optional<Approach> parse_approach(std::string_view s) {
    for (int i = 0; i < 4; ++i) {
        if (kApproachNames[i] == s) return static_cast<Approach>(i);
    }
    return std::nullopt;
}

std::optional<Personalization> parse_personalization(std::string_view s) {
    for (int i = 0; i < 2; ++i) {
        if (kPersonalizationNames[i] == s) return static_cast<Personalization>(i);
    }
    return std::nullopt;
}

void EvalConfig::validate() const {
    if (n_seeds < 1) throw ValidationError("n_seeds must be >= 1");
    auto frac = [](double v, const char* name) {
        if (!(v > 0.0 && v < 1.0)) {
            throw ValidationError(std::string(name) + " must be in (0,1)");
        }
    };
    frac(plm_test_fraction, "plm_test_fraction");
    frac(hm_initial_test_fraction, "hm_initial_test_fraction");
    frac(hm_transfer_fraction, "hm_transfer_fraction");
    if (grid_folds < 2) throw ValidationError("grid_folds must be >= 2");
    if (selection_patience < 1) throw ValidationError("selection_patience must be >= 1");
    if ((approach == Approach::country_agnostic_one_to_many ||
         approach == Approach::country_agnostic_many_to_one) &&
        personalization == Personalization::hybrid) {
        throw ValidationError("country-agnostic approaches support population-level models only");
    }
    preprocess.validate();
}

namespace {

struct CellTask {
    std::string train_countries;
    std::string test_country;
    bool diagonal = false;        // one-to-many diagonal -> country-specific protocol
    bool split_within = true;     // split train/test inside `rows`
    std::vector<std::size_t> train_rows;  // used when !split_within
    std::vector<std::size_t> test_rows;
    std::vector<std::size_t> rows;        // used when split_within
};

struct RunOutcome {
    double auc = 0.0;
    double f1 = 0.0;
    ModelSpec chosen_spec;
};

std::string join_countries(const std::vector<std::string>& cs, const std::string& skip) {
    std::string out;
    for (const auto& c : cs) {
        if (c == skip) continue;
        if (!out.empty()) out += "+";
        out += c;
    }
    return out;
}

FeatureMatrix smote_for_training(const FeatureMatrix& train, const EvalConfig& cfg,
                                 std::uint64_t seed) {
    if (!cfg.smote_per_country) return smote(train, cfg.preprocess, seed);
    FeatureMatrix out = train;
    for (const auto& country : train.distinct_countries()) {
        const auto rows = train.rows_of_country(country);
        FeatureMatrix part = train.subset(rows);
        if (part.count_label(BinaryLabel::Alone) == 0 ||
            part.count_label(BinaryLabel::NotAlone) == 0) {
            continue;
        }
        const FeatureMatrix grown =
            smote(part, cfg.preprocess, Rng::mix(seed, std::string_view(country)));
        // Append only the synthetic tail.
        for (std::size_t r = part.rows(); r < grown.rows(); ++r) {
            std::vector<double> vals(grown.row(r), grown.row(r) + grown.cols());
            std::vector<std::uint8_t> marks(grown.marker_row(r),
                                            grown.marker_row(r) + grown.schema.n_markers());
            out.push_row(grown.participant_id[r], grown.country[r], grown.report_timestamp[r],
                         grown.label[r], vals, marks, 1);
        }
    }
    return out;
}

// One (cell, seed) evaluation. frozen_spec short-circuits tuning.
RunOutcome run_single(const EvalConfig& cfg, const FeatureMatrix& fm, const CellTask& cell,
                      int seed_index, const ModelSpec* frozen_spec, int jobs) {
    const std::uint64_t seed = cfg.master_seed + static_cast<std::uint64_t>(seed_index);

    FeatureMatrix train_m, test_m;
    if (cell.split_within) {
        const FeatureMatrix pool = fm.subset(cell.rows);
        const SplitIndices split =
            cfg.personalization == Personalization::population
                ? split_population(pool, cfg.plm_test_fraction, seed)
                : split_hybrid(pool, cfg.hm_initial_test_fraction, cfg.hm_transfer_fraction, seed);
        train_m = pool.subset(split.train);
        test_m = pool.subset(split.test);
    } else {
        train_m = fm.subset(cell.train_rows);
        test_m = fm.subset(cell.test_rows);
    }

    const FittedPreprocessor fp = fit(train_m, cfg.preprocess);
    FeatureMatrix train_p = transform(fp, train_m, nullptr, jobs);
    FeatureMatrix test_p = transform(fp, test_m, nullptr, jobs);

    if (cfg.use_feature_selection) {
        const SelectionResult sel =
            forward_select(train_p, cfg.family, cfg.selection_max_features, cfg.selection_patience,
                           Rng::mix(seed, "selection"), cfg.grid_folds, jobs);
        if (!sel.features.empty()) {
            std::vector<std::size_t> cols;
            for (const auto& name : sel.features) {
                cols.push_back(static_cast<std::size_t>(train_p.schema.feature_index(name)));
            }
            train_p = train_p.project(cols);
            test_p = test_p.project(cols);
        }
    }

    ModelSpec spec;
    if (frozen_spec != nullptr) {
        spec = *frozen_spec;
    } else if (cfg.tune && !is_baseline(cfg.family)) {
        const auto grid = default_grid(cfg.family);
        spec = grid_search(cfg.family, grid, train_p, cfg.grid_folds, Rng::mix(seed, "grid"),
                           &cfg.preprocess, jobs);
    } else {
        spec = ModelSpec::defaults(cfg.family);
    }
    spec.rng_seed = Rng::mix(seed, "model");

    const FeatureMatrix train_final =
        is_baseline(cfg.family) ? train_p
                                : smote_for_training(train_p, cfg, Rng::mix(seed, "smote"));

    const TrainedModel model = train(spec, train_final, jobs);
    const auto scores = model.predict_proba(test_p);

    RunOutcome out;
    out.auc = auc(scores, test_p.label);
    out.f1 = f1_macro(scores, test_p.label);
    out.chosen_spec = spec;
    return out;
}

std::vector<CellTask> build_cells(const EvalConfig& cfg, const FeatureMatrix& fm) {
    std::vector<CellTask> cells;
    const auto countries = fm.distinct_countries();

    auto all_rows = [&] {
        std::vector<std::size_t> rows(fm.rows());
        for (std::size_t r = 0; r < rows.size(); ++r) rows[r] = r;
        return rows;
    };

    switch (cfg.approach) {
        case Approach::multi_country: {
            CellTask cell;
            cell.train_countries = "all";
            cell.test_country = "all";
            cell.rows = all_rows();
            cells.push_back(std::move(cell));
            break;
        }
        case Approach::country_specific: {
            for (const auto& c : countries) {
                CellTask cell;
                cell.train_countries = c;
                cell.test_country = c;
                cell.rows = fm.rows_of_country(c);
                cells.push_back(std::move(cell));
            }
            break;
        }
        case Approach::country_agnostic_one_to_many: {
            for (const auto& a : countries) {
                for (const auto& b : countries) {
                    CellTask cell;
                    cell.train_countries = a;
                    cell.test_country = b;
                    if (a == b) {
                        cell.diagonal = true;
                        cell.rows = fm.rows_of_country(a);
                    } else {
                        cell.split_within = false;
                        cell.train_rows = fm.rows_of_country(a);
                        cell.test_rows = fm.rows_of_country(b);
                    }
                    cells.push_back(std::move(cell));
                }
            }
            break;
        }
        case Approach::country_agnostic_many_to_one: {
            for (const auto& target : countries) {
                CellTask cell;
                cell.train_countries = join_countries(countries, target);
                cell.test_country = target;
                cell.split_within = false;
                cell.test_rows = fm.rows_of_country(target);
                for (std::size_t r = 0; r < fm.rows(); ++r) {
                    if (fm.country[r] != target) cell.train_rows.push_back(r);
                }
                cells.push_back(std::move(cell));
            }
            break;
        }
    }
    return cells;
}

}  // namespace

ExperimentResult run_experiment(const EvalConfig& cfg, const FeatureMatrix& fm, int jobs) {
    cfg.validate();
    if (fm.rows() == 0) throw ValidationError("run_experiment: empty feature matrix");

    const auto cells = build_cells(cfg, fm);
    if (cells.empty()) throw ValidationError("run_experiment: no evaluable cells");

    struct Task {
        std::size_t cell;
        int seed_index;
    };
    std::vector<Task> tasks;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        for (int s = 0; s < cfg.n_seeds; ++s) tasks.push_back({c, s});
    }

    std::vector<RunOutcome> outcomes(tasks.size());
    std::vector<std::string> failures(tasks.size());

    // When tuning is settled once per cell, seed 0 runs first and its chosen
    // spec is frozen for the remaining seeds.
    std::vector<ModelSpec> frozen(cells.size());
    std::vector<char> has_frozen(cells.size(), 0);
    const bool freeze = cfg.tune && !cfg.tune_per_seed;

    auto run_task = [&](std::size_t t, const ModelSpec* spec, int inner_jobs) {
        const auto& task = tasks[t];
        try {
            outcomes[t] = run_single(cfg, fm, cells[task.cell], task.seed_index, spec, inner_jobs);
        } catch (const std::exception& ex) {
            failures[t] = std::string(to_string(cfg.approach)) + " train=" +
                          cells[task.cell].train_countries + " test=" +
                          cells[task.cell].test_country + " seed=" +
                          std::to_string(task.seed_index) + ": " + ex.what();
        }
    };

    const int inner_jobs = tasks.size() > 1 ? 1 : jobs;
    if (freeze) {
        std::vector<std::size_t> first, rest;
        for (std::size_t t = 0; t < tasks.size(); ++t) {
            (tasks[t].seed_index == 0 ? first : rest).push_back(t);
        }
        parallel_for(first.size(), jobs, [&](std::size_t i) { run_task(first[i], nullptr, inner_jobs); });
        for (std::size_t t : first) {
            if (failures[t].empty()) {
                frozen[tasks[t].cell] = outcomes[t].chosen_spec;
                has_frozen[tasks[t].cell] = 1;
            }
        }
        parallel_for(rest.size(), jobs, [&](std::size_t i) {
            const std::size_t t = rest[i];
            run_task(t, has_frozen[tasks[t].cell] ? &frozen[tasks[t].cell] : nullptr, inner_jobs);
        });
    } else {
        parallel_for(tasks.size(), jobs, [&](std::size_t t) { run_task(t, nullptr, inner_jobs); });
    }

    for (const auto& f : failures) {
        if (!f.empty()) throw Error("run_experiment: " + f);
    }

    ExperimentResult result;
    result.config = cfg;
    result.runs.reserve(tasks.size());
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        const auto& cell = cells[tasks[t].cell];
        RunRecord r;
        r.approach = cfg.approach;
        r.train_countries = cell.train_countries;
        r.test_country = cell.test_country;
        r.family = cfg.family;
        r.personalization = cell.diagonal ? Personalization::population : cfg.personalization;
        r.feature_selection = cfg.use_feature_selection;
        r.seed = tasks[t].seed_index;
        r.auc = outcomes[t].auc;
        r.f1 = outcomes[t].f1;
        result.runs.push_back(std::move(r));
    }
    return result;
}

std::vector<CellSummary> ExperimentResult::summaries() const {
    std::map<std::pair<std::string, std::string>, std::vector<const RunRecord*>> by_cell;
    for (const auto& r : runs) by_cell[{r.train_countries, r.test_country}].push_back(&r);

    std::vector<CellSummary> out;
    for (const auto& [key, records] : by_cell) {
        CellSummary s;
        s.train_countries = key.first;
        s.test_country = key.second;
        s.n_seeds = static_cast<int>(records.size());
        s.diagonal = config.approach == Approach::country_agnostic_one_to_many &&
                     key.first == key.second;
        double auc_sum = 0.0, f1_sum = 0.0;
        for (const auto* r : records) {
            auc_sum += r->auc;
            f1_sum += r->f1;
        }
        s.auc_mean = auc_sum / s.n_seeds;
        s.f1_mean = f1_sum / s.n_seeds;
        double auc_sq = 0.0, f1_sq = 0.0;
        for (const auto* r : records) {
            auc_sq += (r->auc - s.auc_mean) * (r->auc - s.auc_mean);
            f1_sq += (r->f1 - s.f1_mean) * (r->f1 - s.f1_mean);
        }
        s.auc_std = std::sqrt(auc_sq / s.n_seeds);
        s.f1_std = std::sqrt(f1_sq / s.n_seeds);
        out.push_back(std::move(s));
    }
    return out;
}

void ExperimentResult::write_csv(std::ostream& out) const {
    csv::Writer w(out);
    w.field(std::string("approach")).field(std::string("train_countries"))
        .field(std::string("test_country")).field(std::string("model"))
        .field(std::string("personalization")).field(std::string("feature_selection"))
        .field(std::string("seed")).field(std::string("auc")).field(std::string("f1"));
    w.end_row();
    for (const auto& r : runs) {
        w.field(std::string(to_string(r.approach))).field(r.train_countries).field(r.test_country)
            .field(std::string(to_string(r.family)))
            .field(std::string(to_string(r.personalization)))
            .field(static_cast<long long>(r.feature_selection ? 1 : 0))
            .field(static_cast<long long>(r.seed)).field(r.auc).field(r.f1);
        w.end_row();
    }
}

void ExperimentResult::write_json(std::ostream& out) const {
    json doc;
    doc["approach"] = std::string(to_string(config.approach));
    doc["personalization"] = std::string(to_string(config.personalization));
    doc["model"] = std::string(to_string(config.family));
    doc["n_seeds"] = config.n_seeds;
    doc["master_seed"] = config.master_seed;
    doc["feature_selection"] = config.use_feature_selection;
    json runs_json = json::array();
    for (const auto& r : runs) {
        runs_json.push_back({{"train_countries", r.train_countries},
                             {"test_country", r.test_country},
                             {"personalization", std::string(to_string(r.personalization))},
                             {"seed", r.seed},
                             {"auc", r.auc},
                             {"f1", r.f1}});
    }
    doc["runs"] = std::move(runs_json);
    json cells = json::array();
    for (const auto& s : summaries()) {
        cells.push_back({{"train_countries", s.train_countries},
                         {"test_country", s.test_country},
                         {"auc_mean", s.auc_mean},
                         {"auc_std", s.auc_std},
                         {"f1_mean", s.f1_mean},
                         {"f1_std", s.f1_std},
                         {"n_seeds", s.n_seeds},
                         {"diagonal", s.diagonal}});
    }
    doc["cells"] = std::move(cells);
    out << doc.dump(2) << '\n';
}

namespace {

std::string pct(double v, double sd) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.1f (%.1f)", 100.0 * v, 100.0 * sd);
    return buf;
}

}  // namespace

void ExperimentResult::write_summary(std::ostream& out) const {
    const auto cells = summaries();
    out << "approach: " << to_string(config.approach)
        << "  model: " << to_string(config.family)
        << "  personalization: " << to_string(config.personalization)
        << "  feature_selection: " << (config.use_feature_selection ? "on" : "off")
        << "  seeds: " << config.n_seeds << "\n";
    out << "metrics: mean over seeds, std in brackets, percent\n\n";

    if (config.approach == Approach::country_agnostic_one_to_many) {
        std::vector<std::string> countries;
        for (const auto& c : cells) {
            if (std::find(countries.begin(), countries.end(), c.test_country) == countries.end()) {
                countries.push_back(c.test_country);
            }
        }
        std::sort(countries.begin(), countries.end());
        out << "rows = training country, columns = testing country; * = same-country protocol\n\n";
        out << "train\\test";
        for (const auto& c : countries) out << "\t" << c;
        out << "\n";
        for (const auto& a : countries) {
            out << a;
            for (const auto& b : countries) {
                auto it = std::find_if(cells.begin(), cells.end(), [&](const CellSummary& s) {
                    return s.train_countries == a && s.test_country == b;
                });
                out << "\t";
                if (it != cells.end()) {
                    out << pct(it->auc_mean, it->auc_std) << " / " << pct(it->f1_mean, it->f1_std)
                        << (it->diagonal ? " *" : "");
                }
            }
            out << "\n";
        }
        return;
    }

    out << "train_countries\ttest_country\tAUC\tF1\n";
    for (const auto& c : cells) {
        out << c.train_countries << "\t" << c.test_country << "\t" << pct(c.auc_mean, c.auc_std)
            << "\t" << pct(c.f1_mean, c.f1_std) << "\n";
    }
}

}  // namespace socon

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "socon/types.hpp"

namespace socon {

// Label-conditioned effect on one generator handle: the first value applies to
// Alone windows, the second to NotAlone windows. Units are handle-specific
// z-like shifts (continuous payloads move by a fixed scale per unit, count
// rates are multiplied by exp(value)).
using FeatureEffect = std::pair<double, double>;

struct CountryProfile {
    std::string country;
    int n_participants = 10;
    double reports_mean = 150.0;
    double reports_spread = 35.0;
    double alone_prevalence = 0.5;
    int utc_offset_minutes = 0;
    std::map<std::string, FeatureEffect> feature_effects;  // keyed by handle name
    std::map<Modality, double> missingness;                // P(group absent per window)
    double user_signature_strength = 0.0;

    // Throws ValidationError naming the offending field (prefix.field).
    void validate(const std::string& prefix) const;
};

struct GeneratorConfig {
    std::vector<CountryProfile> profiles;
    std::uint64_t master_seed = 0;
    int study_days = 28;

    void validate() const;
};

// Generator handles that feature_effects and per-user signatures can target.
// Each corresponds to a schema feature whose windowed aggregate the generator
// can shift directly.
const std::vector<std::string>& effect_handles();
bool is_effect_handle(const std::string& name);

// Deterministic synthetic cohort. Streams are derived hierarchically
// (master_seed -> country -> participant -> report), so participants are
// independent and may be generated in parallel. Events are emitted inside a
// +-300 s span around each report; a modality drawn missing for a window emits
// nothing there. Reports land on waking hours (08-21 local).
Dataset generate(const GeneratorConfig& config, int jobs = 1);

// Default five-country cohort at desk scale, with unequal cohort sizes and
// class prevalences, shared behavioural effects, moderate per-user signatures,
// and one country (Mongolia) whose effect signs partly diverge.
GeneratorConfig default_profiles();

}  // namespace socon

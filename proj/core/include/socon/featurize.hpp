#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "socon/matrix.hpp"
#include "socon/types.hpp"

namespace socon {

// Per-group aggregate over the events of one report window. `missing` is true
// exactly when the input span is empty (the group produced no event in the
// window); `values` then holds NaNs.
struct GroupAggregate {
    std::vector<double> values;
    bool missing = false;
};

// `events` must contain only events of the group's modality with timestamps in
// [window_start, window_end), in timestamp order. Episode-style groups
// (screen, app_usage) clip open episodes to the window bounds.
GroupAggregate aggregate_window(std::span<const SensorEvent> events, SensorGroup group,
                                std::int64_t window_start, std::int64_t window_end);

// Local-clock features: hour in 0..23 and a weekday(0)/weekend(1) indicator.
double local_hour(std::int64_t utc_seconds, int utc_offset_minutes);
double weekend_indicator(std::int64_t utc_seconds, int utc_offset_minutes);

// Builds one feature row per self-report by aggregating each sensor group
// over the window [t - w/2, t + w/2) centered on the report time t. Rows are
// ordered by (participant_id, report_timestamp). window_seconds must be >= 60.
FeatureMatrix build_examples(const Dataset& ds, int window_seconds = 600, int jobs = 1);

}  // namespace socon

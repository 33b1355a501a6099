#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "socon/types.hpp"

namespace socon {

// Sensor groups. The first 14 mirror the event modalities; `time` holds the
// report-clock features and carries no missing marker.
enum class SensorGroup : std::uint8_t {
    location,
    bluetooth_le,
    bluetooth_normal,
    wifi,
    cellular_gsm,
    cellular_wcdma,
    cellular_lte,
    notifications,
    proximity,
    activity,
    steps,
    touch,
    screen,
    app_usage,
    time,
};
inline constexpr int kNumSensorGroups = 15;

std::string_view to_string(SensorGroup g);
std::optional<SensorGroup> parse_sensor_group(std::string_view s);
SensorGroup group_of(Modality m);

struct FeatureSchema {
    std::vector<std::string> feature_names;    // aligned with feature_group
    std::vector<SensorGroup> feature_group;
    std::vector<SensorGroup> marker_groups;    // groups that carry a missing marker
    std::vector<std::string> marker_names;     // "<group>_nan_marker"

    // The full windowed-aggregation schema: 107 features over 15 groups
    // (location 3, bluetooth 2x5, wifi 6, cellular 3x4, notifications 4,
    // proximity 4, activity 8, steps 2, touch 1, screen 7, app usage 48,
    // time 2) plus one marker per group except time.
    static FeatureSchema standard();

    std::size_t n_features() const { return feature_names.size(); }
    std::size_t n_markers() const { return marker_names.size(); }

    // -1 when absent.
    int feature_index(std::string_view name) const;
    int marker_index(SensorGroup g) const;

    std::vector<std::size_t> features_of(SensorGroup g) const;
    bool has_group(SensorGroup g) const;

    // Sub-schema with only the given feature columns (order preserved).
    // Markers are kept for groups that still have at least one feature.
    FeatureSchema project_features(const std::vector<std::size_t>& keep) const;
    // Sub-schema without the given groups (their features and markers).
    FeatureSchema drop_groups(const std::vector<SensorGroup>& drop) const;

    bool operator==(const FeatureSchema&) const = default;
};

}  // namespace socon

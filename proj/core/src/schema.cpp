#include "socon/schema.hpp"

#include <algorithm>

#include "socon/common.hpp"

namespace socon {

namespace {

constexpr std::string_view kGroupNames[kNumSensorGroups] = {
    "location",      "bluetooth_le", "bluetooth_normal", "wifi",
    "cellular_gsm",  "cellular_wcdma", "cellular_lte",   "notifications",
    "proximity",     "activity",     "steps",            "touch",
    "screen",        "app_usage",    "time",
};

}  // namespace

std::string_view to_string(SensorGroup g) { return kGroupNames[static_cast<int>(g)]; }

std::optional<SensorGroup> parse_sensor_group(std::string_view s) {
    for (int i = 0; i < kNumSensorGroups; ++i) {
        if (kGroupNames[i] == s) return static_cast<SensorGroup>(i);
    }
    return std::nullopt;
}

SensorGroup group_of(Modality m) {
    return static_cast<SensorGroup>(static_cast<int>(m));
}

FeatureSchema FeatureSchema::standard() {
    FeatureSchema s;
    auto add = [&](SensorGroup g, std::string name) {
        s.feature_names.push_back(std::move(name));
        s.feature_group.push_back(g);
    };

    add(SensorGroup::location, "location_radius_of_gyration");
    add(SensorGroup::location, "location_distance_covered");
    add(SensorGroup::location, "location_altitude");

    for (auto [g, prefix] : {std::pair{SensorGroup::bluetooth_le, std::string("bluetooth_le")},
                             std::pair{SensorGroup::bluetooth_normal, std::string("bluetooth_normal")}}) {
        add(g, prefix + "_num_devices");
        add(g, prefix + "_mean_rssi");
        add(g, prefix + "_max_rssi");
        add(g, prefix + "_min_rssi");
        add(g, prefix + "_std_rssi");
    }

    add(SensorGroup::wifi, "wifi_num_hotspot_devices");
    add(SensorGroup::wifi, "wifi_connected");
    add(SensorGroup::wifi, "wifi_mean_rssi");
    add(SensorGroup::wifi, "wifi_max_rssi");
    add(SensorGroup::wifi, "wifi_min_rssi");
    add(SensorGroup::wifi, "wifi_std_rssi");

    for (auto [g, prefix] : {std::pair{SensorGroup::cellular_gsm, std::string("cellular_gsm")},
                             std::pair{SensorGroup::cellular_wcdma, std::string("cellular_wcdma")},
                             std::pair{SensorGroup::cellular_lte, std::string("cellular_lte")}}) {
        add(g, prefix + "_mean");
        add(g, prefix + "_max");
        add(g, prefix + "_min");
        add(g, prefix + "_std");
    }

    add(SensorGroup::notifications, "notifications_posted");
    add(SensorGroup::notifications, "notifications_removed");
    add(SensorGroup::notifications, "notifications_posted_unique");
    add(SensorGroup::notifications, "notifications_removed_unique");

    add(SensorGroup::proximity, "proximity_mean");
    add(SensorGroup::proximity, "proximity_max");
    add(SensorGroup::proximity, "proximity_min");
    add(SensorGroup::proximity, "proximity_std");

    for (int k = 0; k < kNumActivityKinds; ++k) {
        add(SensorGroup::activity,
            "activity_" + std::string(to_string(static_cast<ActivityKind>(k))));
    }

    add(SensorGroup::steps, "steps_counted");
    add(SensorGroup::steps, "steps_detected");

    add(SensorGroup::touch, "touch_events");

    add(SensorGroup::screen, "screen_presence_time");
    add(SensorGroup::screen, "screen_num_episodes");
    add(SensorGroup::screen, "screen_time_total");
    add(SensorGroup::screen, "screen_episode_mean");
    add(SensorGroup::screen, "screen_episode_max");
    add(SensorGroup::screen, "screen_episode_min");
    add(SensorGroup::screen, "screen_episode_std");

    for (const auto& cat : app_categories()) {
        add(SensorGroup::app_usage, "app_" + cat);
    }

    add(SensorGroup::time, "time_hour");
    add(SensorGroup::time, "time_day");

    for (int g = 0; g < kNumSensorGroups; ++g) {
        const auto group = static_cast<SensorGroup>(g);
        if (group == SensorGroup::time) continue;
        s.marker_groups.push_back(group);
        s.marker_names.push_back(std::string(to_string(group)) + "_nan_marker");
    }
    return s;
}

int FeatureSchema::feature_index(std::string_view name) const {
    for (std::size_t i = 0; i < feature_names.size(); ++i) {
        if (feature_names[i] == name) return static_cast<int>(i);
    }
    return -1;
}

int FeatureSchema::marker_index(SensorGroup g) const {
    for (std::size_t i = 0; i < marker_groups.size(); ++i) {
        if (marker_groups[i] == g) return static_cast<int>(i);
    }
    return -1;
}

std::vector<std::size_t> FeatureSchema::features_of(SensorGroup g) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < feature_group.size(); ++i) {
        if (feature_group[i] == g) out.push_back(i);
    }
    return out;
}

bool FeatureSchema::has_group(SensorGroup g) const {
    return std::find(feature_group.begin(), feature_group.end(), g) != feature_group.end();
}

FeatureSchema FeatureSchema::project_features(const std::vector<std::size_t>& keep) const {
    FeatureSchema out;
    for (std::size_t idx : keep) {
        if (idx >= feature_names.size()) throw Error("project_features: index out of range");
        out.feature_names.push_back(feature_names[idx]);
        out.feature_group.push_back(feature_group[idx]);
    }
    for (std::size_t i = 0; i < marker_groups.size(); ++i) {
        if (out.has_group(marker_groups[i])) {
            out.marker_groups.push_back(marker_groups[i]);
            out.marker_names.push_back(marker_names[i]);
        }
    }
    return out;
}

FeatureSchema FeatureSchema::drop_groups(const std::vector<SensorGroup>& drop) const {
    auto dropped = [&](SensorGroup g) {
        return std::find(drop.begin(), drop.end(), g) != drop.end();
    };
    FeatureSchema out;
    for (std::size_t i = 0; i < feature_names.size(); ++i) {
        if (!dropped(feature_group[i])) {
            out.feature_names.push_back(feature_names[i]);
            out.feature_group.push_back(feature_group[i]);
        }
    }
    for (std::size_t i = 0; i < marker_groups.size(); ++i) {
        if (!dropped(marker_groups[i])) {
            out.marker_groups.push_back(marker_groups[i]);
            out.marker_names.push_back(marker_names[i]);
        }
    }
    return out;
}

}  // namespace socon

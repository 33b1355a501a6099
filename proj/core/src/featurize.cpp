#include "socon/featurize.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>

#include "socon/common.hpp"

namespace socon {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kEarthRadiusM = 6371000.0;

long long floor_div(long long a, long long b) {
    long long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

double haversine_m(double lat1, double lon1, double lat2, double lon2) {
    const double rad = M_PI / 180.0;
    const double dlat = (lat2 - lat1) * rad;
    const double dlon = (lon2 - lon1) * rad;
    const double a = std::sin(dlat / 2) * std::sin(dlat / 2) +
                     std::cos(lat1 * rad) * std::cos(lat2 * rad) * std::sin(dlon / 2) * std::sin(dlon / 2);
    return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(a)));
}

struct Stats {
    double mean = 0.0, max = 0.0, min = 0.0, std = 0.0;
};

// Population statistics; a singleton has std 0.
Stats summarize(const std::vector<double>& xs) {
    Stats s;
    s.min = xs[0];
    s.max = xs[0];
    double sum = 0.0;
    for (double x : xs) {
        sum += x;
        s.min = std::min(s.min, x);
        s.max = std::max(s.max, x);
    }
    s.mean = sum / static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(xs.size()));
    return s;
}

GroupAggregate missing_aggregate(std::size_t width) {
    GroupAggregate g;
    g.missing = true;
    g.values.assign(width, kNaN);
    return g;
}

std::size_t group_width(SensorGroup g) {
    switch (g) {
        case SensorGroup::location: return 3;
        case SensorGroup::bluetooth_le:
        case SensorGroup::bluetooth_normal: return 5;
        case SensorGroup::wifi: return 6;
        case SensorGroup::cellular_gsm:
        case SensorGroup::cellular_wcdma:
        case SensorGroup::cellular_lte: return 4;
        case SensorGroup::notifications: return 4;
        case SensorGroup::proximity: return 4;
        case SensorGroup::activity: return 8;
        case SensorGroup::steps: return 2;
        case SensorGroup::touch: return 1;
        case SensorGroup::screen: return 7;
        case SensorGroup::app_usage: return app_categories().size();
        case SensorGroup::time: return 2;
    }
    return 0;
}

GroupAggregate aggregate_location(std::span<const SensorEvent> events) {
    std::vector<double> lat, lon, alt;
    for (const auto& e : events) {
        const auto& p = std::get<LocationPayload>(e.payload);
        lat.push_back(p.lat);
        lon.push_back(p.lon);
        alt.push_back(p.altitude);
    }
    double clat = 0.0, clon = 0.0, calt = 0.0;
    for (std::size_t i = 0; i < lat.size(); ++i) {
        clat += lat[i];
        clon += lon[i];
        calt += alt[i];
    }
    const double n = static_cast<double>(lat.size());
    clat /= n;
    clon /= n;
    calt /= n;
    double sq = 0.0;
    for (std::size_t i = 0; i < lat.size(); ++i) {
        const double d = haversine_m(lat[i], lon[i], clat, clon);
        sq += d * d;
    }
    double travelled = 0.0;
    for (std::size_t i = 1; i < lat.size(); ++i) {
        travelled += haversine_m(lat[i - 1], lon[i - 1], lat[i], lon[i]);
    }
    GroupAggregate g;
    g.values = {std::sqrt(sq / n), travelled, calt};
    return g;
}

GroupAggregate aggregate_rssi(std::span<const SensorEvent> events) {
    std::vector<double> rssi;
    for (const auto& e : events) rssi.push_back(std::get<RssiPayload>(e.payload).rssi);
    const Stats s = summarize(rssi);
    GroupAggregate g;
    g.values = {static_cast<double>(rssi.size()), s.mean, s.max, s.min, s.std};
    return g;
}

GroupAggregate aggregate_wifi(std::span<const SensorEvent> events) {
    std::vector<double> rssi;
    double hotspot = 0.0;
    double connected = 0.0;
    for (const auto& e : events) {
        const auto& p = std::get<WifiPayload>(e.payload);
        rssi.push_back(p.rssi);
        hotspot = std::max(hotspot, static_cast<double>(p.hotspot_devices));
        if (p.connected) connected = 1.0;
    }
    const Stats s = summarize(rssi);
    GroupAggregate g;
    g.values = {hotspot, connected, s.mean, s.max, s.min, s.std};
    return g;
}

GroupAggregate aggregate_cellular(std::span<const SensorEvent> events) {
    std::vector<double> strength;
    for (const auto& e : events) strength.push_back(std::get<CellularPayload>(e.payload).strength);
    const Stats s = summarize(strength);
    GroupAggregate g;
    g.values = {s.mean, s.max, s.min, s.std};
    return g;
}

GroupAggregate aggregate_notifications(std::span<const SensorEvent> events) {
    double posted = 0, removed = 0, posted_unique = 0, removed_unique = 0;
    for (const auto& e : events) {
        const auto& p = std::get<NotificationPayload>(e.payload);
        if (p.action == NotificationAction::posted) {
            ++posted;
            if (!p.duplicate) ++posted_unique;
        } else {
            ++removed;
            if (!p.duplicate) ++removed_unique;
        }
    }
    GroupAggregate g;
    g.values = {posted, removed, posted_unique, removed_unique};
    return g;
}

GroupAggregate aggregate_proximity(std::span<const SensorEvent> events) {
    std::vector<double> v;
    for (const auto& e : events) v.push_back(std::get<ProximityPayload>(e.payload).value);
    const Stats s = summarize(v);
    GroupAggregate g;
    g.values = {s.mean, s.max, s.min, s.std};
    return g;
}

GroupAggregate aggregate_activity(std::span<const SensorEvent> events) {
    std::array<double, kNumActivityKinds> counts{};
    for (const auto& e : events) {
        counts[static_cast<int>(std::get<ActivityPayload>(e.payload).kind)] += 1.0;
    }
    const double total = static_cast<double>(events.size());
    GroupAggregate g;
    g.values.reserve(kNumActivityKinds);
    for (double c : counts) g.values.push_back(c / total);
    return g;
}

GroupAggregate aggregate_steps(std::span<const SensorEvent> events) {
    double total = 0.0;
    for (const auto& e : events) {
        total += static_cast<double>(std::get<StepsPayload>(e.payload).step_count);
    }
    GroupAggregate g;
    g.values = {total, static_cast<double>(events.size())};
    return g;
}

GroupAggregate aggregate_touch(std::span<const SensorEvent> events) {
    GroupAggregate g;
    g.values = {static_cast<double>(events.size())};
    return g;
}

// Screen episodes are reconstructed from on/off transitions. An episode that
// is open at a window edge is clipped to the window; a leading off or present
// event implies the screen was already on at window start. Presence time runs
// from the first unlock of an episode to the episode's end.
GroupAggregate aggregate_screen(std::span<const SensorEvent> events, std::int64_t window_start,
                                std::int64_t window_end) {
    std::vector<double> episodes;
    double presence = 0.0;
    std::optional<std::int64_t> open_start;
    std::optional<std::int64_t> present_at;

    auto close_episode = [&](std::int64_t end_ts) {
        episodes.push_back(static_cast<double>(end_ts - *open_start));
        if (present_at) presence += static_cast<double>(end_ts - *present_at);
        open_start.reset();
        present_at.reset();
    };

    for (const auto& e : events) {
        const auto state = std::get<ScreenPayload>(e.payload).state;
        switch (state) {
            case ScreenState::on:
                if (!open_start) open_start = e.timestamp;
                break;
            case ScreenState::off:
                if (!open_start) open_start = window_start;
                close_episode(e.timestamp);
                break;
            case ScreenState::present:
                if (!open_start) open_start = window_start;
                if (!present_at) present_at = e.timestamp;
                break;
        }
    }
    if (open_start) close_episode(window_end);

    GroupAggregate g;
    if (episodes.empty()) {
        g.values = {presence, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
        return g;
    }
    const Stats s = summarize(episodes);
    double total = 0.0;
    for (double d : episodes) total += d;
    g.values = {presence, static_cast<double>(episodes.size()), total, s.mean, s.max, s.min, s.std};
    return g;
}

GroupAggregate aggregate_app_usage(std::span<const SensorEvent> events, std::int64_t window_end) {
    GroupAggregate g;
    g.values.assign(app_categories().size(), 0.0);
    std::int64_t prev_end = 0;
    for (const auto& e : events) {
        const auto& p = std::get<AppUsagePayload>(e.payload);
        if (e.timestamp < prev_end) {
            throw ValidationError("overlapping foreground app intervals for '" + e.participant_id + "'");
        }
        const double clipped = std::min(p.duration_s, static_cast<double>(window_end - e.timestamp));
        if (clipped > 0.0) g.values[static_cast<std::size_t>(p.category)] += clipped;
        prev_end = e.timestamp + static_cast<std::int64_t>(std::ceil(p.duration_s));
    }
    return g;
}

}  // namespace

GroupAggregate aggregate_window(std::span<const SensorEvent> events, SensorGroup group,
                                std::int64_t window_start, std::int64_t window_end) {
    if (events.empty()) return missing_aggregate(group_width(group));
    switch (group) {
        case SensorGroup::location: return aggregate_location(events);
        case SensorGroup::bluetooth_le:
        case SensorGroup::bluetooth_normal: return aggregate_rssi(events);
        case SensorGroup::wifi: return aggregate_wifi(events);
        case SensorGroup::cellular_gsm:
        case SensorGroup::cellular_wcdma:
        case SensorGroup::cellular_lte: return aggregate_cellular(events);
        case SensorGroup::notifications: return aggregate_notifications(events);
        case SensorGroup::proximity: return aggregate_proximity(events);
        case SensorGroup::activity: return aggregate_activity(events);
        case SensorGroup::steps: return aggregate_steps(events);
        case SensorGroup::touch: return aggregate_touch(events);
        case SensorGroup::screen: return aggregate_screen(events, window_start, window_end);
        case SensorGroup::app_usage: return aggregate_app_usage(events, window_end);
        case SensorGroup::time: break;
    }
    throw Error("aggregate_window: time group has no event aggregation");
}

double local_hour(std::int64_t utc_seconds, int utc_offset_minutes) {
    const long long local = utc_seconds + static_cast<long long>(utc_offset_minutes) * 60;
    const long long day = floor_div(local, 86400);
    const long long sod = local - day * 86400;
    return static_cast<double>(sod / 3600);
}

double weekend_indicator(std::int64_t utc_seconds, int utc_offset_minutes) {
    const long long local = utc_seconds + static_cast<long long>(utc_offset_minutes) * 60;
    const long long day = floor_div(local, 86400);
    const int dow = static_cast<int>(((day + 4) % 7 + 7) % 7);  // 0 = Sunday
    return (dow == 0 || dow == 6) ? 1.0 : 0.0;
}

FeatureMatrix build_examples(const Dataset& ds, int window_seconds, int jobs) {
    if (window_seconds < 60) {
        throw ValidationError("window_seconds must be >= 60 (got " + std::to_string(window_seconds) + ")");
    }
    const std::int64_t half_lo = window_seconds / 2;
    const std::int64_t half_hi = window_seconds - half_lo;

    FeatureMatrix m;
    m.schema = FeatureSchema::standard();
    const std::size_t n = ds.reports.size();
    const std::size_t n_feat = m.schema.n_features();
    const std::size_t n_mark = m.schema.n_markers();

    m.participant_id.resize(n);
    m.country.resize(n);
    m.report_timestamp.resize(n);
    m.label.resize(n);
    m.synthetic.assign(n, 0);
    m.values.assign(n * n_feat, kNaN);
    m.markers.assign(n * n_mark, 0);

    // Reports in a canonical Dataset are already ordered by (participant_id,
    // timestamp), which is exactly the required row order.
    for (std::size_t r = 0; r < n; ++r) {
        const auto& rep = ds.reports[r];
        const Participant* p = ds.find_participant(rep.participant_id);
        if (p == nullptr) throw ValidationError("report references unknown participant '" + rep.participant_id + "'");
        m.participant_id[r] = rep.participant_id;
        m.country[r] = p->country;
        m.report_timestamp[r] = rep.timestamp;
        m.label[r] = static_cast<std::uint8_t>(binarize_label(rep));
    }

    const int hour_col = m.schema.feature_index("time_hour");
    const int day_col = m.schema.feature_index("time_day");

    std::array<std::vector<std::size_t>, kNumModalities> group_cols;
    std::array<int, kNumModalities> marker_idx{};
    for (int mi = 0; mi < kNumModalities; ++mi) {
        const auto group = group_of(static_cast<Modality>(mi));
        group_cols[mi] = m.schema.features_of(group);
        marker_idx[mi] = m.schema.marker_index(group);
    }

    parallel_for(n, jobs, [&](std::size_t r) {
        const auto& rep = ds.reports[r];
        const Participant* p = ds.find_participant(rep.participant_id);
        const std::int64_t wstart = rep.timestamp - half_lo;
        const std::int64_t wend = rep.timestamp + half_hi;

        const auto span = ds.events_for(rep.participant_id);
        auto lo = std::lower_bound(span.begin(), span.end(), wstart,
                                   [](const SensorEvent& e, std::int64_t t) { return e.timestamp < t; });
        auto hi = std::lower_bound(span.begin(), span.end(), wend,
                                   [](const SensorEvent& e, std::int64_t t) { return e.timestamp < t; });

        std::array<std::vector<SensorEvent>, kNumModalities> by_modality;
        for (auto it = lo; it != hi; ++it) {
            by_modality[static_cast<int>(it->modality)].push_back(*it);
        }

        double* row = m.row(r);
        std::uint8_t* marks = m.marker_row(r);
        for (int mi = 0; mi < kNumModalities; ++mi) {
            const auto group = group_of(static_cast<Modality>(mi));
            const auto agg = aggregate_window(by_modality[mi], group, wstart, wend);
            const auto& cols = group_cols[mi];
            for (std::size_t j = 0; j < cols.size(); ++j) row[cols[j]] = agg.values[j];
            marks[marker_idx[mi]] = agg.missing ? 1 : 0;
        }
        row[hour_col] = local_hour(rep.timestamp, p->utc_offset_minutes);
        row[day_col] = weekend_indicator(rep.timestamp, p->utc_offset_minutes);
    });

    return m;
}

}  // namespace socon

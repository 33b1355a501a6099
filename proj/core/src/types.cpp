#include "socon/types.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "socon/common.hpp"

namespace socon {

namespace {

constexpr std::string_view kModalityNames[kNumModalities] = {
    "location",      "bluetooth_le", "bluetooth_normal", "wifi",
    "cellular_gsm",  "cellular_wcdma", "cellular_lte",   "notifications",
    "proximity",     "activity",     "steps",            "touch",
    "screen",        "app_usage",
};

constexpr std::string_view kSocialContextNames[kNumSocialContexts] = {
    "alone", "friends", "relatives", "classmates", "roommates", "colleagues", "partner", "other",
};

constexpr std::string_view kActivityKindNames[kNumActivityKinds] = {
    "still", "tilting", "in_vehicle", "on_bicycle", "on_foot", "walking", "running", "unknown",
};

constexpr std::string_view kScreenStateNames[3] = {"on", "off", "present"};
constexpr std::string_view kNotificationActionNames[2] = {"posted", "removed"};

template <typename E, std::size_t N>
std::optional<E> parse_enum(std::string_view s, const std::string_view (&names)[N]) {
    for (std::size_t i = 0; i < N; ++i) {
        if (names[i] == s) return static_cast<E>(i);
    }
    return std::nullopt;
}

}  // namespace

std::string_view to_string(Modality m) { return kModalityNames[static_cast<int>(m)]; }
std::string_view to_string(SocialContext c) { return kSocialContextNames[static_cast<int>(c)]; }
std::string_view to_string(ActivityKind k) { return kActivityKindNames[static_cast<int>(k)]; }
std::string_view to_string(ScreenState s) { return kScreenStateNames[static_cast<int>(s)]; }
std::string_view to_string(NotificationAction a) { return kNotificationActionNames[static_cast<int>(a)]; }

std::optional<Modality> parse_modality(std::string_view s) {
    return parse_enum<Modality>(s, kModalityNames);
}
std::optional<SocialContext> parse_social_context(std::string_view s) {
    return parse_enum<SocialContext>(s, kSocialContextNames);
}
std::optional<ActivityKind> parse_activity_kind(std::string_view s) {
    return parse_enum<ActivityKind>(s, kActivityKindNames);
}
std::optional<ScreenState> parse_screen_state(std::string_view s) {
    return parse_enum<ScreenState>(s, kScreenStateNames);
}
std::optional<NotificationAction> parse_notification_action(std::string_view s) {
    return parse_enum<NotificationAction>(s, kNotificationActionNames);
}

const std::vector<std::string>& app_categories() {
    // 32 application categories plus 16 game categories, as used by major
    // app stores; 48 in total.
    static const std::vector<std::string> kCategories = {
        "action",          "adventure",        "arcade",            "art_and_design",
        "auto_and_vehicles", "beauty",         "board",             "books_and_reference",
        "business",        "card",             "casino",            "casual",
        "comics",          "communication",    "dating",            "education",
        "educational",     "entertainment",    "events",            "finance",
        "food_and_drink",  "health_and_fitness", "house_and_home",  "libraries_and_demo",
        "lifestyle",       "maps_and_navigation", "medical",        "music",
        "music_and_audio", "news_and_magazines", "parenting",       "personalization",
        "photography",     "productivity",     "puzzle",            "racing",
        "role_playing",    "shopping",         "simulation",        "social",
        "sports",          "strategy",         "tools",             "travel_and_local",
        "trivia",          "video_players_editors", "weather",      "word",
    };
    return kCategories;
}

int app_category_index(std::string_view name) {
    const auto& cats = app_categories();
    for (std::size_t i = 0; i < cats.size(); ++i) {
        if (cats[i] == name) return static_cast<int>(i);
    }
    return -1;
}

bool payload_matches(Modality m, const Payload& p) {
    switch (m) {
        case Modality::location: return std::holds_alternative<LocationPayload>(p);
        case Modality::bluetooth_le:
        case Modality::bluetooth_normal: return std::holds_alternative<RssiPayload>(p);
        case Modality::wifi: return std::holds_alternative<WifiPayload>(p);
        case Modality::cellular_gsm:
        case Modality::cellular_wcdma:
        case Modality::cellular_lte: return std::holds_alternative<CellularPayload>(p);
        case Modality::notifications: return std::holds_alternative<NotificationPayload>(p);
        case Modality::proximity: return std::holds_alternative<ProximityPayload>(p);
        case Modality::activity: return std::holds_alternative<ActivityPayload>(p);
        case Modality::steps: return std::holds_alternative<StepsPayload>(p);
        case Modality::touch: return std::holds_alternative<TouchPayload>(p);
        case Modality::screen: return std::holds_alternative<ScreenPayload>(p);
        case Modality::app_usage: return std::holds_alternative<AppUsagePayload>(p);
    }
    return false;
}

namespace {

void check_event(const SensorEvent& e) {
    if (!payload_matches(e.modality, e.payload)) {
        throw ValidationError("event for '" + e.participant_id + "': payload does not match modality " +
                              std::string(to_string(e.modality)));
    }
    if (const auto* r = std::get_if<RssiPayload>(&e.payload); r && r->rssi > 0) {
        throw ValidationError("event for '" + e.participant_id + "': rssi must be <= 0");
    }
    if (const auto* w = std::get_if<WifiPayload>(&e.payload); w && w->rssi > 0) {
        throw ValidationError("event for '" + e.participant_id + "': rssi must be <= 0");
    }
    if (const auto* s = std::get_if<StepsPayload>(&e.payload); s && s->step_count < 0) {
        throw ValidationError("event for '" + e.participant_id + "': step_count must be >= 0");
    }
    if (const auto* a = std::get_if<AppUsagePayload>(&e.payload)) {
        if (a->category < 0 || a->category >= static_cast<int>(app_categories().size())) {
            throw ValidationError("event for '" + e.participant_id + "': app category index out of range");
        }
        if (!(a->duration_s > 0.0) || !std::isfinite(a->duration_s)) {
            throw ValidationError("event for '" + e.participant_id + "': app usage duration must be positive");
        }
    }
}

}  // namespace

void Dataset::canonicalize() {
    std::sort(participants.begin(), participants.end(),
              [](const Participant& a, const Participant& b) { return a.participant_id < b.participant_id; });
    for (std::size_t i = 1; i < participants.size(); ++i) {
        if (participants[i].participant_id == participants[i - 1].participant_id) {
            throw ValidationError("duplicate participant_id '" + participants[i].participant_id + "'");
        }
    }
    std::stable_sort(events.begin(), events.end(), [](const SensorEvent& a, const SensorEvent& b) {
        if (a.participant_id != b.participant_id) return a.participant_id < b.participant_id;
        return a.timestamp < b.timestamp;
    });
    std::stable_sort(reports.begin(), reports.end(), [](const SelfReport& a, const SelfReport& b) {
        if (a.participant_id != b.participant_id) return a.participant_id < b.participant_id;
        return a.timestamp < b.timestamp;
    });

    for (const auto& e : events) {
        if (find_participant(e.participant_id) == nullptr) {
            throw ValidationError("event references unknown participant_id '" + e.participant_id + "'");
        }
        check_event(e);
    }
    for (const auto& r : reports) {
        if (find_participant(r.participant_id) == nullptr) {
            throw ValidationError("report references unknown participant_id '" + r.participant_id + "'");
        }
        if (r.valence && (*r.valence < 1 || *r.valence > 5)) {
            throw ValidationError("report for '" + r.participant_id + "': valence must be in 1..5");
        }
    }
}

const Participant* Dataset::find_participant(std::string_view id) const {
    auto it = std::lower_bound(participants.begin(), participants.end(), id,
                               [](const Participant& p, std::string_view v) { return p.participant_id < v; });
    if (it == participants.end() || it->participant_id != id) return nullptr;
    return &*it;
}

std::span<const SensorEvent> Dataset::events_for(std::string_view id) const {
    auto lo = std::lower_bound(events.begin(), events.end(), id,
                               [](const SensorEvent& e, std::string_view v) { return e.participant_id < v; });
    auto hi = std::upper_bound(events.begin(), events.end(), id,
                               [](std::string_view v, const SensorEvent& e) { return v < e.participant_id; });
    if (lo == hi) return {};
    return {&*lo, static_cast<std::size_t>(hi - lo)};
}

std::span<const SelfReport> Dataset::reports_for(std::string_view id) const {
    auto lo = std::lower_bound(reports.begin(), reports.end(), id,
                               [](const SelfReport& r, std::string_view v) { return r.participant_id < v; });
    auto hi = std::upper_bound(reports.begin(), reports.end(), id,
                               [](std::string_view v, const SelfReport& r) { return v < r.participant_id; });
    if (lo == hi) return {};
    return {&*lo, static_cast<std::size_t>(hi - lo)};
}

BinaryLabel binarize_label(const SelfReport& report) {
    return binarize_label(report.social_context);
}

Dataset filter_participants(const Dataset& ds, int min_reports, int min_minority) {
    struct Counts {
        long long alone = 0;
        long long not_alone = 0;
    };
    std::unordered_map<std::string, Counts> counts;
    for (const auto& r : ds.reports) {
        auto& c = counts[r.participant_id];
        if (binarize_label(r) == BinaryLabel::Alone) ++c.alone;
        else ++c.not_alone;
    }

    Dataset out;
    for (const auto& p : ds.participants) {
        auto it = counts.find(p.participant_id);
        const Counts c = it == counts.end() ? Counts{} : it->second;
        const long long total = c.alone + c.not_alone;
        const long long minority = std::min(c.alone, c.not_alone);
        if (total >= min_reports && minority >= min_minority) {
            out.participants.push_back(p);
        }
    }

    out.events.reserve(ds.events.size());
    for (const auto& e : ds.events) {
        if (out.find_participant(e.participant_id) != nullptr) out.events.push_back(e);
    }
    out.reports.reserve(ds.reports.size());
    for (const auto& r : ds.reports) {
        if (out.find_participant(r.participant_id) != nullptr) out.reports.push_back(r);
    }
    if (out.participants.empty()) {
        warn("filter_participants: no participant satisfies the report/minority thresholds");
    }
    return out;
}

}  // namespace socon

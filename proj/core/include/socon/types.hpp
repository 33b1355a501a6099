#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace socon {

// ---------------------------------------------------------------------------
// Enums

enum class Modality : std::uint8_t {
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
};
inline constexpr int kNumModalities = 14;

enum class SocialContext : std::uint8_t {
    alone,
    friends,
    relatives,
    classmates,
    roommates,
    colleagues,
    partner,
    other,
};
inline constexpr int kNumSocialContexts = 8;

enum class ActivityKind : std::uint8_t {
    still,
    tilting,
    in_vehicle,
    on_bicycle,
    on_foot,
    walking,
    running,
    unknown,
};
inline constexpr int kNumActivityKinds = 8;

enum class ScreenState : std::uint8_t { on, off, present };
enum class NotificationAction : std::uint8_t { posted, removed };

enum class BinaryLabel : std::uint8_t { NotAlone = 0, Alone = 1 };

std::string_view to_string(Modality m);
std::string_view to_string(SocialContext c);
std::string_view to_string(ActivityKind k);
std::string_view to_string(ScreenState s);
std::string_view to_string(NotificationAction a);

std::optional<Modality> parse_modality(std::string_view s);
std::optional<SocialContext> parse_social_context(std::string_view s);
std::optional<ActivityKind> parse_activity_kind(std::string_view s);
std::optional<ScreenState> parse_screen_state(std::string_view s);
std::optional<NotificationAction> parse_notification_action(std::string_view s);

// The 48 application store categories used by the app_usage modality.
const std::vector<std::string>& app_categories();
int app_category_index(std::string_view name);  // -1 when unknown

// ---------------------------------------------------------------------------
// Sensor event payloads (one alternative per modality family)

struct LocationPayload {
    double lat = 0.0;
    double lon = 0.0;
    double altitude = 0.0;
    bool operator==(const LocationPayload&) const = default;
};

struct RssiPayload {  // bluetooth_le, bluetooth_normal
    int rssi = 0;     // dBm, <= 0
    bool operator==(const RssiPayload&) const = default;
};

struct WifiPayload {
    int rssi = 0;
    bool connected = false;
    int hotspot_devices = 0;
    bool operator==(const WifiPayload&) const = default;
};

struct CellularPayload {  // cellular_gsm / wcdma / lte
    int strength = 0;     // dBm, <= 0
    bool operator==(const CellularPayload&) const = default;
};

struct NotificationPayload {
    NotificationAction action = NotificationAction::posted;
    bool duplicate = false;
    bool operator==(const NotificationPayload&) const = default;
};

struct ProximityPayload {
    double value = 0.0;  // sensor reading, cm
    bool operator==(const ProximityPayload&) const = default;
};

struct ActivityPayload {
    ActivityKind kind = ActivityKind::unknown;
    bool operator==(const ActivityPayload&) const = default;
};

struct StepsPayload {
    long long step_count = 0;  // >= 0
    bool operator==(const StepsPayload&) const = default;
};

struct TouchPayload {
    bool operator==(const TouchPayload&) const = default;
};

struct ScreenPayload {
    ScreenState state = ScreenState::off;
    bool operator==(const ScreenPayload&) const = default;
};

struct AppUsagePayload {
    int category = 0;        // index into app_categories()
    double duration_s = 0.0; // foreground interval length, > 0
    bool operator==(const AppUsagePayload&) const = default;
};

using Payload = std::variant<LocationPayload, RssiPayload, WifiPayload, CellularPayload,
                             NotificationPayload, ProximityPayload, ActivityPayload,
                             StepsPayload, TouchPayload, ScreenPayload, AppUsagePayload>;

// Whether the payload alternative is legal for the modality.
bool payload_matches(Modality m, const Payload& p);

// ---------------------------------------------------------------------------
// Records

struct SensorEvent {
    std::string participant_id;
    std::int64_t timestamp = 0;  // UTC seconds
    Modality modality = Modality::location;
    Payload payload;
    bool operator==(const SensorEvent&) const = default;
};

struct SelfReport {
    std::string participant_id;
    std::int64_t timestamp = 0;  // UTC seconds
    SocialContext social_context = SocialContext::alone;
    std::optional<int> valence;  // 1..5
    std::optional<std::string> semantic_location;
    std::optional<std::string> activity;
    bool operator==(const SelfReport&) const = default;
};

struct Participant {
    std::string participant_id;
    std::string country;  // opaque label; the harness does not restrict the set
    int utc_offset_minutes = 0;
    std::optional<std::string> sex;
    bool operator==(const Participant&) const = default;
};

// Immutable after construction (via canonicalize); events and reports are
// globally sorted by (participant_id, timestamp), so per-participant slices
// are contiguous and time-ordered.
struct Dataset {
    std::vector<Participant> participants;
    std::vector<SensorEvent> events;
    std::vector<SelfReport> reports;

    // Sorts, de-duplicates nothing, and checks type invariants
    // (ids resolve, payloads match modalities, field ranges).
    void canonicalize();

    const Participant* find_participant(std::string_view id) const;
    std::span<const SensorEvent> events_for(std::string_view id) const;
    std::span<const SelfReport> reports_for(std::string_view id) const;

    bool operator==(const Dataset&) const = default;
};

// ---------------------------------------------------------------------------
// Operations

// alone -> Alone; the seven accompanied categories -> NotAlone.
BinaryLabel binarize_label(const SelfReport& report);
inline BinaryLabel binarize_label(SocialContext c) {
    return c == SocialContext::alone ? BinaryLabel::Alone : BinaryLabel::NotAlone;
}

// Keeps participants with >= min_reports reports and >= min_minority instances
// of their per-participant minority class (computed on binarized labels).
// Emits a warning when the result is empty.
Dataset filter_participants(const Dataset& ds, int min_reports = 100, int min_minority = 6);

}  // namespace socon

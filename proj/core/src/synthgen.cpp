#include "socon/synthgen.hpp"

#include <algorithm>
#include <cmath>

#include "socon/common.hpp"
#include "socon/rng.hpp"
#include "socon/schema.hpp"

namespace socon {

namespace {

// 2020-11-02 00:00 UTC, a Monday; divisible by 86400 so local-day arithmetic
// stays aligned.
constexpr std::int64_t kStudyEpoch = 1604275200;
constexpr std::int64_t kEventSpan = 300;   // events land in [t-300, t+300)
constexpr int kFirstWakingHour = 8;
constexpr int kLastWakingHour = 21;        // inclusive
constexpr int kSlotsPerDay = kLastWakingHour - kFirstWakingHour + 1;

std::vector<std::string> build_handles() {
    std::vector<std::string> h = {
        "location_radius_of_gyration",
        "location_altitude",
        "bluetooth_le_num_devices",
        "bluetooth_le_mean_rssi",
        "bluetooth_normal_num_devices",
        "bluetooth_normal_mean_rssi",
        "wifi_num_hotspot_devices",
        "wifi_connected",
        "wifi_mean_rssi",
        "cellular_gsm_mean",
        "cellular_wcdma_mean",
        "cellular_lte_mean",
        "notifications_posted",
        "notifications_removed",
        "proximity_mean",
        "steps_counted",
        "touch_events",
        "screen_num_episodes",
        "screen_episode_mean",
    };
    for (int k = 0; k < kNumActivityKinds; ++k) {
        h.push_back("activity_" + std::string(to_string(static_cast<ActivityKind>(k))));
    }
    for (const auto& cat : app_categories()) h.push_back("app_" + cat);
    return h;
}

int handle_index(const std::string& name) {
    const auto& h = effect_handles();
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (h[i] == name) return static_cast<int>(i);
    }
    return -1;
}

// Per-participant idiosyncrasies: a label-independent identity offset on every
// handle plus a label-coupled personal effect on a random subset. Both scale
// with the profile's user_signature_strength.
struct UserSignature {
    std::vector<double> identity;
    std::vector<double> personal;

    static UserSignature draw(Rng& rng, double strength, std::size_t n_handles) {
        UserSignature s;
        s.identity.resize(n_handles);
        s.personal.assign(n_handles, 0.0);
        for (std::size_t h = 0; h < n_handles; ++h) {
            s.identity[h] = rng.normal(0.0, 0.45 * strength);
            if (rng.bernoulli(0.35)) s.personal[h] = rng.normal(0.0, 0.55 * strength);
        }
        return s;
    }
};

// Resolved per-window effect values: profile effect for the window's label,
// plus the user identity offset, plus the sign-flipped personal coupling.
class EffectView {
public:
    EffectView(const std::vector<double>& profile_alone, const std::vector<double>& profile_not,
               const UserSignature& sig, bool alone)
        : profile_(alone ? profile_alone : profile_not), sig_(sig), alone_(alone) {}

    double operator()(int handle) const {
        const double personal = alone_ ? sig_.personal[handle] : -sig_.personal[handle];
        return profile_[handle] + sig_.identity[handle] + personal;
    }

private:
    const std::vector<double>& profile_;
    const UserSignature& sig_;
    bool alone_;
};

struct UserTraits {
    double home_lat = 0.0;
    double home_lon = 0.0;
    double home_altitude = 0.0;
    std::vector<double> app_weights;  // preference over the 48 categories
    UserSignature signature;
};

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

SocialContext draw_company(Rng& rng) {
    // Accompanied category mix (roughly: friends-heavy, partner and relatives
    // next); only the binarized value matters downstream.
    static constexpr SocialContext kCats[7] = {
        SocialContext::friends,   SocialContext::relatives, SocialContext::partner,
        SocialContext::classmates, SocialContext::roommates, SocialContext::colleagues,
        SocialContext::other,
    };
    static constexpr double kW[7] = {0.28, 0.22, 0.18, 0.12, 0.09, 0.06, 0.05};
    double u = rng.next_double();
    for (int i = 0; i < 7; ++i) {
        if (u < kW[i]) return kCats[i];
        u -= kW[i];
    }
    return SocialContext::other;
}

struct WindowContext {
    const CountryProfile* profile;
    const UserTraits* traits;
    std::string pid;
    std::int64_t t;       // report timestamp
    bool alone;
    const EffectView* v;
};

std::int64_t draw_ts(Rng& rng, const WindowContext& w) {
    return w.t - kEventSpan + rng.uniform_int(0, 2 * kEventSpan - 1);
}

void emit_location(Rng& rng, const WindowContext& w, std::vector<SensorEvent>& out) {
    const int h_radius = handle_index("location_radius_of_gyration");
    const int h_alt = handle_index("location_altitude");
    const double radius = 110.0 * std::exp((*w.v)(h_radius));
    const int n = 3 + static_cast<int>(rng.below(3));
    for (int i = 0; i < n; ++i) {
        const double r = radius * std::sqrt(rng.next_double());
        const double theta = rng.uniform(0.0, 2.0 * M_PI);
        LocationPayload p;
        p.lat = w.traits->home_lat + (r * std::cos(theta)) / 111320.0;
        p.lon = w.traits->home_lon + (r * std::sin(theta)) / 78000.0;
        p.altitude = w.traits->home_altitude + 12.0 * (*w.v)(h_alt) + rng.normal(0.0, 2.0);
        out.push_back({w.pid, draw_ts(rng, w), Modality::location, p});
    }
}

void emit_rssi_group(Rng& rng, const WindowContext& w, Modality modality, double base_rate,
                     double base_rssi, int h_num, int h_mean, std::vector<SensorEvent>& out) {
    const int n = rng.poisson(base_rate * std::exp((*w.v)(h_num)));
    for (int i = 0; i < n; ++i) {
        RssiPayload p;
        p.rssi = static_cast<int>(std::lround(
            std::clamp(rng.normal(base_rssi + 5.0 * (*w.v)(h_mean), 6.0), -100.0, 0.0)));
        out.push_back({w.pid, draw_ts(rng, w), modality, p});
    }
}

void emit_wifi(Rng& rng, const WindowContext& w, std::vector<SensorEvent>& out) {
    const int h_hot = handle_index("wifi_num_hotspot_devices");
    const int h_conn = handle_index("wifi_connected");
    const int h_mean = handle_index("wifi_mean_rssi");
    const int n = rng.poisson(2.8);
    const bool connected = rng.bernoulli(clamp01(1.0 / (1.0 + std::exp(-(0.8 + 1.2 * (*w.v)(h_conn))))));
    const int hotspot = rng.poisson(0.4 * std::exp((*w.v)(h_hot)));
    for (int i = 0; i < n; ++i) {
        WifiPayload p;
        p.rssi = static_cast<int>(std::lround(
            std::clamp(rng.normal(-58.0 + 6.0 * (*w.v)(h_mean), 7.0), -100.0, 0.0)));
        p.connected = connected;
        p.hotspot_devices = hotspot;
        out.push_back({w.pid, draw_ts(rng, w), Modality::wifi, p});
    }
}

void emit_cellular(Rng& rng, const WindowContext& w, Modality modality, double base,
                   int h_mean, std::vector<SensorEvent>& out) {
    const int n = rng.poisson(2.2);
    for (int i = 0; i < n; ++i) {
        CellularPayload p;
        p.strength = static_cast<int>(std::lround(
            std::clamp(rng.normal(base + 4.0 * (*w.v)(h_mean), 5.0), -120.0, 0.0)));
        out.push_back({w.pid, draw_ts(rng, w), modality, p});
    }
}

void emit_notifications(Rng& rng, const WindowContext& w, std::vector<SensorEvent>& out) {
    const int h_post = handle_index("notifications_posted");
    const int h_rem = handle_index("notifications_removed");
    const int posted = rng.poisson(2.2 * std::exp((*w.v)(h_post)));
    const int removed = rng.poisson(1.2 * std::exp((*w.v)(h_rem)));
    for (int i = 0; i < posted; ++i) {
        out.push_back({w.pid, draw_ts(rng, w), Modality::notifications,
                       NotificationPayload{NotificationAction::posted, rng.bernoulli(0.25)}});
    }
    for (int i = 0; i < removed; ++i) {
        out.push_back({w.pid, draw_ts(rng, w), Modality::notifications,
                       NotificationPayload{NotificationAction::removed, rng.bernoulli(0.25)}});
    }
}

void emit_proximity(Rng& rng, const WindowContext& w, std::vector<SensorEvent>& out) {
    const int h_mean = handle_index("proximity_mean");
    const int n = rng.poisson(3.5);
    for (int i = 0; i < n; ++i) {
        ProximityPayload p;
        p.value = std::clamp(rng.normal(3.5 + 1.5 * (*w.v)(h_mean), 1.2), 0.0, 10.0);
        out.push_back({w.pid, draw_ts(rng, w), Modality::proximity, p});
    }
}

void emit_activity(Rng& rng, const WindowContext& w, std::vector<SensorEvent>& out) {
    static const double kBaseWeights[kNumActivityKinds] = {0.50, 0.06, 0.08, 0.03,
                                                           0.12, 0.10, 0.04, 0.07};
    double weights[kNumActivityKinds];
    double total = 0.0;
    for (int k = 0; k < kNumActivityKinds; ++k) {
        const int h = handle_index("activity_" + std::string(to_string(static_cast<ActivityKind>(k))));
        weights[k] = kBaseWeights[k] * std::exp((*w.v)(h));
        total += weights[k];
    }
    const int n = 12 + static_cast<int>(rng.below(5));
    for (int i = 0; i < n; ++i) {
        double u = rng.next_double() * total;
        int kind = kNumActivityKinds - 1;
        for (int k = 0; k < kNumActivityKinds; ++k) {
            if (u < weights[k]) {
                kind = k;
                break;
            }
            u -= weights[k];
        }
        out.push_back({w.pid, draw_ts(rng, w), Modality::activity,
                       ActivityPayload{static_cast<ActivityKind>(kind)}});
    }
}

void emit_steps(Rng& rng, const WindowContext& w, std::vector<SensorEvent>& out) {
    const int h = handle_index("steps_counted");
    const int n = 1 + rng.poisson(1.5);
    for (int i = 0; i < n; ++i) {
        StepsPayload p;
        p.step_count = rng.poisson(18.0 * std::exp((*w.v)(h)));
        out.push_back({w.pid, draw_ts(rng, w), Modality::steps, p});
    }
}

void emit_touch(Rng& rng, const WindowContext& w, std::vector<SensorEvent>& out) {
    const int h = handle_index("touch_events");
    const int n = rng.poisson(9.0 * std::exp((*w.v)(h)));
    for (int i = 0; i < n; ++i) {
        out.push_back({w.pid, draw_ts(rng, w), Modality::touch, TouchPayload{}});
    }
}

void emit_screen(Rng& rng, const WindowContext& w, std::vector<SensorEvent>& out) {
    const int h_num = handle_index("screen_num_episodes");
    const int h_mean = handle_index("screen_episode_mean");
    const int n_ep = rng.poisson(1.8 * std::exp((*w.v)(h_num)));
    if (n_ep == 0) {
        // Keep the group observed with a lone off transition now and then.
        if (rng.bernoulli(0.3)) {
            out.push_back({w.pid, draw_ts(rng, w), Modality::screen,
                           ScreenPayload{ScreenState::off}});
        }
        return;
    }
    std::vector<std::int64_t> starts;
    starts.reserve(n_ep);
    for (int i = 0; i < n_ep; ++i) starts.push_back(draw_ts(rng, w));
    std::sort(starts.begin(), starts.end());
    const double mu = std::log(40.0) + 0.35 * (*w.v)(h_mean);
    for (int i = 0; i < n_ep; ++i) {
        const std::int64_t start = starts[i];
        const std::int64_t hard_end =
            (i + 1 < n_ep ? starts[i + 1] : w.t + kEventSpan) - 1;
        if (hard_end <= start) continue;
        std::int64_t dur = static_cast<std::int64_t>(std::lround(std::exp(rng.normal(mu, 0.6))));
        dur = std::clamp<std::int64_t>(dur, 2, hard_end - start);
        out.push_back({w.pid, start, Modality::screen, ScreenPayload{ScreenState::on}});
        if (dur > 3 && rng.bernoulli(0.75)) {
            out.push_back({w.pid, start + 1 + static_cast<std::int64_t>(rng.below(2)),
                           Modality::screen, ScreenPayload{ScreenState::present}});
        }
        out.push_back({w.pid, start + dur, Modality::screen, ScreenPayload{ScreenState::off}});
    }
}

void emit_app_usage(Rng& rng, const WindowContext& w, std::vector<SensorEvent>& out) {
    const auto& cats = app_categories();
    std::vector<double> weights(cats.size());
    double total = 0.0;
    for (std::size_t c = 0; c < cats.size(); ++c) {
        const int h = handle_index("app_" + cats[c]);
        weights[c] = w.traits->app_weights[c] * std::exp((*w.v)(h));
        total += weights[c];
    }
    const int n = 1 + rng.poisson(1.2);
    std::int64_t cursor = w.t - kEventSpan + static_cast<std::int64_t>(rng.below(30));
    for (int i = 0; i < n; ++i) {
        double u = rng.next_double() * total;
        std::size_t cat = cats.size() - 1;
        for (std::size_t c = 0; c < cats.size(); ++c) {
            if (u < weights[c]) {
                cat = c;
                break;
            }
            u -= weights[c];
        }
        const int h = handle_index("app_" + cats[cat]);
        double dur = std::exp(rng.normal(std::log(50.0) + 0.4 * (*w.v)(h), 0.7));
        dur = std::clamp(dur, 3.0, static_cast<double>(w.t + kEventSpan - cursor - 1));
        if (dur < 3.0) break;
        AppUsagePayload p;
        p.category = static_cast<int>(cat);
        p.duration_s = std::round(dur * 10.0) / 10.0;
        out.push_back({w.pid, cursor, Modality::app_usage, p});
        cursor += static_cast<std::int64_t>(std::ceil(p.duration_s)) + 2 +
                  static_cast<std::int64_t>(rng.below(40));
        if (cursor >= w.t + kEventSpan - 4) break;
    }
}

struct ParticipantOutput {
    Participant participant;
    std::vector<SensorEvent> events;
    std::vector<SelfReport> reports;
};

ParticipantOutput generate_participant(const CountryProfile& profile, int index,
                                       std::uint64_t country_seed, int study_days) {
    ParticipantOutput out;
    char buf[16];
    std::snprintf(buf, sizeof buf, "%s_%03d", profile.country.c_str(), index);
    const std::string pid = buf;

    Rng base(Rng::mix(country_seed, static_cast<std::uint64_t>(index)));
    Rng traits_rng = base.derive("traits");

    out.participant.participant_id = pid;
    out.participant.country = profile.country;
    out.participant.utc_offset_minutes = profile.utc_offset_minutes;
    out.participant.sex = traits_rng.bernoulli(0.5) ? std::string("f") : std::string("m");

    UserTraits traits;
    traits.home_lat = 45.0 + traits_rng.normal(0.0, 0.5);
    traits.home_lon = 9.0 + traits_rng.normal(0.0, 0.5);
    traits.home_altitude = 160.0 + traits_rng.normal(0.0, 45.0);
    traits.app_weights.resize(app_categories().size());
    for (auto& wgt : traits.app_weights) wgt = std::exp(traits_rng.normal(0.0, 1.0));
    traits.signature = UserSignature::draw(traits_rng, profile.user_signature_strength,
                                           effect_handles().size());

    // Resolve profile effects onto the handle vector once.
    std::vector<double> eff_alone(effect_handles().size(), 0.0);
    std::vector<double> eff_not(effect_handles().size(), 0.0);
    for (const auto& [name, eff] : profile.feature_effects) {
        const int h = handle_index(name);
        eff_alone[h] = eff.first;
        eff_not[h] = eff.second;
    }

    const int total_slots = study_days * kSlotsPerDay;
    const double target =
        std::max(10.0, traits_rng.normal(profile.reports_mean, profile.reports_spread));
    const double respond_p = std::min(1.0, target / static_cast<double>(total_slots));

    static const char* kLocations[] = {"home", "university", "work", "other"};
    static const char* kActivities[] = {"studying", "eating", "commuting", "leisure", "chores"};

    for (int day = 0; day < study_days; ++day) {
        Rng day_rng = base.derive(Rng::mix(0x5eed, static_cast<std::uint64_t>(day)));
        for (int slot = 0; slot < kSlotsPerDay; ++slot) {
            if (!day_rng.bernoulli(respond_p)) continue;

            const int hour = kFirstWakingHour + slot;
            const std::int64_t local =
                static_cast<std::int64_t>(day) * 86400 + static_cast<std::int64_t>(hour) * 3600 +
                day_rng.uniform_int(5, 54) * 60;
            const std::int64_t utc =
                kStudyEpoch + local - static_cast<std::int64_t>(profile.utc_offset_minutes) * 60;

            const bool alone = day_rng.bernoulli(profile.alone_prevalence);
            SelfReport rep;
            rep.participant_id = pid;
            rep.timestamp = utc;
            rep.social_context = alone ? SocialContext::alone : draw_company(day_rng);
            rep.valence = 1 + static_cast<int>(day_rng.below(5));
            if (day_rng.bernoulli(0.9)) {
                rep.semantic_location = kLocations[day_rng.below(4)];
            }
            if (day_rng.bernoulli(0.85)) {
                rep.activity = kActivities[day_rng.below(5)];
            }
            out.reports.push_back(std::move(rep));

            const EffectView view(eff_alone, eff_not, traits.signature, alone);
            WindowContext w{&profile, &traits, pid, utc, alone, &view};

            auto missing = [&](Modality m) {
                auto it = profile.missingness.find(m);
                const double p = it == profile.missingness.end() ? 0.0 : it->second;
                return day_rng.bernoulli(p);
            };

            if (!missing(Modality::location)) emit_location(day_rng, w, out.events);
            if (!missing(Modality::bluetooth_le)) {
                emit_rssi_group(day_rng, w, Modality::bluetooth_le, 2.5, -76.0,
                                handle_index("bluetooth_le_num_devices"),
                                handle_index("bluetooth_le_mean_rssi"), out.events);
            }
            if (!missing(Modality::bluetooth_normal)) {
                emit_rssi_group(day_rng, w, Modality::bluetooth_normal, 2.0, -72.0,
                                handle_index("bluetooth_normal_num_devices"),
                                handle_index("bluetooth_normal_mean_rssi"), out.events);
            }
            if (!missing(Modality::wifi)) emit_wifi(day_rng, w, out.events);
            if (!missing(Modality::cellular_gsm)) {
                emit_cellular(day_rng, w, Modality::cellular_gsm, -95.0,
                              handle_index("cellular_gsm_mean"), out.events);
            }
            if (!missing(Modality::cellular_wcdma)) {
                emit_cellular(day_rng, w, Modality::cellular_wcdma, -85.0,
                              handle_index("cellular_wcdma_mean"), out.events);
            }
            if (!missing(Modality::cellular_lte)) {
                emit_cellular(day_rng, w, Modality::cellular_lte, -92.0,
                              handle_index("cellular_lte_mean"), out.events);
            }
            if (!missing(Modality::notifications)) emit_notifications(day_rng, w, out.events);
            if (!missing(Modality::proximity)) emit_proximity(day_rng, w, out.events);
            if (!missing(Modality::activity)) emit_activity(day_rng, w, out.events);
            if (!missing(Modality::steps)) emit_steps(day_rng, w, out.events);
            if (!missing(Modality::touch)) emit_touch(day_rng, w, out.events);
            if (!missing(Modality::screen)) emit_screen(day_rng, w, out.events);
            if (!missing(Modality::app_usage)) emit_app_usage(day_rng, w, out.events);
        }
    }
    return out;
}

}  // namespace

const std::vector<std::string>& effect_handles() {
    static const std::vector<std::string> kHandles = build_handles();
    return kHandles;
}

bool is_effect_handle(const std::string& name) { return handle_index(name) >= 0; }

void CountryProfile::validate(const std::string& prefix) const {
    if (country.empty()) throw ValidationError(prefix + ".country: must be nonempty");
    if (n_participants < 1) throw ValidationError(prefix + ".n_participants: must be >= 1");
    if (!(reports_mean > 0.0)) throw ValidationError(prefix + ".reports_mean: must be > 0");
    if (reports_spread < 0.0) throw ValidationError(prefix + ".reports_spread: must be >= 0");
    if (alone_prevalence < 0.0 || alone_prevalence > 1.0) {
        throw ValidationError(prefix + ".alone_prevalence: must be in [0,1]");
    }
    if (user_signature_strength < 0.0) {
        throw ValidationError(prefix + ".user_signature_strength: must be >= 0");
    }
    for (const auto& [m, p] : missingness) {
        if (p < 0.0 || p > 1.0) {
            throw ValidationError(prefix + ".missingness." + std::string(to_string(m)) +
                                  ": must be in [0,1]");
        }
    }
    for (const auto& [name, eff] : feature_effects) {
        if (!is_effect_handle(name)) {
            throw ValidationError(prefix + ".feature_effects." + name +
                                  ": not a generator-controllable feature");
        }
        if (!std::isfinite(eff.first) || !std::isfinite(eff.second)) {
            throw ValidationError(prefix + ".feature_effects." + name + ": must be finite");
        }
    }
}

void GeneratorConfig::validate() const {
    if (profiles.empty()) throw ValidationError("profiles: at least one country required");
    if (study_days < 1) throw ValidationError("study_days: must be >= 1");
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        profiles[i].validate("profile." + profiles[i].country);
        for (std::size_t j = i + 1; j < profiles.size(); ++j) {
            if (profiles[i].country == profiles[j].country) {
                throw ValidationError("profile." + profiles[i].country + ": duplicate country");
            }
        }
    }
}

Dataset generate(const GeneratorConfig& config, int jobs) {
    config.validate();

    struct Task {
        const CountryProfile* profile;
        int index;
        std::uint64_t country_seed;
    };
    std::vector<Task> tasks;
    for (const auto& profile : config.profiles) {
        const std::uint64_t country_seed =
            Rng::mix(config.master_seed, std::string_view(profile.country));
        for (int i = 0; i < profile.n_participants; ++i) {
            tasks.push_back({&profile, i, country_seed});
        }
    }

    std::vector<ParticipantOutput> outputs(tasks.size());
    parallel_for(tasks.size(), jobs, [&](std::size_t i) {
        outputs[i] = generate_participant(*tasks[i].profile, tasks[i].index,
                                          tasks[i].country_seed, config.study_days);
    });

    Dataset ds;
    for (auto& o : outputs) {
        ds.participants.push_back(std::move(o.participant));
        ds.events.insert(ds.events.end(), std::make_move_iterator(o.events.begin()),
                         std::make_move_iterator(o.events.end()));
        ds.reports.insert(ds.reports.end(), std::make_move_iterator(o.reports.begin()),
                          std::make_move_iterator(o.reports.end()));
    }
    ds.canonicalize();
    return ds;
}

GeneratorConfig default_profiles() {
    GeneratorConfig cfg;
    cfg.study_days = 28;

    const std::map<Modality, double> missingness = {
        {Modality::location, 0.35},      {Modality::bluetooth_le, 0.30},
        {Modality::bluetooth_normal, 0.35}, {Modality::wifi, 0.25},
        {Modality::cellular_gsm, 0.93},  {Modality::cellular_wcdma, 0.55},
        {Modality::cellular_lte, 0.30},  {Modality::notifications, 0.15},
        {Modality::proximity, 0.20},     {Modality::activity, 0.20},
        {Modality::steps, 0.25},         {Modality::touch, 0.05},
        {Modality::screen, 0.10},        {Modality::app_usage, 0.15},
    };

    // Shared behavioural couplings; positive shifts when alone, negative when
    // accompanied, so pooled models find a moderate cross-user signal.
    const std::map<std::string, FeatureEffect> shared = {
        {"activity_still", {0.35, -0.10}},
        {"activity_on_foot", {-0.30, 0.20}},
        {"touch_events", {0.35, -0.25}},
        {"screen_num_episodes", {0.30, -0.20}},
        {"bluetooth_le_num_devices", {-0.45, 0.30}},
        {"proximity_mean", {-0.50, 0.40}},
        {"app_social", {0.40, -0.30}},
        {"app_tools", {0.30, -0.20}},
        {"notifications_posted", {0.25, -0.15}},
    };

    auto make = [&](std::string country, int n, double prevalence, int offset) {
        CountryProfile p;
        p.country = std::move(country);
        p.n_participants = n;
        p.alone_prevalence = prevalence;
        p.utc_offset_minutes = offset;
        p.reports_mean = 150.0;
        p.reports_spread = 35.0;
        p.missingness = missingness;
        p.feature_effects = shared;
        p.user_signature_strength = 2.0;
        return p;
    };

    CountryProfile uk = make("UK", 7, 0.6905, 0);
    CountryProfile dk = make("Denmark", 3, 0.4963, 60);
    CountryProfile it = make("Italy", 28, 0.6478, 60);
    CountryProfile py = make("Paraguay", 3, 0.5452, -180);
    CountryProfile mn = make("Mongolia", 17, 0.2452, 480);

    // Mild per-country flavour.
    uk.feature_effects["app_tools"] = {0.45, -0.25};
    dk.feature_effects["app_news_and_magazines"] = {-0.35, 0.20};
    it.feature_effects["activity_in_vehicle"] = {-0.25, 0.20};
    py.feature_effects["activity_in_vehicle"] = {-0.35, 0.25};
    // Mongolia diverges: two couplings flip sign and app usage leans elsewhere.
    mn.feature_effects["bluetooth_le_num_devices"] = {0.45, -0.30};
    mn.feature_effects["proximity_mean"] = {0.50, -0.40};
    mn.feature_effects["app_productivity"] = {0.35, -0.25};

    cfg.profiles = {std::move(uk), std::move(dk), std::move(it), std::move(py), std::move(mn)};
    return cfg;
}

}  // namespace socon

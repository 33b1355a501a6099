#include "socon/dataset_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "socon/common.hpp"
#include "socon/csv.hpp"

namespace socon {

using nlohmann::json;

namespace {

EventFormat infer_format(const std::string& path, EventFormat requested) {
    if (requested != EventFormat::infer) return requested;
    if (path.size() >= 6 && path.compare(path.size() - 6, 6, ".jsonl") == 0) return EventFormat::jsonl;
    if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0) return EventFormat::csv;
    throw ValidationError("cannot infer events file format from extension: " + path);
}

[[noreturn]] void bad_row(const std::string& path, std::size_t line, const std::string& what) {
    throw ValidationError(path + ", row " + std::to_string(line) + ": " + what);
}

json payload_json(const Payload& p) {
    json j = json::object();
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, LocationPayload>) {
                j["lat"] = v.lat;
                j["lon"] = v.lon;
                j["altitude"] = v.altitude;
            } else if constexpr (std::is_same_v<T, RssiPayload>) {
                j["rssi"] = v.rssi;
            } else if constexpr (std::is_same_v<T, WifiPayload>) {
                j["rssi"] = v.rssi;
                j["connected"] = v.connected;
                j["hotspot_devices"] = v.hotspot_devices;
            } else if constexpr (std::is_same_v<T, CellularPayload>) {
                j["strength"] = v.strength;
            } else if constexpr (std::is_same_v<T, NotificationPayload>) {
                j["action"] = std::string(to_string(v.action));
                j["duplicate"] = v.duplicate;
            } else if constexpr (std::is_same_v<T, ProximityPayload>) {
                j["value"] = v.value;
            } else if constexpr (std::is_same_v<T, ActivityPayload>) {
                j["activity_kind"] = std::string(to_string(v.kind));
            } else if constexpr (std::is_same_v<T, StepsPayload>) {
                j["step_count"] = v.step_count;
            } else if constexpr (std::is_same_v<T, TouchPayload>) {
                // empty object
            } else if constexpr (std::is_same_v<T, ScreenPayload>) {
                j["screen_state"] = std::string(to_string(v.state));
            } else if constexpr (std::is_same_v<T, AppUsagePayload>) {
                j["app_category"] = app_categories().at(static_cast<std::size_t>(v.category));
                j["duration_s"] = v.duration_s;
            }
        },
        p);
    return j;
}

template <typename T>
T require(const json& j, const char* key, std::size_t line) {
    auto it = j.find(key);
    if (it == j.end()) {
        throw ValidationError("row " + std::to_string(line) + ": payload missing field '" + key + "'");
    }
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        throw ValidationError("row " + std::to_string(line) + ": payload field '" + key + "' has wrong type");
    }
}

Payload payload_from(Modality m, const json& j, std::size_t line) {
    switch (m) {
        case Modality::location:
            return LocationPayload{require<double>(j, "lat", line), require<double>(j, "lon", line),
                                   require<double>(j, "altitude", line)};
        case Modality::bluetooth_le:
        case Modality::bluetooth_normal:
            return RssiPayload{require<int>(j, "rssi", line)};
        case Modality::wifi:
            return WifiPayload{require<int>(j, "rssi", line), require<bool>(j, "connected", line),
                               require<int>(j, "hotspot_devices", line)};
        case Modality::cellular_gsm:
        case Modality::cellular_wcdma:
        case Modality::cellular_lte:
            return CellularPayload{require<int>(j, "strength", line)};
        case Modality::notifications: {
            const auto action = parse_notification_action(require<std::string>(j, "action", line));
            if (!action) bad_row("payload", line, "unknown notification action");
            return NotificationPayload{*action, require<bool>(j, "duplicate", line)};
        }
        case Modality::proximity:
            return ProximityPayload{require<double>(j, "value", line)};
        case Modality::activity: {
            const auto kind = parse_activity_kind(require<std::string>(j, "activity_kind", line));
            if (!kind) bad_row("payload", line, "unknown activity_kind");
            return ActivityPayload{*kind};
        }
        case Modality::steps:
            return StepsPayload{require<long long>(j, "step_count", line)};
        case Modality::touch:
            return TouchPayload{};
        case Modality::screen: {
            const auto state = parse_screen_state(require<std::string>(j, "screen_state", line));
            if (!state) bad_row("payload", line, "unknown screen_state");
            return ScreenPayload{*state};
        }
        case Modality::app_usage: {
            const auto name = require<std::string>(j, "app_category", line);
            const int idx = app_category_index(name);
            if (idx < 0) bad_row("payload", line, "unknown app_category '" + name + "'");
            return AppUsagePayload{idx, require<double>(j, "duration_s", line)};
        }
    }
    throw Error("unreachable modality");
}

SensorEvent parse_event_fields(const std::string& path, std::size_t line, const std::string& pid,
                               const std::string& ts, const std::string& modality_name,
                               const std::string& payload_text) {
    SensorEvent e;
    e.participant_id = pid;
    if (e.participant_id.empty()) bad_row(path, line, "empty participant_id");
    e.timestamp = csv::parse_int(ts, "timestamp", line);
    const auto m = parse_modality(modality_name);
    if (!m) bad_row(path, line, "unknown modality '" + modality_name + "'");
    e.modality = *m;
    json j;
    try {
        j = json::parse(payload_text);
    } catch (const json::exception& ex) {
        bad_row(path, line, std::string("payload is not valid JSON: ") + ex.what());
    }
    try {
        e.payload = payload_from(e.modality, j, line);
    } catch (const ValidationError& ex) {
        bad_row(path, line, ex.what());
    }
    return e;
}

std::vector<SensorEvent> read_events_jsonl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::vector<SensorEvent> events;
    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        if (text.empty()) continue;
        json j;
        try {
            j = json::parse(text);
        } catch (const json::exception& ex) {
            bad_row(path, line, std::string("invalid JSON: ") + ex.what());
        }
        SensorEvent e;
        e.participant_id = require<std::string>(j, "participant_id", line);
        if (e.participant_id.empty()) bad_row(path, line, "empty participant_id");
        e.timestamp = require<std::int64_t>(j, "timestamp", line);
        const auto modality_name = require<std::string>(j, "modality", line);
        const auto m = parse_modality(modality_name);
        if (!m) bad_row(path, line, "unknown modality '" + modality_name + "'");
        e.modality = *m;
        auto it = j.find("payload");
        if (it == j.end() || !it->is_object()) bad_row(path, line, "missing payload object");
        try {
            e.payload = payload_from(e.modality, *it, line);
        } catch (const ValidationError& ex) {
            bad_row(path, line, ex.what());
        }
        events.push_back(std::move(e));
    }
    return events;
}

std::vector<SensorEvent> read_events_csv(const std::string& path) {
    const auto rows = csv::read_file(path);
    if (rows.empty()) throw ValidationError(path + ": empty events file");
    const auto& header = rows[0].fields;
    if (header.size() < 4 || header[0] != "participant_id" || header[1] != "timestamp" ||
        header[2] != "modality" || header[3] != "payload") {
        throw ValidationError(path + ": expected header participant_id,timestamp,modality,payload");
    }
    std::vector<SensorEvent> events;
    events.reserve(rows.size() - 1);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.fields.size() != 4) bad_row(path, r.line_number, "expected 4 fields");
        events.push_back(
            parse_event_fields(path, r.line_number, r.fields[0], r.fields[1], r.fields[2], r.fields[3]));
    }
    return events;
}

std::vector<SelfReport> read_reports(const std::string& path) {
    const auto rows = csv::read_file(path);
    if (rows.empty()) throw ValidationError(path + ": empty reports file");
    const auto& header = rows[0].fields;
    const std::vector<std::string> expected = {"participant_id", "timestamp", "social_context",
                                               "valence", "semantic_location", "activity"};
    if (header != expected) {
        throw ValidationError(path +
                              ": expected header participant_id,timestamp,social_context,valence,"
                              "semantic_location,activity");
    }
    std::vector<SelfReport> reports;
    reports.reserve(rows.size() - 1);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.fields.size() != 6) bad_row(path, r.line_number, "expected 6 fields");
        SelfReport rep;
        rep.participant_id = r.fields[0];
        if (rep.participant_id.empty()) bad_row(path, r.line_number, "empty participant_id");
        rep.timestamp = csv::parse_int(r.fields[1], "timestamp", r.line_number);
        const auto ctx = parse_social_context(r.fields[2]);
        if (!ctx) bad_row(path, r.line_number, "unknown social_context '" + r.fields[2] + "'");
        rep.social_context = *ctx;
        if (!r.fields[3].empty()) {
            rep.valence = static_cast<int>(csv::parse_int(r.fields[3], "valence", r.line_number));
        }
        if (!r.fields[4].empty()) rep.semantic_location = r.fields[4];
        if (!r.fields[5].empty()) rep.activity = r.fields[5];
        reports.push_back(std::move(rep));
    }
    return reports;
}

std::vector<Participant> read_participants(const std::string& path) {
    const auto rows = csv::read_file(path);
    if (rows.empty()) throw ValidationError(path + ": empty participants file");
    const auto& header = rows[0].fields;
    if (header.size() < 3 || header[0] != "participant_id" || header[1] != "country" ||
        header[2] != "utc_offset_minutes" || (header.size() == 4 && header[3] != "sex") ||
        header.size() > 4) {
        throw ValidationError(path + ": expected header participant_id,country,utc_offset_minutes[,sex]");
    }
    const bool has_sex = header.size() == 4;
    std::vector<Participant> participants;
    participants.reserve(rows.size() - 1);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.fields.size() != header.size()) bad_row(path, r.line_number, "field count mismatch");
        Participant p;
        p.participant_id = r.fields[0];
        if (p.participant_id.empty()) bad_row(path, r.line_number, "empty participant_id");
        p.country = r.fields[1];
        if (p.country.empty()) bad_row(path, r.line_number, "empty country");
        p.utc_offset_minutes =
            static_cast<int>(csv::parse_int(r.fields[2], "utc_offset_minutes", r.line_number));
        if (has_sex && !r.fields[3].empty()) p.sex = r.fields[3];
        participants.push_back(std::move(p));
    }
    return participants;
}

}  // namespace

std::string payload_to_json(const Payload& p) {
    return payload_json(p).dump();
}

Payload payload_from_json(Modality m, const std::string& json_text, std::size_t line) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& ex) {
        throw ValidationError("row " + std::to_string(line) + ": payload is not valid JSON: " + ex.what());
    }
    return payload_from(m, j, line);
}

Dataset ingest(const std::string& events_path, const std::string& reports_path,
               const std::string& participants_path, EventFormat format) {
    Dataset ds;
    ds.participants = read_participants(participants_path);
    const EventFormat fmt = infer_format(events_path, format);
    ds.events = fmt == EventFormat::jsonl ? read_events_jsonl(events_path) : read_events_csv(events_path);
    ds.reports = read_reports(reports_path);
    try {
        ds.canonicalize();
    } catch (const ValidationError& ex) {
        throw ValidationError(std::string("dataset invariant violated: ") + ex.what());
    }
    return ds;
}

void emit(const Dataset& ds, const std::string& events_path, const std::string& reports_path,
          const std::string& participants_path, EventFormat format) {
    const EventFormat fmt = infer_format(events_path, format);

    {
        std::ofstream out(events_path, std::ios::binary);
        if (!out) throw Error("cannot write file: " + events_path);
        if (fmt == EventFormat::jsonl) {
            for (const auto& e : ds.events) {
                json j;
                j["participant_id"] = e.participant_id;
                j["timestamp"] = e.timestamp;
                j["modality"] = std::string(to_string(e.modality));
                j["payload"] = payload_json(e.payload);
                out << j.dump() << '\n';
            }
        } else {
            csv::Writer w(out);
            w.field(std::string("participant_id")).field(std::string("timestamp"))
                .field(std::string("modality")).field(std::string("payload"));
            w.end_row();
            for (const auto& e : ds.events) {
                w.field(e.participant_id)
                    .field(static_cast<long long>(e.timestamp))
                    .field(std::string(to_string(e.modality)))
                    .field(payload_json(e.payload).dump());
                w.end_row();
            }
        }
    }
    {
        std::ofstream out(reports_path, std::ios::binary);
        if (!out) throw Error("cannot write file: " + reports_path);
        csv::Writer w(out);
        w.field(std::string("participant_id")).field(std::string("timestamp"))
            .field(std::string("social_context")).field(std::string("valence"))
            .field(std::string("semantic_location")).field(std::string("activity"));
        w.end_row();
        for (const auto& r : ds.reports) {
            w.field(r.participant_id)
                .field(static_cast<long long>(r.timestamp))
                .field(std::string(to_string(r.social_context)))
                .field(r.valence ? std::to_string(*r.valence) : std::string())
                .field(r.semantic_location.value_or(""))
                .field(r.activity.value_or(""));
            w.end_row();
        }
    }
    {
        std::ofstream out(participants_path, std::ios::binary);
        if (!out) throw Error("cannot write file: " + participants_path);
        csv::Writer w(out);
        w.field(std::string("participant_id")).field(std::string("country"))
            .field(std::string("utc_offset_minutes")).field(std::string("sex"));
        w.end_row();
        for (const auto& p : ds.participants) {
            w.field(p.participant_id)
                .field(p.country)
                .field(static_cast<long long>(p.utc_offset_minutes))
                .field(p.sex.value_or(""));
            w.end_row();
        }
    }
}

}  // namespace socon

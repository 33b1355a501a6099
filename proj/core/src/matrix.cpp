#include "socon/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "socon/common.hpp"
#include "socon/csv.hpp"

namespace socon {

void FeatureMatrix::reserve_rows(std::size_t n) {
    participant_id.reserve(n);
    country.reserve(n);
    report_timestamp.reserve(n);
    label.reserve(n);
    synthetic.reserve(n);
    values.reserve(n * cols());
    markers.reserve(n * schema.n_markers());
}

void FeatureMatrix::push_row(std::string pid, std::string country_label, std::int64_t timestamp,
                             std::uint8_t lbl, const std::vector<double>& vals,
                             const std::vector<std::uint8_t>& marks, std::uint8_t synth) {
    if (vals.size() != cols() || marks.size() != schema.n_markers()) {
        throw Error("push_row: width mismatch with schema");
    }
    participant_id.push_back(std::move(pid));
    country.push_back(std::move(country_label));
    report_timestamp.push_back(timestamp);
    label.push_back(lbl);
    synthetic.push_back(synth);
    values.insert(values.end(), vals.begin(), vals.end());
    markers.insert(markers.end(), marks.begin(), marks.end());
}

FeatureMatrix FeatureMatrix::subset(const std::vector<std::size_t>& row_indices) const {
    FeatureMatrix out;
    out.schema = schema;
    out.reserve_rows(row_indices.size());
    const std::size_t c = cols();
    const std::size_t nm = schema.n_markers();
    for (std::size_t r : row_indices) {
        out.participant_id.push_back(participant_id[r]);
        out.country.push_back(country[r]);
        out.report_timestamp.push_back(report_timestamp[r]);
        out.label.push_back(label[r]);
        out.synthetic.push_back(synthetic[r]);
        out.values.insert(out.values.end(), row(r), row(r) + c);
        out.markers.insert(out.markers.end(), marker_row(r), marker_row(r) + nm);
    }
    return out;
}

FeatureMatrix FeatureMatrix::project(const std::vector<std::size_t>& feature_indices) const {
    FeatureMatrix out;
    out.schema = schema.project_features(feature_indices);
    out.participant_id = participant_id;
    out.country = country;
    out.report_timestamp = report_timestamp;
    out.label = label;
    out.synthetic = synthetic;

    const std::size_t n = rows();
    out.values.resize(n * feature_indices.size());
    for (std::size_t r = 0; r < n; ++r) {
        const double* src = row(r);
        double* dst = out.values.data() + r * feature_indices.size();
        for (std::size_t j = 0; j < feature_indices.size(); ++j) dst[j] = src[feature_indices[j]];
    }

    // Remap markers onto the projected marker set.
    out.markers.resize(n * out.schema.n_markers());
    std::vector<int> src_marker(out.schema.n_markers(), -1);
    for (std::size_t j = 0; j < out.schema.marker_groups.size(); ++j) {
        src_marker[j] = schema.marker_index(out.schema.marker_groups[j]);
    }
    for (std::size_t r = 0; r < n; ++r) {
        const std::uint8_t* src = marker_row(r);
        std::uint8_t* dst = out.markers.data() + r * out.schema.n_markers();
        for (std::size_t j = 0; j < out.schema.n_markers(); ++j) {
            dst[j] = src_marker[j] >= 0 ? src[src_marker[j]] : 0;
        }
    }
    return out;
}

std::vector<std::string> FeatureMatrix::distinct_users() const {
    std::set<std::string> s(participant_id.begin(), participant_id.end());
    return {s.begin(), s.end()};
}

std::vector<std::string> FeatureMatrix::distinct_countries() const {
    std::set<std::string> s(country.begin(), country.end());
    return {s.begin(), s.end()};
}

std::vector<std::size_t> FeatureMatrix::rows_of_country(const std::string& c) const {
    std::vector<std::size_t> out;
    for (std::size_t r = 0; r < rows(); ++r) {
        if (country[r] == c) out.push_back(r);
    }
    return out;
}

long long FeatureMatrix::count_label(BinaryLabel l) const {
    long long n = 0;
    for (std::uint8_t v : label) {
        if (v == static_cast<std::uint8_t>(l)) ++n;
    }
    return n;
}

void write_feature_csv(const FeatureMatrix& m, std::ostream& out) {
    csv::Writer w(out);
    w.field(std::string("participant_id")).field(std::string("country"))
        .field(std::string("report_timestamp")).field(std::string("synthetic"));
    for (const auto& name : m.schema.feature_names) w.field(name);
    for (const auto& name : m.schema.marker_names) w.field(name);
    w.field(std::string("label"));
    w.end_row();

    const std::size_t c = m.cols();
    const std::size_t nm = m.schema.n_markers();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        w.field(m.participant_id[r]).field(m.country[r])
            .field(static_cast<long long>(m.report_timestamp[r]))
            .field(static_cast<long long>(m.synthetic[r]));
        const double* vals = m.row(r);
        for (std::size_t j = 0; j < c; ++j) {
            if (std::isnan(vals[j])) w.raw_field("");
            else w.field(vals[j]);
        }
        const std::uint8_t* marks = m.marker_row(r);
        for (std::size_t j = 0; j < nm; ++j) w.field(static_cast<long long>(marks[j]));
        w.field(static_cast<long long>(m.label[r]));
        w.end_row();
    }
}

void write_feature_csv(const FeatureMatrix& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path);
    write_feature_csv(m, out);
}

FeatureMatrix read_feature_csv(std::istream& in) {
    const auto rows = csv::read_all(in);
    if (rows.empty()) throw ValidationError("feature csv: empty file");
    const auto& header = rows[0].fields;
    if (header.size() < 6 || header[0] != "participant_id" || header[1] != "country" ||
        header[2] != "report_timestamp" || header[3] != "synthetic" || header.back() != "label") {
        throw ValidationError("feature csv: unexpected header");
    }

    // Columns between the metadata and the trailing label split into features
    // (everything before the first *_nan_marker) and markers.
    FeatureMatrix m;
    const std::size_t first_col = 4;
    const std::size_t last_col = header.size() - 1;
    std::size_t marker_start = last_col;
    for (std::size_t j = first_col; j < last_col; ++j) {
        if (header[j].size() > 11 && header[j].compare(header[j].size() - 11, 11, "_nan_marker") == 0) {
            marker_start = j;
            break;
        }
    }
    for (std::size_t j = first_col; j < marker_start; ++j) {
        m.schema.feature_names.push_back(header[j]);
        // Group is recovered from the name prefix where possible; columns with
        // unknown prefixes are treated as their own nameless group via `time`.
        SensorGroup g = SensorGroup::time;
        for (int gi = 0; gi < kNumSensorGroups; ++gi) {
            const auto gname = to_string(static_cast<SensorGroup>(gi));
            if (header[j].rfind(std::string(gname) + "_", 0) == 0) {
                g = static_cast<SensorGroup>(gi);
                break;
            }
        }
        if (header[j].rfind("app_", 0) == 0) g = SensorGroup::app_usage;
        if (header[j].rfind("time_", 0) == 0) g = SensorGroup::time;
        m.schema.feature_group.push_back(g);
    }
    for (std::size_t j = marker_start; j < last_col; ++j) {
        const auto& name = header[j];
        const auto g = parse_sensor_group(name.substr(0, name.size() - 11));
        if (!g) throw ValidationError("feature csv: bad marker column '" + name + "'");
        m.schema.marker_groups.push_back(*g);
        m.schema.marker_names.push_back(name);
    }

    const std::size_t n_features = m.schema.n_features();
    const std::size_t n_markers = m.schema.n_markers();
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.fields.size() != header.size()) {
            throw ValidationError("feature csv: row " + std::to_string(r.line_number) + " field count mismatch");
        }
        m.participant_id.push_back(r.fields[0]);
        m.country.push_back(r.fields[1]);
        m.report_timestamp.push_back(csv::parse_int(r.fields[2], "report_timestamp", r.line_number));
        m.synthetic.push_back(static_cast<std::uint8_t>(csv::parse_int(r.fields[3], "synthetic", r.line_number)));
        for (std::size_t j = 0; j < n_features; ++j) {
            const auto& cell = r.fields[first_col + j];
            m.values.push_back(cell.empty() ? std::nan("")
                                            : csv::parse_double(cell, "feature", r.line_number));
        }
        for (std::size_t j = 0; j < n_markers; ++j) {
            const auto& cell = r.fields[marker_start + j];
            m.markers.push_back(static_cast<std::uint8_t>(csv::parse_int(cell, "marker", r.line_number)));
        }
        const long long lbl = csv::parse_int(r.fields[last_col], "label", r.line_number);
        if (lbl != 0 && lbl != 1) {
            throw ValidationError("feature csv: row " + std::to_string(r.line_number) + " label must be 0 or 1");
        }
        m.label.push_back(static_cast<std::uint8_t>(lbl));
    }
    return m;
}

FeatureMatrix read_feature_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path);
    return read_feature_csv(in);
}

}  // namespace socon

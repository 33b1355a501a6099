#pragma once

// Small builders shared across the test suites.

#include <cmath>
#include <string>
#include <vector>

#include "socon/matrix.hpp"
#include "socon/schema.hpp"

namespace test_helpers {

// A miniature schema: one feature per listed group, named "<group>_value".
inline socon::FeatureSchema tiny_schema(const std::vector<socon::SensorGroup>& groups) {
    socon::FeatureSchema s;
    for (auto g : groups) {
        s.feature_names.push_back(std::string(socon::to_string(g)) + "_value");
        s.feature_group.push_back(g);
        if (g != socon::SensorGroup::time) {
            s.marker_groups.push_back(g);
            s.marker_names.push_back(std::string(socon::to_string(g)) + "_nan_marker");
        }
    }
    return s;
}

struct RowSpec {
    std::string user;
    std::int64_t ts = 0;
    std::uint8_t label = 0;
    std::vector<double> values;           // NaN = missing
    std::vector<std::uint8_t> markers;    // empty -> derived from NaN pattern
};

inline socon::FeatureMatrix make_matrix(socon::FeatureSchema schema,
                                        const std::vector<RowSpec>& rows,
                                        const std::string& country = "X") {
    socon::FeatureMatrix m;
    m.schema = std::move(schema);
    for (const auto& r : rows) {
        std::vector<std::uint8_t> marks = r.markers;
        if (marks.empty()) {
            marks.resize(m.schema.n_markers(), 0);
            for (std::size_t g = 0; g < m.schema.n_markers(); ++g) {
                for (std::size_t j = 0; j < m.schema.n_features(); ++j) {
                    if (m.schema.feature_group[j] == m.schema.marker_groups[g] &&
                        std::isnan(r.values[j])) {
                        marks[g] = 1;
                    }
                }
            }
        }
        m.push_row(r.user, country, r.ts, r.label, r.values, marks);
    }
    return m;
}

inline bool nearly_equal(double a, double b, double tol = 1e-12) {
    if (std::isnan(a) && std::isnan(b)) return true;
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

inline bool matrices_equal(const socon::FeatureMatrix& a, const socon::FeatureMatrix& b,
                           double tol = 0.0) {
    if (a.schema != b.schema || a.rows() != b.rows()) return false;
    if (a.participant_id != b.participant_id || a.country != b.country ||
        a.report_timestamp != b.report_timestamp || a.label != b.label ||
        a.markers != b.markers || a.synthetic != b.synthetic) {
        return false;
    }
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double x = a.values[i], y = b.values[i];
        if (std::isnan(x) && std::isnan(y)) continue;
        if (tol == 0.0 ? x != y : std::abs(x - y) > tol) return false;
    }
    return true;
}

}  // namespace test_helpers

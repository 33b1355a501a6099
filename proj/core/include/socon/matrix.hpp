#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "socon/schema.hpp"
#include "socon/types.hpp"

namespace socon {

// One example per self-report: metadata, schema-aligned feature values
// (NaN where the group was absent from the window), group missing markers,
// and the binary label (1 = Alone). Row-major, value-semantic.
struct FeatureMatrix {
    FeatureSchema schema;

    std::vector<std::string> participant_id;
    std::vector<std::string> country;
    std::vector<std::int64_t> report_timestamp;
    std::vector<std::uint8_t> label;      // 1 = Alone, 0 = NotAlone
    std::vector<std::uint8_t> synthetic;  // 1 for oversampled rows

    std::vector<double> values;           // rows x n_features
    std::vector<std::uint8_t> markers;    // rows x n_markers, 1 = group missing/imputed

    std::size_t rows() const { return participant_id.size(); }
    std::size_t cols() const { return schema.n_features(); }

    double* row(std::size_t r) { return values.data() + r * cols(); }
    const double* row(std::size_t r) const { return values.data() + r * cols(); }
    std::uint8_t* marker_row(std::size_t r) { return markers.data() + r * schema.n_markers(); }
    const std::uint8_t* marker_row(std::size_t r) const { return markers.data() + r * schema.n_markers(); }

    void reserve_rows(std::size_t n);
    // Appends a row; value/marker spans must match the schema widths.
    void push_row(std::string pid, std::string country_label, std::int64_t timestamp,
                  std::uint8_t lbl, const std::vector<double>& vals,
                  const std::vector<std::uint8_t>& marks, std::uint8_t synth = 0);

    FeatureMatrix subset(const std::vector<std::size_t>& row_indices) const;
    // Projects onto a sub-schema given by feature column indices.
    FeatureMatrix project(const std::vector<std::size_t>& feature_indices) const;

    std::vector<std::string> distinct_users() const;            // sorted unique
    std::vector<std::string> distinct_countries() const;        // sorted unique
    std::vector<std::size_t> rows_of_country(const std::string& c) const;

    long long count_label(BinaryLabel l) const;

    bool operator==(const FeatureMatrix&) const = default;
};

// CSV layout: participant_id,country,report_timestamp,synthetic,
// <features...>,<markers...>,label. Missing feature cells are empty.
void write_feature_csv(const FeatureMatrix& m, std::ostream& out);
void write_feature_csv(const FeatureMatrix& m, const std::string& path);
FeatureMatrix read_feature_csv(std::istream& in);
FeatureMatrix read_feature_csv(const std::string& path);

}  // namespace socon

#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "socon/csv.hpp"
#include "socon/matrix.hpp"
#include "socon/rng.hpp"

using namespace socon;

TEST_SUITE("io") {

TEST_CASE("csv quoting round-trips awkward fields") {
    std::ostringstream out;
    csv::Writer w(out);
    w.field(std::string("plain")).field(std::string("has,comma")).field(std::string("has\"quote"))
        .field(std::string("has\nnewline"));
    w.end_row();
    std::istringstream in(out.str());
    const auto rows = csv::read_all(in);
    REQUIRE(rows.size() == 1);
    REQUIRE(rows[0].fields.size() == 4);
    CHECK(rows[0].fields[0] == "plain");
    CHECK(rows[0].fields[1] == "has,comma");
    CHECK(rows[0].fields[2] == "has\"quote");
    CHECK(rows[0].fields[3] == "has\nnewline");
}

TEST_CASE("doubles survive the %.17g round trip") {
    Rng rng(1);
    for (int i = 0; i < 200; ++i) {
        const double v = rng.normal(0.0, 1e3);
        const std::string s = csv::format_double(v);
        CHECK(csv::parse_double(s, "x", 1) == v);
    }
}

TEST_CASE("feature matrix csv round-trips values, gaps, markers, labels") {
    auto schema = test_helpers::tiny_schema({SensorGroup::location, SensorGroup::wifi});
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const FeatureMatrix m = test_helpers::make_matrix(schema, {
        {"alice", 1604275201, 1, {1.5, nan}, {}},
        {"bob,with comma", 1604275301, 0, {-2.25e-7, 3.0}, {}},
    });
    std::ostringstream out;
    write_feature_csv(m, out);
    std::istringstream in(out.str());
    const FeatureMatrix back = read_feature_csv(in);
    CHECK(test_helpers::matrices_equal(m, back));
    CHECK(back.schema.feature_names == m.schema.feature_names);
    CHECK(back.schema.marker_names == m.schema.marker_names);
}

TEST_CASE("rng streams are stable and hierarchical derivation ignores consumption") {
    Rng a(42);
    Rng b(42);
    for (int i = 0; i < 5; ++i) CHECK(a.next_u64() == b.next_u64());

    Rng parent(7);
    const Rng child_before = parent.derive("x");
    (void)parent.next_double();
    (void)parent.poisson(3.0);
    Rng child_after = parent.derive("x");
    Rng child_copy = child_before;
    for (int i = 0; i < 5; ++i) CHECK(child_copy.next_u64() == child_after.next_u64());
}

TEST_CASE("poisson and normal draws have roughly the right moments") {
    Rng rng(3);
    double sum = 0.0, sq = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double v = rng.normal(2.0, 3.0);
        sum += v;
        sq += v * v;
    }
    CHECK(sum / n == doctest::Approx(2.0).epsilon(0.05));
    CHECK(sq / n - (sum / n) * (sum / n) == doctest::Approx(9.0).epsilon(0.08));

    long long total = 0;
    for (int i = 0; i < n; ++i) total += rng.poisson(4.5);
    CHECK(static_cast<double>(total) / n == doctest::Approx(4.5).epsilon(0.05));
}

}  // TEST_SUITE

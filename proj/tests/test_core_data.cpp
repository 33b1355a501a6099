#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "socon/common.hpp"
#include "socon/dataset_io.hpp"
#include "socon/types.hpp"

using namespace socon;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("socon_test_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

Dataset small_dataset() {
    Dataset ds;
    ds.participants = {{"p1", "UK", 0, std::nullopt}, {"p2", "Italy", 60, "f"}};
    ds.events = {
        {"p1", 1000, Modality::steps, StepsPayload{12}},
        {"p1", 900, Modality::touch, TouchPayload{}},
        {"p2", 500, Modality::wifi, WifiPayload{-55, true, 2}},
    };
    ds.reports = {
        {"p1", 1000, SocialContext::alone, 4, "home", "studying"},
        {"p2", 480, SocialContext::partner, std::nullopt, std::nullopt, std::nullopt},
    };
    ds.canonicalize();
    return ds;
}

}  // namespace

TEST_SUITE("core_data") {

TEST_CASE("ingest of a 3-event, 1-report, 1-participant file set") {
    TempDir dir;
    write_file(dir.file("participants.csv"),
               "participant_id,country,utc_offset_minutes,sex\np1,UK,0,\n");
    write_file(dir.file("events.jsonl"),
               R"({"participant_id":"p1","timestamp":100,"modality":"touch","payload":{}})"
               "\n"
               R"({"participant_id":"p1","timestamp":90,"modality":"steps","payload":{"step_count":5}})"
               "\n"
               R"({"participant_id":"p1","timestamp":95,"modality":"proximity","payload":{"value":3.0}})"
               "\n");
    write_file(dir.file("reports.csv"),
               "participant_id,timestamp,social_context,valence,semantic_location,activity\n"
               "p1,100,alone,3,home,studying\n");
    const Dataset ds = ingest(dir.file("events.jsonl"), dir.file("reports.csv"),
                              dir.file("participants.csv"));
    CHECK(ds.events.size() == 3);
    CHECK(ds.reports.size() == 1);
    CHECK(ds.participants.size() == 1);
}

TEST_CASE("ingest rejects an unknown modality with a row number") {
    TempDir dir;
    write_file(dir.file("participants.csv"), "participant_id,country,utc_offset_minutes\np1,UK,0\n");
    write_file(dir.file("events.jsonl"),
               R"({"participant_id":"p1","timestamp":100,"modality":"sonar","payload":{}})"
               "\n");
    write_file(dir.file("reports.csv"),
               "participant_id,timestamp,social_context,valence,semantic_location,activity\n"
               "p1,100,alone,,,\n");
    try {
        (void)ingest(dir.file("events.jsonl"), dir.file("reports.csv"), dir.file("participants.csv"));
        FAIL("expected a validation error");
    } catch (const ValidationError& ex) {
        const std::string msg = ex.what();
        CHECK(msg.find("sonar") != std::string::npos);
        CHECK(msg.find("row 1") != std::string::npos);
    }
}

TEST_CASE("ingest rejects orphan participant ids") {
    TempDir dir;
    write_file(dir.file("participants.csv"), "participant_id,country,utc_offset_minutes\np1,UK,0\n");
    write_file(dir.file("events.jsonl"),
               R"({"participant_id":"ghost","timestamp":100,"modality":"touch","payload":{}})"
               "\n");
    write_file(dir.file("reports.csv"),
               "participant_id,timestamp,social_context,valence,semantic_location,activity\n"
               "p1,100,alone,,,\n");
    CHECK_THROWS_AS((void)ingest(dir.file("events.jsonl"), dir.file("reports.csv"),
                                 dir.file("participants.csv")),
                    ValidationError);
}

TEST_CASE("ingest sorts unsorted per-participant sequences") {
    TempDir dir;
    write_file(dir.file("participants.csv"), "participant_id,country,utc_offset_minutes\np1,UK,0\n");
    write_file(dir.file("events.jsonl"),
               R"({"participant_id":"p1","timestamp":300,"modality":"touch","payload":{}})"
               "\n"
               R"({"participant_id":"p1","timestamp":100,"modality":"touch","payload":{}})"
               "\n");
    write_file(dir.file("reports.csv"),
               "participant_id,timestamp,social_context,valence,semantic_location,activity\n"
               "p1,200,alone,,,\np1,50,friends,,,\n");
    const Dataset ds = ingest(dir.file("events.jsonl"), dir.file("reports.csv"),
                              dir.file("participants.csv"));
    CHECK(ds.events[0].timestamp == 100);
    CHECK(ds.events[1].timestamp == 300);
    CHECK(ds.reports[0].timestamp == 50);
    CHECK(ds.reports[1].timestamp == 200);
}

TEST_CASE("emit then ingest is the identity, jsonl and csv") {
    const Dataset ds = small_dataset();
    for (const char* events_name : {"events.jsonl", "events.csv"}) {
        TempDir dir;
        emit(ds, dir.file(events_name), dir.file("reports.csv"), dir.file("participants.csv"));
        const Dataset back = ingest(dir.file(events_name), dir.file("reports.csv"),
                                    dir.file("participants.csv"));
        CHECK(back == ds);
    }
}

TEST_CASE("binarize_label partitions the eight categories into 1 + 7") {
    int alone = 0, not_alone = 0;
    for (int c = 0; c < kNumSocialContexts; ++c) {
        if (binarize_label(static_cast<SocialContext>(c)) == BinaryLabel::Alone) ++alone;
        else ++not_alone;
    }
    CHECK(alone == 1);
    CHECK(not_alone == 7);
    CHECK(binarize_label(SocialContext::alone) == BinaryLabel::Alone);
    CHECK(binarize_label(SocialContext::partner) == BinaryLabel::NotAlone);
    CHECK(binarize_label(SocialContext::relatives) == BinaryLabel::NotAlone);
}

TEST_CASE("filter_participants thresholds") {
    Dataset ds;
    auto add_participant = [&](const std::string& id, int n_alone, int n_not) {
        ds.participants.push_back({id, "UK", 0, std::nullopt});
        std::int64_t t = 0;
        for (int i = 0; i < n_alone; ++i) {
            ds.reports.push_back({id, t += 3600, SocialContext::alone, std::nullopt, std::nullopt,
                                  std::nullopt});
        }
        for (int i = 0; i < n_not; ++i) {
            ds.reports.push_back({id, t += 3600, SocialContext::friends, std::nullopt, std::nullopt,
                                  std::nullopt});
        }
    };
    add_participant("p99", 50, 49);    // 99 reports -> out
    add_participant("p100", 6, 94);    // boundary: kept
    add_participant("p500", 5, 495);   // minority 5 -> out
    add_participant("ok", 80, 120);    // kept
    ds.canonicalize();

    const Dataset kept = filter_participants(ds);
    REQUIRE(kept.participants.size() == 2);
    CHECK(kept.find_participant("p100") != nullptr);
    CHECK(kept.find_participant("ok") != nullptr);
    CHECK(kept.find_participant("p99") == nullptr);
    CHECK(kept.find_participant("p500") == nullptr);
    CHECK(kept.reports.size() == 100 + 200);

    SUBCASE("idempotent") {
        const Dataset again = filter_participants(kept);
        CHECK(again == kept);
    }
}

TEST_CASE("filter_participants drops excluded participants' events too") {
    Dataset ds;
    ds.participants = {{"a", "UK", 0, std::nullopt}, {"b", "UK", 0, std::nullopt}};
    for (int i = 0; i < 110; ++i) {
        ds.reports.push_back({"a", i * 3600, i % 2 == 0 ? SocialContext::alone : SocialContext::friends,
                              std::nullopt, std::nullopt, std::nullopt});
    }
    ds.events.push_back({"b", 100, Modality::touch, TouchPayload{}});
    ds.reports.push_back({"b", 100, SocialContext::alone, std::nullopt, std::nullopt, std::nullopt});
    ds.canonicalize();
    const Dataset kept = filter_participants(ds);
    CHECK(kept.participants.size() == 1);
    CHECK(kept.events.empty());
    CHECK(kept.events_for("b").empty());
}

}  // TEST_SUITE

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "pucycle/dataset_io.hpp"
#include "pucycle/trajgen.hpp"

using namespace pucycle;

namespace {

std::string tmp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

std::string read_all(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_SUITE("dataset_io") {

TEST_CASE("dataset round-trip preserves every field bit for bit") {
    GeneratorConfig cfg;
    cfg.seed = 31;
    cfg.p_miss = 0.2;
    cfg.p_outl = 0.1;
    cfg.sigma_w = 0.05;
    const Dataset ds = make_dataset(cfg, 25);

    const std::string path = tmp_path("pucycle_io_roundtrip.jsonl");
    save_dataset_jsonl(ds, path);
    const Dataset back = load_dataset_jsonl(path);

    REQUIRE(back.train.size() == ds.train.size());
    REQUIRE(back.eval.size() == ds.eval.size());
    auto check_seq = [](const ObservedSequence& a, const ObservedSequence& b) {
        CHECK(a.id == b.id);
        CHECK(a.gt.dt == b.gt.dt);
        REQUIRE(a.length() == b.length());
        for (int k = 0; k < a.length(); ++k) {
            const auto ku = static_cast<std::size_t>(k);
            CHECK(a.gt.positions[ku].x == b.gt.positions[ku].x);
            CHECK(a.gt.positions[ku].y == b.gt.positions[ku].y);
            CHECK(a.obs[ku].x == b.obs[ku].x);
            CHECK(a.obs[ku].y == b.obs[ku].y);
            CHECK(a.mask[ku] == b.mask[ku]);
            CHECK(a.outlier[ku] == b.outlier[ku]);
        }
        CHECK(a.gt.agent.speed == b.gt.agent.speed);
        CHECK(a.gt.agent.turn_angle_deg == b.gt.agent.turn_angle_deg);
        CHECK(a.gt.agent.turn_start == b.gt.agent.turn_start);
        CHECK(a.gt.agent.turn_len == b.gt.agent.turn_len);
    };
    for (std::size_t i = 0; i < ds.train.size(); ++i) check_seq(ds.train[i], back.train[i]);
    for (std::size_t i = 0; i < ds.eval.size(); ++i) check_seq(ds.eval[i], back.eval[i]);
    std::remove(path.c_str());
}

TEST_CASE("saving a reloaded dataset reproduces the file byte for byte") {
    GeneratorConfig cfg;
    cfg.seed = 32;
    cfg.p_miss = 0.1;
    const Dataset ds = make_dataset(cfg, 10);
    const std::string p1 = tmp_path("pucycle_io_b1.jsonl");
    const std::string p2 = tmp_path("pucycle_io_b2.jsonl");
    save_dataset_jsonl(ds, p1);
    save_dataset_jsonl(load_dataset_jsonl(p1), p2);
    CHECK(read_all(p1) == read_all(p2));
    std::remove(p1.c_str());
    std::remove(p2.c_str());
}

TEST_CASE("malformed rows report the line number") {
    const std::string path = tmp_path("pucycle_io_bad.jsonl");
    {
        GeneratorConfig cfg;
        const Dataset ds = make_dataset(cfg, 5);
        save_dataset_jsonl(ds, path);
        std::ofstream app(path, std::ios::app | std::ios::binary);
        app << "{not json\n";
    }
    try {
        load_dataset_jsonl(path);
        FAIL("expected a parse error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("line 6") != std::string::npos);
    }
    std::remove(path.c_str());
}

TEST_CASE("mismatched array lengths are rejected") {
    const std::string path = tmp_path("pucycle_io_mismatch.jsonl");
    {
        std::ofstream out(path, std::ios::binary);
        out << R"({"id":0,"dt":0.0625,"gt":[[0.0,0.0],[1.0,1.0]],"obs":[[0.0,0.0]],)"
            << R"("mask":[1,1],"outlier":[0,0],)"
            << R"("meta":{"speed":1.0,"turn_angle_deg":50.0,"turn_start":0,"turn_len":1}})"
            << "\n";
    }
    CHECK_THROWS_AS(load_dataset_jsonl(path), std::runtime_error);
    std::remove(path.c_str());
}

TEST_CASE("missing file is an explicit error") {
    CHECK_THROWS_AS(load_dataset_jsonl(tmp_path("pucycle_io_nope.jsonl")), std::runtime_error);
}

}  // TEST_SUITE

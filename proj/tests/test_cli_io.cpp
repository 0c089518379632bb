#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qtrm/cache.hpp"
#include "qtrm/json_io.hpp"

#include <unistd.h>

#include <filesystem>

using namespace qtrm;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("qtrm-test-" + std::to_string(::getpid()) + "-" +
                std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("L-table JSON round trip is byte-identical") {
    ToroidalEngine<RatFunc> tor(symbolic_params());
    const LTable<RatFunc>& t2 = tor.L_table(2);
    nlohmann::json j = ltable_to_json(t2);
    LTable<RatFunc> back = ltable_from_json(j);
    CHECK(back.weight == 2);
    CHECK(back.entries.size() == t2.entries.size());
    CHECK(dump_canonical(ltable_to_json(back)) == dump_canonical(j));
}

TEST_CASE("block JSON round trip is byte-identical") {
    auto tor = std::make_shared<ToroidalEngine<RatFunc>>(symbolic_params());
    FockEngine<RatFunc> fock(tor);
    FockBlock<RatFunc> b1 = fock.assemble_full_block(1);
    nlohmann::json j = block_to_json(b1);
    FockBlock<RatFunc> back = block_from_json(j);
    CHECK(back.weight == 1);
    CHECK(back.convention == b1.convention);
    CHECK(dump_canonical(block_to_json(back)) == dump_canonical(j));
}

TEST_CASE("rbar JSON round trip") {
    ToroidalEngine<RatFunc> tor(symbolic_params());
    nlohmann::json j = rbar_to_json(tor.rbar_coeffs(1));
    RbarCoeffs<RatFunc> back = rbar_from_json(j);
    CHECK(dump_canonical(rbar_to_json(back)) == dump_canonical(j));
}

TEST_CASE("schema version mismatch is rejected with both versions named") {
    ToroidalEngine<RatFunc> tor(symbolic_params());
    nlohmann::json j = ltable_to_json(tor.L_table(1));
    j["schema_version"] = 999;
    try {
        ltable_from_json(j);
        FAIL("expected schema_error");
    } catch (const schema_error& e) {
        std::string msg = e.what();
        CHECK(msg.find("expected 1") != std::string::npos);
        CHECK(msg.find("found 999") != std::string::npos);
    }
    nlohmann::json k = ltable_to_json(tor.L_table(1));
    k["kind"] = "block";
    CHECK_THROWS_AS(ltable_from_json(k), schema_error);
}

TEST_CASE("disk cache: warm results equal cold results") {
    TempDir dir;
    std::string cold, warm;
    {
        auto cache = std::make_shared<DiskCache>(dir.path);
        ToroidalEngine<RatFunc> tor(symbolic_params());
        tor.mac().set_transition_store(cache);
        preload_from_cache(*cache, tor, 2);
        cold = dump_canonical(ltable_to_json(tor.L_table(2)));
        save_to_cache(*cache, tor, 2);
    }
    CHECK(fs::exists(dir.path / "manifest.json"));
    CHECK(fs::exists(dir.path / "ltable_w2.json"));
    CHECK(fs::exists(dir.path / "macdonald_w2.json"));
    {
        auto cache = std::make_shared<DiskCache>(dir.path);
        ToroidalEngine<RatFunc> tor(symbolic_params());
        tor.mac().set_transition_store(cache);
        preload_from_cache(*cache, tor, 2);
        warm = dump_canonical(ltable_to_json(tor.L_table(2)));
    }
    CHECK(cold == warm);
}

TEST_CASE("cached transition matrices reproduce the computed engine") {
    TempDir dir;
    // first engine populates the cache
    {
        auto cache = std::make_shared<DiskCache>(dir.path);
        MacdonaldEngine<RatFunc> eng(MacdonaldParams<RatFunc>::make(
            RatFunc::variable(Var::q), RatFunc::variable(Var::t)));
        eng.set_transition_store(cache);
        eng.macdonald_P(Partition({2, 1}));
    }
    // second engine must produce identical polynomials through the cache
    auto cache = std::make_shared<DiskCache>(dir.path);
    MacdonaldEngine<RatFunc> cached(MacdonaldParams<RatFunc>::make(
        RatFunc::variable(Var::q), RatFunc::variable(Var::t)));
    cached.set_transition_store(cache);
    MacdonaldEngine<RatFunc> fresh(MacdonaldParams<RatFunc>::make(
        RatFunc::variable(Var::q), RatFunc::variable(Var::t)));
    for (const Partition& la : partitions_of(3)) {
        CHECK(cached.macdonald_P(la).coeffs == fresh.macdonald_P(la).coeffs);
        CHECK(cached.P_norm(la) == fresh.P_norm(la));
    }
}

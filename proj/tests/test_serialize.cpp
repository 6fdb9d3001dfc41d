#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "operadforge/bar.hpp"
#include "operadforge/serialize.hpp"

using namespace opf;

namespace {

const field qq = field::rationals();
const field f2 = field::prime(2);

std::string fresh_dir() {
    std::string d = (std::filesystem::temp_directory_path() /
                     ("opf-cache-test-" + std::to_string(::getpid())))
                        .string();
    std::filesystem::remove_all(d);
    return d;
}

}  // namespace

TEST_CASE("matrix round trip") {
    sparse_matrix m(qq, 2, 3);
    m.set(0, 1, scalar(qq, rational(1, 3)));
    m.set(1, 2, scalar(qq, -7));
    sparse_matrix back = matrix_from_json(qq, matrix_to_json(m));
    CHECK(back == m);
    sparse_matrix mp(f2, 2, 2);
    mp.set(1, 0, scalar(f2, 1));
    CHECK(matrix_from_json(f2, matrix_to_json(mp)) == mp);
}

TEST_CASE("complex and equivariant round trip") {
    chain_complex c(qq);
    c.set_basis(0, {basis_label{"a", 0}, basis_label{"b", 1}});
    c.set_basis(1, {basis_label{"c", 0}});
    sparse_matrix d(qq, 2, 1);
    d.set(0, 0, scalar(qq, 1));
    d.set(1, 0, scalar(qq, -1));
    c.set_differential(1, d);
    chain_complex back = complex_from_json(complex_to_json(c));
    CHECK(back.dim(0) == 2);
    CHECK(back.labels(0) == c.labels(0));
    CHECK(back.d(1) == d);
    CHECK(content_hash(complex_to_json(back)) == content_hash(complex_to_json(c)));

    equivariant_complex l3 = lie(qq, 3);
    equivariant_complex eb = equivariant_from_json(equivariant_to_json(l3));
    CHECK(content_hash(equivariant_to_json(eb)) == content_hash(equivariant_to_json(l3)));
    eb.complex().validate();
    eb.validate();
}

TEST_CASE("sequence and module round trip") {
    right_module p2 = surjection_module(qq, 2, 3);
    right_module back = module_from_json(module_to_json(p2));
    CHECK(content_hash(module_to_json(back)) == content_hash(module_to_json(p2)));
    CHECK(check_right_module(back));
    sym_seq s = com_seq(f2, 3);
    CHECK(content_hash(seq_to_json(seq_from_json(seq_to_json(s)))) ==
          content_hash(seq_to_json(s)));
}

TEST_CASE("surjection lists") {
    surjection s{4, 2, {1, 2, 2, 1}};
    json j = surjection_to_json(s);
    CHECK(j == json({1, 2, 2, 1}));
    CHECK(surjection_from_json(j) == s);
}

TEST_CASE("cache store and load") {
    cache_config cc{fresh_dir()};
    std::string key = cache_key("lie", {{"field", field_to_json(qq)}, {"n", 3}});
    json payload = equivariant_to_json(lie(qq, 3));
    cache_store(cc, key, payload);
    // byte-identical payload back
    std::optional<json> raw = cache_load_raw(cc, key);
    REQUIRE(raw.has_value());
    CHECK(raw->dump() == payload.dump());
    REQUIRE(cache_load_equivariant(cc, key).has_value());
    // a different field hashes to a different key: miss
    std::string key2 = cache_key("lie", {{"field", field_to_json(f2)}, {"n", 3}});
    CHECK(key2 != key);
    CHECK(!cache_load_raw(cc, key2).has_value());
    CHECK(cache_entries(cc) == std::vector<std::string>{key});
    cache_clear(cc);
    CHECK(cache_entries(cc).empty());
    std::filesystem::remove_all(cc.dir);
}

TEST_CASE("tampered cache entries are rejected") {
    cache_config cc{fresh_dir()};
    chain_complex c(qq);
    c.set_basis(0, {basis_label{"a", 0}});
    c.set_basis(1, {basis_label{"b1", 0}, basis_label{"b2", 0}});
    c.set_basis(2, {basis_label{"c", 0}});
    sparse_matrix d1(qq, 1, 2);
    d1.set(0, 0, scalar(qq, 1));
    c.set_differential(1, d1);
    sparse_matrix d2(qq, 2, 1);
    d2.set(1, 0, scalar(qq, 1));
    c.set_differential(2, d2);
    std::string key = cache_key("custom", {{"n", 1}});
    json payload = equivariant_to_json(equivariant_complex(c, 1));
    cache_store(cc, key, payload);
    // reroute the top differential so d d != 0; refreshing the recorded hash
    // does not help, the load still runs the d^2 = 0 check
    json bad = payload;
    bad["complex"]["d"][1][1]["entries"][0][0] = 0;
    json env = {{"schema_version", schema_version},
                {"key", key},
                {"hash", content_hash(bad)},
                {"payload", bad}};
    std::ofstream(std::filesystem::path(cc.dir) / (key + ".json")) << env.dump();
    CHECK(cache_load_raw(cc, key).has_value());  // envelope is formally valid
    CHECK(!cache_load_equivariant(cc, key).has_value());
    // corrupted payload without a fixed hash already fails the raw load
    env["hash"] = "0000000000000000";
    std::ofstream(std::filesystem::path(cc.dir) / (key + ".json")) << env.dump();
    CHECK(!cache_load_raw(cc, key).has_value());
    std::filesystem::remove_all(cc.dir);
}

#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "operadforge/module.hpp"

namespace opf {

using json = nlohmann::json;

inline constexpr int schema_version = 1;

// matrices: {rows, cols, entries: [[i, j, "num/den"], ...]}, canonical scalar
// encoding, entries row-major
json matrix_to_json(const sparse_matrix& m);
sparse_matrix matrix_from_json(const field& f, const json& j);

json field_to_json(const field& f);
field field_from_json(const json& j);

// surjections are plain 1-indexed value lists
json surjection_to_json(const surjection& s);
surjection surjection_from_json(const json& j);

json complex_to_json(const chain_complex& c);
chain_complex complex_from_json(const json& j);

json equivariant_to_json(const equivariant_complex& e);
equivariant_complex equivariant_from_json(const json& j);

json seq_to_json(const sym_seq& m);
sym_seq seq_from_json(const json& j);

json module_to_json(const right_module& m);
right_module module_from_json(const json& j);

// FNV-1a over the canonical dump, 16 hex digits
std::string content_hash(const json& j);

// --- content-addressed cache -----------------------------------------------

struct cache_config {
    std::string dir;
};

// key = hash of (construction name, parameters); the stored envelope repeats
// the key and the payload hash
std::string cache_key(const std::string& name, const json& params);

void cache_store(const cache_config& c, const std::string& key, const json& payload);

// raw load: nullopt on missing file, malformed JSON, schema or key mismatch,
// or a payload that fails its recorded hash
std::optional<json> cache_load_raw(const cache_config& c, const std::string& key);

// validated loads: deserialized objects must pass d^2 = 0 and the action
// relations before being trusted; any failure is a miss
std::optional<equivariant_complex> cache_load_equivariant(const cache_config& c,
                                                          const std::string& key);

std::vector<std::string> cache_entries(const cache_config& c);
void cache_clear(const cache_config& c);

}  // namespace opf

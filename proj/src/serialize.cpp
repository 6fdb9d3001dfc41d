#include "operadforge/serialize.hpp"

#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace fs = std::filesystem;

namespace opf {

json matrix_to_json(const sparse_matrix& m) {
    json entries = json::array();
    for (int i = 0; i < m.rows(); ++i)
        for (const auto& [j, v] : m.row(i)) entries.push_back({i, j, v.str()});
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

sparse_matrix matrix_from_json(const field& f, const json& j) {
    sparse_matrix m(f, j.at("rows").get<int>(), j.at("cols").get<int>());
    for (const auto& e : j.at("entries"))
        m.set(e.at(0).get<int>(), e.at(1).get<int>(),
              scalar::parse(f, e.at(2).get<std::string>()));
    return m;
}

json field_to_json(const field& f) { return {{"p", f.p}}; }

field field_from_json(const json& j) {
    uint32_t p = j.at("p").get<uint32_t>();
    return p == 0 ? field::rationals() : field::prime(p);
}

json surjection_to_json(const surjection& s) { return json(s.vals); }

surjection surjection_from_json(const json& j) {
    surjection s;
    s.vals = j.get<std::vector<int>>();
    s.n = static_cast<int>(s.vals.size());
    for (int v : s.vals) s.r = std::max(s.r, v);
    return s;
}

json complex_to_json(const chain_complex& c) {
    json basis = json::array(), diff = json::array();
    for (int q : c.degrees()) {
        json ls = json::array();
        for (const basis_label& l : c.labels(q)) ls.push_back({l.name, l.weight});
        basis.push_back({q, ls});
        if (!c.d(q).is_zero()) diff.push_back({q, matrix_to_json(c.d(q))});
    }
    return {{"field", field_to_json(c.fld())}, {"basis", basis}, {"d", diff}};
}

chain_complex complex_from_json(const json& j) {
    field f = field_from_json(j.at("field"));
    chain_complex c(f);
    for (const auto& e : j.at("basis")) {
        std::vector<basis_label> ls;
        for (const auto& l : e.at(1))
            ls.push_back(basis_label{l.at(0).get<std::string>(), l.at(1).get<int>()});
        c.set_basis(e.at(0).get<int>(), std::move(ls));
    }
    for (const auto& e : j.at("d"))
        c.set_differential(e.at(0).get<int>(), matrix_from_json(f, e.at(1)));
    return c;
}

json equivariant_to_json(const equivariant_complex& e) {
    json gens = json::array();
    int n = e.group_arity();
    for (int q : e.complex().degrees())
        for (int i = 0; i + 1 < n; ++i) {
            sparse_matrix g = e.generator(q, i);
            if (g != sparse_matrix::identity(e.complex().fld(), e.complex().dim(q)))
                gens.push_back({q, i, matrix_to_json(g)});
        }
    return {{"complex", complex_to_json(e.complex())}, {"arity", n}, {"generators", gens}};
}

equivariant_complex equivariant_from_json(const json& j) {
    chain_complex c = complex_from_json(j.at("complex"));
    field f = c.fld();
    equivariant_complex e(std::move(c), j.at("arity").get<int>());
    for (const auto& g : j.at("generators"))
        e.set_generator(g.at(0).get<int>(), g.at(1).get<int>(), matrix_from_json(f, g.at(2)));
    return e;
}

json seq_to_json(const sym_seq& m) {
    json levels = json::array();
    for (int n = 0; n <= m.max_arity(); ++n) levels.push_back(equivariant_to_json(m.level(n)));
    return {{"field", field_to_json(m.fld())}, {"max_arity", m.max_arity()}, {"levels", levels}};
}

sym_seq seq_from_json(const json& j) {
    sym_seq m(field_from_json(j.at("field")), j.at("max_arity").get<int>());
    int n = 0;
    for (const auto& l : j.at("levels")) m.set_level(n++, equivariant_from_json(l));
    return m;
}

json module_to_json(const right_module& m) {
    json deltas = json::array();
    for (const auto& [key, mats] : m.delta_reps) {
        json per_q = json::array();
        for (const auto& [q, mat] : mats) per_q.push_back({q, matrix_to_json(mat)});
        deltas.push_back({key[0], key[1], key[2], per_q});
    }
    return {{"carrier", seq_to_json(m.carrier)}, {"deltas", deltas}};
}

right_module module_from_json(const json& j) {
    right_module m;
    m.carrier = seq_from_json(j.at("carrier"));
    const field& f = m.carrier.fld();
    for (const auto& d : j.at("deltas")) {
        std::map<int, sparse_matrix> mats;
        for (const auto& e : d.at(3)) mats.emplace(e.at(0).get<int>(), matrix_from_json(f, e.at(1)));
        m.set_delta(d.at(0).get<int>(), d.at(1).get<int>(), d.at(2).get<int>(), std::move(mats));
    }
    return m;
}

std::string content_hash(const json& j) {
    std::string s = j.dump();
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// --- cache -------------------------------------------------------------------

std::string cache_key(const std::string& name, const json& params) {
    return name + "-" + content_hash(json{{"name", name}, {"params", params}});
}

static fs::path entry_path(const cache_config& c, const std::string& key) {
    return fs::path(c.dir) / (key + ".json");
}

void cache_store(const cache_config& c, const std::string& key, const json& payload) {
    fs::create_directories(c.dir);
    json env = {{"schema_version", schema_version},
                {"key", key},
                {"hash", content_hash(payload)},
                {"payload", payload}};
    // write-then-rename keeps concurrent readers off half-written files
    fs::path tmp = entry_path(c, key + ".tmp." + std::to_string(::getpid()));
    {
        std::ofstream out(tmp);
        out << env.dump();
    }
    fs::rename(tmp, entry_path(c, key));
}

std::optional<json> cache_load_raw(const cache_config& c, const std::string& key) {
    std::ifstream in(entry_path(c, key));
    if (!in) return std::nullopt;
    json env;
    try {
        in >> env;
        if (env.at("schema_version").get<int>() != schema_version) return std::nullopt;
        if (env.at("key").get<std::string>() != key) return std::nullopt;
        json payload = env.at("payload");
        if (content_hash(payload) != env.at("hash").get<std::string>()) return std::nullopt;
        return payload;
    } catch (const json::exception&) {
        return std::nullopt;
    }
}

std::optional<equivariant_complex> cache_load_equivariant(const cache_config& c,
                                                          const std::string& key) {
    std::optional<json> payload = cache_load_raw(c, key);
    if (!payload) return std::nullopt;
    try {
        equivariant_complex e = equivariant_from_json(*payload);
        e.complex().validate();
        e.validate();
        return e;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::vector<std::string> cache_entries(const cache_config& c) {
    std::vector<std::string> out;
    if (!fs::is_directory(c.dir)) return out;
    for (const auto& e : fs::directory_iterator(c.dir))
        if (e.path().extension() == ".json") out.push_back(e.path().stem().string());
    std::sort(out.begin(), out.end());
    return out;
}

void cache_clear(const cache_config& c) {
    for (const std::string& k : cache_entries(c)) fs::remove(entry_path(c, k));
}

}  // namespace opf

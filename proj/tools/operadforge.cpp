// operadforge: exact operadic homological algebra at truncated arity.
// Verbs: lie, tq, stable-tq, tensor, filtration, compare, verify, cache.

#include <cstdio>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "operadforge/filtration.hpp"
#include "operadforge/parallel.hpp"
#include "operadforge/serialize.hpp"

using namespace opf;

namespace {

struct run_config {
    std::string field_name = "q";
    int max_arity = 3;
    int degree_bound = 3;
    std::string sphere_model = "min";
    std::string cache_dir = ".operadforge-cache";
    std::string format = "table";
    uint64_t seed = 1;
    std::string algebra_spec = "free:0";
    int k = 2;
    int max_n = 3;
    int max_k = 5;
    std::string space = "s1";
    int power = 2;
    std::string module_spec = "bar";
    std::string direction = "down";

    field fld() const { return field::parse(field_name); }
    bool json_out() const { return format == "json"; }
    cache_config cache() const { return cache_config{cache_dir}; }
};

algebra make_algebra(const run_config& cfg) {
    field f = cfg.fld();
    std::string s = cfg.algebra_spec;
    if (s == "zero") return zero_algebra(f, cfg.max_arity);
    auto colon = s.find(':');
    std::string kind = s.substr(0, colon);
    int deg = colon == std::string::npos ? 0 : std::stoi(s.substr(colon + 1));
    chain_complex x(f);
    x.set_basis(deg, {basis_label{"x", 1}});
    if (kind == "free") return free_algebra(x, cfg.max_arity);
    if (kind == "sq0") return square_zero(x, cfg.max_arity);
    throw CLI::ValidationError("--algebra", "expected free:<deg>, sq0:<deg> or zero");
}

sset make_space(const run_config& cfg, const std::string& s) {
    if (s == "s1") return delta_quotient(1);
    if (s == "s0") return discrete_plus(1);
    if (s.rfind("set:", 0) == 0) return discrete_plus(std::stoi(s.substr(4)));
    if (s.rfind("sphere:", 0) == 0)
        return sphere(std::stoi(s.substr(7)), cfg.sphere_model == "cube");
    throw CLI::ValidationError("--space", "expected s1, s0, set:<m> or sphere:<k>");
}

json hom_json(const std::map<int, int>& h) {
    json out = json::array();
    for (const auto& [q, d] : h) out.push_back({q, d});
    return out;
}

std::string hom_str(const std::map<int, int>& h) {
    if (h.empty()) return "0";
    std::string s;
    for (const auto& [q, d] : h) s += (s.empty() ? "" : " ") + std::to_string(q) + ":" + std::to_string(d);
    return s;
}

// --- lie ---------------------------------------------------------------------

equivariant_complex lie_cached(const run_config& cfg, int n, bool* warned) {
    std::string key = cache_key("lie", {{"field", field_to_json(cfg.fld())}, {"n", n}});
    cache_config cc = cfg.cache();
    if (std::optional<equivariant_complex> hit = cache_load_equivariant(cc, key)) return *hit;
    std::vector<std::string> entries = cache_entries(cc);
    if (std::find(entries.begin(), entries.end(), key) != entries.end() && !*warned) {
        fprintf(stderr, "warning: corrupt cache entry %s, recomputing\n", key.c_str());
        *warned = true;
    }
    equivariant_complex e = lie(cfg.fld(), n);
    cache_store(cc, key, equivariant_to_json(e));
    return e;
}

int cmd_lie(const run_config& cfg) {
    bool warned = false;
    json rows = json::array(), cxs = json::array();
    for (int n = 1; n <= cfg.max_arity; ++n) {
        equivariant_complex e = lie_cached(cfg, n, &warned);
        for (const auto& [q, h] : homology_dims(e.complex())) rows.push_back({n, q, h});
        cxs.push_back(equivariant_to_json(e));
    }
    if (cfg.json_out()) {
        printf("%s\n", json{{"schema_version", schema_version}, {"rows", rows}, {"complexes", cxs}}
                           .dump(2)
                           .c_str());
    } else {
        printf("%4s %6s %4s\n", "n", "degree", "dim");
        for (const auto& r : rows)
            printf("%4d %6d %4d\n", r[0].get<int>(), r[1].get<int>(), r[2].get<int>());
    }
    return 0;
}

// --- tq / stable-tq ----------------------------------------------------------

int cmd_tq(const run_config& cfg) {
    algebra i = make_algebra(cfg);
    chain_complex c = tq(i);
    std::map<int, int> h = homology_dims(c);
    if (cfg.json_out()) {
        printf("%s\n", json{{"schema_version", schema_version},
                            {"homology", hom_json(h)},
                            {"complex", complex_to_json(c)}}
                           .dump(2)
                           .c_str());
    } else {
        printf("H(TQ(%s)) over %s: %s\n", cfg.algebra_spec.c_str(), cfg.fld().name().c_str(),
               hom_str(h).c_str());
    }
    return 0;
}

int cmd_stable_tq(const run_config& cfg) {
    // smash powers of spheres cap the feasible arity at 2
    run_config c2 = cfg;
    c2.max_arity = std::min(cfg.max_arity, 2);
    algebra i = make_algebra(c2);
    stable_tq_result st = stable_tq(i, cfg.degree_bound, cfg.max_k);
    if (cfg.json_out()) {
        json stages = json::array();
        for (const auto& h : st.homology) stages.push_back(hom_json(h));
        printf("%s\n", json{{"schema_version", schema_version},
                            {"witness", st.witness},
                            {"stable_through", st.stable_through},
                            {"stage_homology", stages},
                            {"homology", hom_json(homology_dims(st.complex))}}
                           .dump(2)
                           .c_str());
    } else {
        printf("witness k = %d, stable through degree %d\n", st.witness, st.stable_through);
        for (size_t k = 1; k < st.homology.size(); ++k)
            printf("  k=%zu: %s\n", k, hom_str(st.homology[k]).c_str());
        printf("stable: %s\n", hom_str(homology_dims(st.complex)).c_str());
    }
    return st.witness < 0 ? 1 : 0;
}

// --- tensor ------------------------------------------------------------------

int cmd_tensor(const run_config& cfg) {
    sset k = make_space(cfg, cfg.space);
    field f = cfg.fld();
    chain_complex c =
        cfg.power == 1 ? reduced_chains(k, f) : reduced_chains(smash_power(k, cfg.power).space, f);
    if (cfg.json_out()) {
        printf("%s\n", json{{"schema_version", schema_version},
                            {"complex", complex_to_json(c)},
                            {"homology", hom_json(homology_dims(c))}}
                           .dump(2)
                           .c_str());
    } else {
        printf("%6s %4s\n", "degree", "dim");
        for (int q : c.degrees())
            if (c.dim(q)) printf("%6d %4d\n", q, c.dim(q));
        printf("homology: %s\n", hom_str(homology_dims(c)).c_str());
    }
    return 0;
}

// --- filtration --------------------------------------------------------------

right_module make_module(const run_config& cfg) {
    field f = cfg.fld();
    const std::string& s = cfg.module_spec;
    if (s == "bar") return bar_com(s1_module(f, cfg.max_arity)).mod;
    if (s == "com") return com_module(f, cfg.max_arity);
    if (s.rfind("tensor:", 0) == 0)
        return tensor_com_module(make_space(cfg, s.substr(7)), f, cfg.max_arity).mod;
    throw CLI::ValidationError("--module", "expected bar, com or tensor:<space>");
}

int cmd_filtration(const run_config& cfg) {
    right_module m = make_module(cfg);
    algebra i = make_algebra(cfg);
    json rows = json::array();
    if (cfg.direction == "down") {
        for (int n = 1; n <= cfg.max_n; ++n) {
            filtered_bar_layer l = filtered_bar_decreasing(m, i, n);
            rows.push_back({n, hom_json(homology_dims(l.layer.complex))});
        }
    } else {
        increasing_result fl = increasing_filtration(m, cfg.max_n);
        for (int n = 1; n <= cfg.max_n; ++n) {
            increasing_layer_alg_result l = module_layer_alg(fl, i, n);
            rows.push_back({n, hom_json(homology_dims(l.layer.complex))});
        }
    }
    if (cfg.json_out()) {
        printf("%s\n", json{{"schema_version", schema_version},
                            {"module", cfg.module_spec},
                            {"direction", cfg.direction},
                            {"layers", rows}}
                           .dump(2)
                           .c_str());
    } else {
        for (const auto& r : rows) {
            std::map<int, int> h;
            for (const auto& e : r[1]) h[e[0].get<int>()] = e[1].get<int>();
            printf("layer %d: %s\n", r[0].get<int>(), hom_str(h).c_str());
        }
    }
    return 0;
}

// --- compare -----------------------------------------------------------------

int cmd_compare(const run_config& cfg) {
    algebra i = make_algebra(cfg);
    tq_compare_report r = compare_tq_filtrations(i, cfg.max_n, cfg.k);
    if (cfg.json_out()) {
        json layers = json::array();
        for (int n = 1; n <= cfg.max_n; ++n)
            layers.push_back({{"n", n},
                              {"window", r.window[n]},
                              {"bar", hom_json(r.layer_bar[n])},
                              {"sphere", hom_json(r.layer_sphere[n])}});
        printf("%s\n", json{{"schema_version", schema_version},
                            {"ok", r.ok},
                            {"detail", r.detail},
                            {"layers", layers}}
                           .dump(2)
                           .c_str());
    } else {
        printf("%s%s\n", r.ok ? "agree" : "DISAGREE: ", r.ok ? "" : r.detail.c_str());
        for (int n = 1; n <= cfg.max_n; ++n)
            printf("layer %d (window %d): bar %s | sphere %s\n", n,
                   std::min(r.window[n], 1 << 10), hom_str(r.layer_bar[n]).c_str(),
                   hom_str(r.layer_sphere[n]).c_str());
    }
    return r.ok ? 0 : 1;
}

// --- verify ------------------------------------------------------------------

struct verification_report {
    std::string id;
    json params;
    bool pass = false;
    json witness;
};

verification_report v_lie_ranks(const run_config& cfg) {
    verification_report rep{"lie-ranks", {{"max_arity", cfg.max_arity}}};
    rep.pass = true;
    json rows = json::array();
    int want = 1;
    for (int n = 1; n <= cfg.max_arity; ++n) {
        if (n > 1) want *= n - 1;
        std::map<int, int> h = homology_dims(lie(cfg.fld(), n).complex());
        rows.push_back({n, hom_json(h)});
        if (h != std::map<int, int>{{n - 1, want}}) rep.pass = false;
    }
    rep.witness = rows;
    return rep;
}

verification_report v_resolution(const run_config& cfg) {
    verification_report rep{"resolution", {{"max_arity", cfg.max_arity}, {"seed", cfg.seed}}};
    rep.pass = true;
    field f = cfg.fld();
    int cap = cfg.max_arity;
    for (const right_module& m :
         {com_module(f, cap), surjection_module(f, 2, cap), free_right_module(com_seq(f, cap))})
        if (!seq_is_levelwise_quasi_iso(bar_com(m).aug)) rep.pass = false;
    std::mt19937_64 rng(cfg.seed);
    for (int t = 0; t < 3; ++t) {
        right_module m = free_right_module(random_seq(f, cap, rng));
        if (!seq_is_levelwise_quasi_iso(bar_com(m).aug)) rep.pass = false;
    }
    // the unit module: levels above 1 must realize acyclically
    bar_com_result bu = bar_com(s1_module(f, cap));
    for (int n = 2; n <= cap; ++n)
        if (!is_acyclic(bu.mod.carrier.level(n).complex())) rep.pass = false;
    return rep;
}

verification_report v_free_stages(const run_config& cfg) {
    verification_report rep{"free-stages", {{"max_arity", cfg.max_arity}, {"seed", cfg.seed}}};
    rep.pass = true;
    field f = cfg.fld();
    int cap = cfg.max_arity;
    std::mt19937_64 rng(cfg.seed);
    sym_seq m0 = random_seq(f, cap, rng);
    right_module fm = free_right_module(m0);
    increasing_result fl = increasing_filtration(fm, cap);
    for (int n = 1; n <= cap; ++n)
        for (int l = 1; l <= cap; ++l) {
            int want = 0;
            for (int r = 1; r <= n; ++r)
                want += circle(embed_i_n(m0.level(r), r, cap), com_seq(f, cap))
                            .seq.level(l)
                            .complex()
                            .total_dim();
            if (fl.stages[n].f.carrier.level(l).complex().total_dim() != want) rep.pass = false;
        }
    for (int l = 1; l <= cap; ++l) {
        chain_map g = fl.stages[cap].g.level_map(l);
        for (int q : g.src.degrees())
            if (g.src.dim(q) != g.tgt.dim(q) || rank(g.component(q)) != g.src.dim(q))
                rep.pass = false;
    }
    return rep;
}

verification_report v_lie_layers(const run_config& cfg) {
    verification_report rep{"lie-layers", {{"max_arity", cfg.max_arity}}};
    rep.pass = true;
    field f = cfg.fld();
    increasing_result fl = increasing_filtration(bar_com(s1_module(f, cfg.max_arity)).mod,
                                                 cfg.max_arity);
    json rows = json::array();
    for (int n = 1; n <= cfg.max_arity; ++n) {
        increasing_layer_result lay = increasing_layer(fl, n);
        std::map<int, int> got = homology_dims(lay.mbar.complex());
        std::map<int, int> want = homology_dims(lie(f, n).complex());
        rows.push_back({n, hom_json(got)});
        if (got != want) rep.pass = false;
    }
    rep.witness = rows;
    return rep;
}

verification_report v_fat_diagonal(const run_config& cfg) {
    verification_report rep{"fat-diagonal", {{"max_arity", cfg.max_arity}}};
    rep.pass = true;
    field f = cfg.fld();
    int cap = cfg.max_arity;
    for (int km = 0; km < 2; ++km) {
        sset k = km == 0 ? discrete_plus(2) : delta_quotient(1);
        tensor_module_result t = tensor_com_module(k, f, cap);
        increasing_result fl = increasing_filtration(t.mod, cap);
        for (int n = 1; n <= cap; ++n) {
            increasing_layer_result lay = increasing_layer(fl, n);
            chain_complex oracle =
                n == 1 ? reduced_chains(k, f)
                       : reduced_chains(
                             quotient_sset(t.powers[n].space, distinct_filter(t.powers[n], n - 1))
                                 .space,
                             f);
            for (int q : oracle.degrees())
                if (lay.mbar.complex().dim(q) != oracle.dim(q)) rep.pass = false;
            if (homology_dims(lay.mbar.complex()) != homology_dims(oracle)) rep.pass = false;
        }
    }
    return rep;
}

verification_report v_tower_layers(const run_config& cfg) {
    verification_report rep{"tower-layers", {{"max_arity", cfg.max_arity}}};
    rep.pass = true;
    field f = cfg.fld();
    int cap = cfg.max_arity;
    chain_complex x(f);
    x.set_basis(0, {basis_label{"x", 1}});
    right_module com = com_module(f, cap);
    for (int which = 0; which < 2; ++which) {
        algebra i = which == 0 ? free_algebra(x, cap) : square_zero(x, cap);
        chain_complex tqc = tq(i);
        for (int n = 1; n <= cap; ++n) {
            filtered_bar_layer l = filtered_bar_decreasing(com, i, n);
            over_group_result og = over_group(com.carrier.level(n), tqc, cap);
            if (homology_dims(l.layer.complex) != homology_dims(og.complex)) rep.pass = false;
        }
    }
    return rep;
}

verification_report v_stabilization(const run_config& cfg) {
    verification_report rep{"stabilization",
                            {{"degree_bound", cfg.degree_bound}, {"max_k", cfg.max_k}}};
    rep.pass = true;
    field f = cfg.fld();
    chain_complex x(f);
    x.set_basis(0, {basis_label{"x", 1}});
    json rows = json::array();
    for (int which = 0; which < 2; ++which) {
        algebra i = which == 0 ? free_algebra(x, 2) : square_zero(x, 2);
        stable_tq_result st = stable_tq(i, cfg.degree_bound, cfg.max_k);
        std::map<int, int> hs = homology_dims(st.complex), ht;
        for (const auto& [q, h] : homology_dims(tq(i)))
            if (q <= st.stable_through) ht[q] = h;
        rows.push_back({which, st.witness, st.stable_through, hom_json(hs)});
        if (st.witness < 0 || st.witness > 3 || hs != ht) rep.pass = false;
    }
    rep.witness = rows;
    return rep;
}

verification_report v_tq_agreement(const run_config& cfg) {
    verification_report rep{"tq-agreement", {{"max_n", cfg.max_n}, {"k", cfg.k}}};
    rep.pass = true;
    field f = cfg.fld();
    json rows = json::array();
    for (const std::string& spec : {"free:0", "free:1", "sq0:0"}) {
        run_config c = cfg;
        c.algebra_spec = spec;
        tq_compare_report r = compare_tq_filtrations(make_algebra(c), cfg.max_n, cfg.k);
        json layers = json::array();
        for (int n = 1; n <= cfg.max_n; ++n)
            layers.push_back({n, hom_json(r.layer_bar[n]), hom_json(r.layer_sphere[n])});
        rows.push_back({spec, r.ok, r.detail, layers});
        if (!r.ok) rep.pass = false;
    }
    rep.witness = rows;
    return rep;
}

int cmd_verify(const run_config& cfg, const std::string& id) {
    using fn = verification_report (*)(const run_config&);
    const std::vector<std::pair<std::string, fn>> registry = {
        {"lie-ranks", v_lie_ranks},       {"resolution", v_resolution},
        {"free-stages", v_free_stages},   {"lie-layers", v_lie_layers},
        {"fat-diagonal", v_fat_diagonal}, {"tower-layers", v_tower_layers},
        {"stabilization", v_stabilization}, {"tq-agreement", v_tq_agreement},
    };
    std::vector<verification_report> reports;
    if (id == "all") {
        for (const auto& [name, f] : registry) reports.push_back(f(cfg));
    } else {
        bool found = false;
        for (const auto& [name, f] : registry)
            if (name == id) {
                reports.push_back(f(cfg));
                found = true;
            }
        if (!found) throw CLI::ValidationError("verify", "unknown check: " + id);
    }
    bool all_pass = true;
    json out = json::array();
    for (const verification_report& r : reports) {
        all_pass = all_pass && r.pass;
        if (cfg.json_out())
            out.push_back({{"id", r.id}, {"params", r.params}, {"pass", r.pass},
                           {"witness", r.witness}});
        else
            printf("%-14s %s\n", r.id.c_str(), r.pass ? "pass" : "FAIL");
    }
    if (cfg.json_out())
        printf("%s\n", json{{"schema_version", schema_version}, {"reports", out}}.dump(2).c_str());
    return all_pass ? 0 : 1;
}

// --- cache -------------------------------------------------------------------

int cmd_cache(const run_config& cfg, bool clear) {
    cache_config cc = cfg.cache();
    if (clear) {
        cache_clear(cc);
        printf("cleared %s\n", cc.dir.c_str());
        return 0;
    }
    for (const std::string& k : cache_entries(cc)) printf("%s\n", k.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    run_config cfg;
    CLI::App app{"exact operadic homological algebra at truncated arity"};
    app.require_subcommand(1);
    app.add_option("--field", cfg.field_name, "q | f2 | f3 | f5")
        ->envname("OPERADFORGE_FIELD");
    app.add_option("--max-arity", cfg.max_arity)->envname("OPERADFORGE_MAX_ARITY");
    app.add_option("--degree-bound", cfg.degree_bound)->envname("OPERADFORGE_DEGREE_BOUND");
    app.add_option("--sphere-model", cfg.sphere_model, "min | cube")
        ->envname("OPERADFORGE_SPHERE_MODEL");
    app.add_option("--cache-dir", cfg.cache_dir)->envname("OPERADFORGE_CACHE_DIR");
    app.add_option("--format", cfg.format, "table | json")->envname("OPERADFORGE_FORMAT");
    app.add_option("--seed", cfg.seed)->envname("OPERADFORGE_SEED");
    app.add_flag_callback("--serial", [] { set_serial(true); },
                          "force the serial reference kernels");

    CLI::App* lie_cmd = app.add_subcommand("lie", "homology table of the lie sequence");
    CLI::App* tq_cmd = app.add_subcommand("tq", "derived indecomposables of a small algebra");
    tq_cmd->add_option("--algebra", cfg.algebra_spec, "free:<deg> | sq0:<deg> | zero");
    CLI::App* stq_cmd = app.add_subcommand("stable-tq", "sphere-tensor stabilization");
    stq_cmd->add_option("--algebra", cfg.algebra_spec);
    stq_cmd->add_option("--max-k", cfg.max_k);
    CLI::App* tensor_cmd = app.add_subcommand("tensor", "chains of a smash power");
    tensor_cmd->add_option("--space", cfg.space, "s1 | s0 | set:<m> | sphere:<k>");
    tensor_cmd->add_option("--power", cfg.power);
    CLI::App* filt_cmd = app.add_subcommand("filtration", "per-layer homology tables");
    filt_cmd->add_option("--module", cfg.module_spec, "bar | com | tensor:<space>");
    filt_cmd->add_option("--direction", cfg.direction, "up | down");
    filt_cmd->add_option("--algebra", cfg.algebra_spec);
    filt_cmd->add_option("--max-n", cfg.max_n);
    CLI::App* cmp_cmd = app.add_subcommand("compare", "two filtrations of the indecomposables");
    cmp_cmd->add_option("--algebra", cfg.algebra_spec);
    cmp_cmd->add_option("--n-max", cfg.max_n);
    cmp_cmd->add_option("--k", cfg.k);
    CLI::App* ver_cmd = app.add_subcommand("verify", "run named checks; `all` for the suite");
    std::string verify_id = "all";
    ver_cmd->add_option("id", verify_id, "check name or all");
    ver_cmd->add_option("--n-max", cfg.max_n);
    ver_cmd->add_option("--k", cfg.k);
    ver_cmd->add_option("--max-k", cfg.max_k);
    CLI::App* cache_cmd = app.add_subcommand("cache", "list or clear the cache");
    bool cache_do_clear = false;
    cache_cmd->add_flag("--clear", cache_do_clear);

    CLI11_PARSE(app, argc, argv);
    try {
        if (lie_cmd->parsed()) return cmd_lie(cfg);
        if (tq_cmd->parsed()) return cmd_tq(cfg);
        if (stq_cmd->parsed()) return cmd_stable_tq(cfg);
        if (tensor_cmd->parsed()) return cmd_tensor(cfg);
        if (filt_cmd->parsed()) return cmd_filtration(cfg);
        if (cmp_cmd->parsed()) return cmd_compare(cfg);
        if (ver_cmd->parsed()) return cmd_verify(cfg, verify_id);
        if (cache_cmd->parsed()) return cmd_cache(cfg, cache_do_clear);
    } catch (const CLI::ValidationError& e) {
        fprintf(stderr, "%s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}

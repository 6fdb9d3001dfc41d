#include "operadforge/filtration.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace opf {

namespace {

sparse_matrix block_diag(const field& f, const sparse_matrix& a, const sparse_matrix& b) {
    sparse_matrix out(f, a.rows() + b.rows(), a.cols() + b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (const auto& [j, v] : a.row(i)) out.set(i, j, v);
    for (int i = 0; i < b.rows(); ++i)
        for (const auto& [j, v] : b.row(i)) out.set(a.rows() + i, a.cols() + j, v);
    return out;
}

std::vector<basis_label> quot_labels(const chain_complex& c, int q, const coker_presentation& ck) {
    std::vector<basis_label> labels;
    sparse_matrix sect_t = ck.section.transpose();
    for (int k = 0; k < ck.dim; ++k) {
        const auto& row = sect_t.row(k);
        if (row.size() == 1 && row.begin()->second.is_one())
            labels.push_back(c.labels(q)[row.begin()->first]);
        else
            labels.push_back(basis_label{"q" + std::to_string(k), 0});
    }
    return labels;
}

std::map<int, sparse_matrix> id_mats(const chain_complex& c) {
    std::map<int, sparse_matrix> out;
    for (int q : c.degrees())
        if (c.dim(q)) out.emplace(q, sparse_matrix::identity(c.fld(), c.dim(q)));
    return out;
}

std::vector<int> index_range(int lo, int hi) {
    std::vector<int> out;
    for (int i = lo; i < hi; ++i) out.push_back(i);
    return out;
}

}  // namespace

// --- decreasing filtration -------------------------------------------------

right_module decreasing_filtration(const right_module& m, int n) {
    const field& f = m.carrier.fld();
    int cap = m.carrier.max_arity();
    right_module out;
    out.carrier = sym_seq(f, cap);
    for (int r = n; r <= cap; ++r)
        if (r >= 1) out.carrier.set_level(r, m.carrier.level(r));
    for (const auto& [key, mats] : m.delta_reps)
        if (key[1] >= n) out.delta_reps.emplace(key, mats);
    return out;
}

sym_seq decreasing_layer(const right_module& m, int n) {
    return embed_i_n(m.carrier.level(n), n, m.carrier.max_arity());
}

seq_map decreasing_inclusion(const right_module& hi, const right_module& lo) {
    seq_map out{hi.carrier, lo.carrier, {}};
    for (int r = 1; r <= hi.carrier.max_arity(); ++r) {
        const chain_complex& c = hi.carrier.level(r).complex();
        if (lo.carrier.level(r).complex().total_dim() == 0) continue;
        for (int q : c.degrees())
            if (c.dim(q)) out.set_component(r, q, sparse_matrix::identity(c.fld(), c.dim(q)));
    }
    return out;
}

quotient_complex cofiber(const chain_map& f) {
    const chain_complex& c = f.tgt;
    quotient_complex out;
    out.complex = chain_complex(c.fld());
    for (int q : c.degrees()) {
        coker_presentation ck = cokernel_presentation(f.component(q));
        out.complex.set_basis(q, quot_labels(c, q, ck));
        out.proj[q] = ck.proj;
        out.section[q] = ck.section;
    }
    for (int q : c.degrees()) {
        auto pit = out.proj.find(q - 1);
        if (pit == out.proj.end()) continue;
        out.complex.set_differential(q, pit->second * c.d(q) * out.section.at(q));
    }
    out.complex.validate();
    return out;
}

chain_map bar_alg_map(const bar_alg_result& src, const bar_alg_result& tgt, const seq_map& f0) {
    int S = src.tower.s_top;
    std::vector<seq_map> fs(static_cast<size_t>(S + 1));
    fs[0] = f0;
    for (int s = 1; s <= S; ++s)
        fs[s] = circle_map(src.tower.w[s], tgt.tower.w[s], fs[s - 1],
                           seq_identity(src.tower.com));
    std::vector<std::map<int, sparse_matrix>> per_s(static_cast<size_t>(S + 1));
    for (int s = 0; s <= S; ++s) per_s[s] = ext_power_map(fs[s], src.ep[s], tgt.ep[s]);
    return chain_map{src.rl.total, tgt.rl.total, assemble_realized_map(src.rl, tgt.rl, per_s)};
}

filtered_bar_layer filtered_bar_decreasing(const right_module& m, const algebra& i, int n) {
    filtered_bar_layer out;
    right_module fh = decreasing_filtration(m, n);
    right_module fl = decreasing_filtration(m, n + 1);
    out.hi = bar_alg(fh, i);
    out.lo = bar_alg(fl, i);
    out.incl = bar_alg_map(out.lo, out.hi, decreasing_inclusion(fl, fh));
    out.layer = cofiber(out.incl);
    return out;
}

namespace {

// B(Com, Com, I) -> I: multiplication on the simplicial degree 0 part
chain_map bar_com_alg_aug(const bar_alg_result& b) {
    const algebra& i = b.i;
    const field& f = i.f;
    const ext_power_result& ep = b.ep[0];
    chain_map out{b.rl.total, i.carrier, {}};
    for (int q : ep.complex.degrees()) {
        auto off_it = b.rl.offset.find({0, q});
        if (off_it == b.rl.offset.end() || b.rl.ndim(0, q) == 0) continue;
        sparse_matrix blk(f, i.carrier.dim(q), ep.complex.dim(q));
        for (int r = ep.lo; r <= ep.hi; ++r) {
            const over_group_result& og = ep.parts[r];
            if (og.complex.dim(q) == 0) continue;
            std::map<int, sparse_matrix> mus = i.mu(r);
            auto muit = mus.find(q);
            if (muit == mus.end()) continue;
            // the Com(r) factor is one dimensional in degree 0, so the
            // pre-quotient coordinates are the bare tensor power coordinates
            sparse_matrix part = muit->second * og.section.at(q);
            int coff = ep.offset[r].at(q);
            for (int rw = 0; rw < part.rows(); ++rw)
                for (const auto& [j, v] : part.row(rw)) blk.add_to(rw, coff + j, v);
        }
        sparse_matrix comp_n = blk * b.rl.nsect[0].at(q);
        if (comp_n.is_zero()) continue;
        sparse_matrix comp(f, i.carrier.dim(q), b.rl.total.dim(q));
        for (int rw = 0; rw < comp_n.rows(); ++rw)
            for (const auto& [j, v] : comp_n.row(rw)) comp.add_to(rw, off_it->second + j, v);
        out.set_component(q, comp);
    }
    return out;
}

}  // namespace

tower_result augmentation_ideal_tower(const algebra& i, int n_max) {
    right_module com = com_module(i.f, i.cap);
    tower_result out;
    std::vector<bar_alg_result> b(static_cast<size_t>(n_max + 1));
    std::vector<right_module> fs(static_cast<size_t>(n_max + 2));
    for (int n = 1; n <= n_max + 1; ++n) fs[n] = decreasing_filtration(com, n);
    for (int n = 1; n <= n_max; ++n) {
        b[n] = bar_alg(fs[n], i);
        out.stages.push_back(b[n].rl.total);
    }
    for (int n = 1; n < n_max; ++n)
        out.maps.push_back(bar_alg_map(b[n + 1], b[n], decreasing_inclusion(fs[n + 1], fs[n])));
    out.aug = bar_com_alg_aug(b[1]);
    return out;
}

quotient_tower_result tower_quotient(const right_module& m, const algebra& i, int n_max) {
    quotient_tower_result out;
    bar_alg_result full = bar_alg(m, i);
    out.full = full.rl.total;
    for (int n = 1; n <= n_max; ++n) {
        right_module sub = decreasing_filtration(m, n + 1);
        bar_alg_result bs = bar_alg(sub, i);
        chain_map incl = bar_alg_map(bs, full, decreasing_inclusion(sub, m));
        out.stages.push_back(cofiber(incl));
    }
    for (int n = 1; n < n_max; ++n) {
        const quotient_complex& hi = out.stages[static_cast<size_t>(n)];      // p_{n+1}
        const quotient_complex& lo = out.stages[static_cast<size_t>(n - 1)];  // p_n
        chain_map f{hi.complex, lo.complex, {}};
        for (int q : hi.complex.degrees()) {
            auto pit = lo.proj.find(q);
            auto sit = hi.section.find(q);
            if (pit == lo.proj.end() || sit == hi.section.end()) continue;
            sparse_matrix c = pit->second * sit->second;
            if (!c.is_zero()) f.set_component(q, c);
        }
        out.maps.push_back(std::move(f));
    }
    return out;
}

// --- increasing filtration -------------------------------------------------

seq_map free_counit(const circle_product& cp, int n, const right_module& nmod,
                    const std::map<int, sparse_matrix>& iota) {
    const field& f = cp.seq.fld();
    int cap = cp.seq.max_arity();
    seq_map out{cp.seq, nmod.carrier, {}};
    for (int l = 1; l <= cap; ++l) {
        const basis_table& tab = cp.levels[static_cast<size_t>(l)];
        if (tab.size() == 0) continue;
        for (int q : tab.degrees()) {
            int dl = nmod.carrier.level(l).complex().dim(q);
            if (dl == 0) continue;
            sparse_matrix mat(f, dl, tab.dim(q));
            std::map<int, sparse_matrix> comp_cache;  // phi -> delta * iota
            for (int id : tab.ids(q)) {
                circle_key k = circle_key::decode(tab.key(id));
                auto it = comp_cache.find(k.phi);
                if (it == comp_cache.end()) {
                    auto io = iota.find(q);
                    sparse_matrix c =
                        io == iota.end()
                            ? sparse_matrix(f, dl, 0)
                            : nmod.delta_rep(l, n, k.phi, q) * io->second;
                    it = comp_cache.emplace(k.phi, std::move(c)).first;
                }
                const sparse_matrix& c = it->second;
                if (c.cols() == 0) continue;
                int col = tab.pos(id);
                for (int rw = 0; rw < c.rows(); ++rw)
                    for (const auto& [j, v] : c.row(rw))
                        if (j == k.m_idx) mat.add_to(rw, col, v);
            }
            if (!mat.is_zero()) out.set_component(l, q, mat);
        }
    }
    return out;
}

increasing_result increasing_filtration(const right_module& m, int n_max) {
    const field& f = m.carrier.fld();
    int cap = m.carrier.max_arity();
    sym_seq com = com_seq(f, cap);
    increasing_result out;
    out.base = m;
    out.stages.resize(static_cast<size_t>(n_max + 1));
    increasing_stage& z = out.stages[0];
    z.f.carrier = sym_seq(f, cap);
    z.g = seq_map{z.f.carrier, m.carrier, {}};
    z.from_prev = seq_map{z.f.carrier, z.f.carrier, {}};
    for (int n = 1; n <= n_max; ++n) {
        increasing_stage& prev = out.stages[static_cast<size_t>(n - 1)];
        increasing_stage& st = out.stages[static_cast<size_t>(n)];
        const equivariant_complex& x = m.carrier.level(n);
        const equivariant_complex& y = prev.f.carrier.level(n);
        st.free_part = circle(embed_i_n(x, n, cap), com);
        circle_product cpy = circle(embed_i_n(y, n, cap), com);
        right_module fm = free_module_structure(st.free_part);
        right_module sum = direct_sum_modules(fm, prev.f);
        // the two legs out of the pushout corner i_n((F_{n-1}M)(n)) o Com
        seq_map gmap{cpy.m_factor, st.free_part.m_factor, {}};
        for (int q : y.complex().degrees()) {
            sparse_matrix c = prev.g.component(n, q);
            if (!c.is_zero()) gmap.set_component(n, q, c);
        }
        seq_map a = circle_map(cpy, st.free_part, gmap, seq_identity(com));
        seq_map b = free_counit(cpy, n, prev.f, id_mats(y.complex()));
        seq_map d0{cpy.seq, sum.carrier, {}}, d1{cpy.seq, sum.carrier, {}};
        for (int l = 1; l <= cap; ++l) {
            for (int q : cpy.seq.level(l).complex().degrees()) {
                int cols = cpy.seq.level(l).complex().dim(q);
                if (cols == 0) continue;
                int top = st.free_part.seq.level(l).complex().dim(q);
                int bot = prev.f.carrier.level(l).complex().dim(q);
                sparse_matrix m0 = a.component(l, q).vcat(sparse_matrix(f, bot, cols));
                sparse_matrix m1 = sparse_matrix(f, top, cols).vcat(b.component(l, q));
                if (!m0.is_zero()) d0.set_component(l, q, m0);
                if (!m1.is_zero()) d1.set_component(l, q, m1);
            }
        }
        seq_quotient qt = coequalize(d0, d1);
        st.proj = qt.proj;
        st.section = qt.section;
        st.f.carrier = qt.seq;
        for (const auto& [key, mats] : sum.delta_reps) {
            std::map<int, sparse_matrix> dm;
            for (const auto& [q, mat] : mats) {
                auto pit = st.proj[static_cast<size_t>(key[0])].find(q);
                auto sit = st.section[static_cast<size_t>(key[1])].find(q);
                if (pit == st.proj[static_cast<size_t>(key[0])].end() ||
                    sit == st.section[static_cast<size_t>(key[1])].end())
                    continue;
                sparse_matrix d = pit->second * mat * sit->second;
                if (!d.is_zero()) dm.emplace(q, std::move(d));
            }
            if (!dm.empty()) st.f.set_delta(key[0], key[1], key[2], std::move(dm));
        }
        // g_n, f_{n-1} and the free leg, descended from the direct sum
        seq_map em = free_counit(st.free_part, n, m, id_mats(x.complex()));
        st.g = seq_map{st.f.carrier, m.carrier, {}};
        st.from_prev = seq_map{prev.f.carrier, st.f.carrier, {}};
        st.from_free = seq_map{st.free_part.seq, st.f.carrier, {}};
        for (int l = 1; l <= cap; ++l) {
            for (int q : sum.carrier.level(l).complex().degrees()) {
                int top = st.free_part.seq.level(l).complex().dim(q);
                int bot = prev.f.carrier.level(l).complex().dim(q);
                if (top + bot == 0) continue;
                sparse_matrix gsum = em.component(l, q).hcat(prev.g.component(l, q));
                // well-definedness: g must agree on the identified corner
                sparse_matrix diff =
                    gsum * (d0.component(l, q) - d1.component(l, q));
                if (!diff.is_zero())
                    throw std::runtime_error("increasing_filtration: pushout legs disagree");
                const sparse_matrix& pr = st.proj[static_cast<size_t>(l)].at(q);
                const sparse_matrix& se = st.section[static_cast<size_t>(l)].at(q);
                sparse_matrix gc = gsum * se;
                if (!gc.is_zero()) st.g.set_component(l, q, gc);
                if (bot) {
                    sparse_matrix fp = pr.select_cols(index_range(top, top + bot));
                    if (!fp.is_zero()) st.from_prev.set_component(l, q, fp);
                }
                if (top) {
                    sparse_matrix ff = pr.select_cols(index_range(0, top));
                    if (!ff.is_zero()) st.from_free.set_component(l, q, ff);
                }
            }
        }
        // tower compatibility g_n f_{n-1} = g_{n-1}
        seq_map chk = seq_compose(st.g, st.from_prev);
        for (int l = 1; l <= cap; ++l)
            for (int q : prev.f.carrier.level(l).complex().degrees())
                if (chk.component(l, q) != prev.g.component(l, q))
                    throw std::runtime_error("increasing_filtration: tower square fails");
    }
    return out;
}

std::vector<seq_map> increasing_stage_maps(const increasing_result& src,
                                           const increasing_result& tgt, const seq_map& f) {
    const field& fl = src.base.carrier.fld();
    int cap = src.base.carrier.max_arity();
    int n_max = static_cast<int>(src.stages.size()) - 1;
    if (static_cast<int>(tgt.stages.size()) - 1 < n_max)
        throw std::invalid_argument("increasing_stage_maps: target filtration too short");
    sym_seq com = com_seq(fl, cap);
    std::vector<seq_map> out(static_cast<size_t>(n_max + 1));
    out[0] = seq_map{src.stages[0].f.carrier, tgt.stages[0].f.carrier, {}};
    for (int n = 1; n <= n_max; ++n) {
        const increasing_stage& ss = src.stages[static_cast<size_t>(n)];
        const increasing_stage& ts = tgt.stages[static_cast<size_t>(n)];
        seq_map lev{ss.free_part.m_factor, ts.free_part.m_factor, {}};
        for (int q : src.base.carrier.level(n).complex().degrees()) {
            sparse_matrix c = f.component(n, q);
            if (!c.is_zero()) lev.set_component(n, q, c);
        }
        seq_map ff = circle_map(ss.free_part, ts.free_part, lev, seq_identity(com));
        seq_map& pm = out[static_cast<size_t>(n - 1)];
        seq_map cur{ss.f.carrier, ts.f.carrier, {}};
        for (int l = 1; l <= cap; ++l) {
            for (int q : ss.f.carrier.level(l).complex().degrees()) {
                auto pit = ts.proj[static_cast<size_t>(l)].find(q);
                auto sit = ss.section[static_cast<size_t>(l)].find(q);
                if (pit == ts.proj[static_cast<size_t>(l)].end() ||
                    sit == ss.section[static_cast<size_t>(l)].end())
                    continue;
                sparse_matrix blk = block_diag(fl, ff.component(l, q), pm.component(l, q));
                sparse_matrix c = pit->second * blk * sit->second;
                if (!c.is_zero()) cur.set_component(l, q, c);
            }
        }
        out[static_cast<size_t>(n)] = std::move(cur);
    }
    return out;
}

increasing_layer_result increasing_layer(const increasing_result& fl, int n) {
    const right_module& m = fl.base;
    const field& f = m.carrier.fld();
    int cap = m.carrier.max_arity();
    const increasing_stage& prev = fl.stages[static_cast<size_t>(n - 1)];
    const increasing_stage& st = fl.stages[static_cast<size_t>(n)];
    const equivariant_complex& x = m.carrier.level(n);
    for (int q : prev.f.carrier.level(n).complex().degrees()) {
        sparse_matrix c = prev.g.component(n, q);
        if (rank(c) != c.cols())
            throw std::runtime_error(
                "increasing_layer: stage map not injective at level " + std::to_string(n) +
                ", signals non-cellular input");
    }
    increasing_layer_result out;
    chain_complex bc(f);
    for (int q : x.complex().degrees()) {
        coker_presentation ck = cokernel_presentation(prev.g.component(n, q));
        bc.set_basis(q, quot_labels(x.complex(), q, ck));
        out.mproj[q] = ck.proj;
        out.msect[q] = ck.section;
    }
    for (int q : x.complex().degrees()) {
        auto pit = out.mproj.find(q - 1);
        if (pit == out.mproj.end()) continue;
        sparse_matrix d = pit->second * x.complex().d(q) * out.msect.at(q);
        if (!d.is_zero()) bc.set_differential(q, d);
    }
    equivariant_complex mb(std::move(bc), n);
    for (int q : x.complex().degrees())
        for (int i = 0; i + 1 < n; ++i)
            mb.set_generator(q, i, out.mproj.at(q) * x.generator(q, i) * out.msect.at(q));
    mb.validate();
    out.mbar = std::move(mb);
    out.fbar_part = circle(embed_i_n(out.mbar, n, cap), com_seq(f, cap));
    out.fbar = free_module_structure(out.fbar_part);
    seq_map zero{prev.f.carrier, st.f.carrier, {}};
    out.coker = coequalize(st.from_prev, zero);
    seq_map smap{out.fbar_part.m_factor, st.free_part.m_factor, {}};
    for (const auto& [q, s] : out.msect) smap.set_component(n, q, s);
    seq_map csect = circle_map(out.fbar_part, st.free_part, smap, seq_identity(com_seq(f, cap)));
    out.iso = seq_map{out.fbar.carrier, out.coker.seq, {}};
    for (int l = 1; l <= cap; ++l) {
        for (int q : out.fbar.carrier.level(l).complex().degrees()) {
            auto pit = out.coker.proj[static_cast<size_t>(l)].find(q);
            if (pit == out.coker.proj[static_cast<size_t>(l)].end()) continue;
            sparse_matrix c =
                pit->second * st.from_free.component(l, q) * csect.component(l, q);
            if (!c.is_zero()) out.iso.set_component(l, q, c);
        }
    }
    if (!out.iso.is_chain_map() || !seq_is_iso(out.iso))
        throw std::runtime_error("increasing_layer: layer identification failed");
    return out;
}

increasing_layer_alg_result module_layer_alg(const increasing_result& fl, const algebra& i,
                                             int n) {
    int cap = fl.base.carrier.max_arity();
    const increasing_stage& prev = fl.stages[static_cast<size_t>(n - 1)];
    const increasing_stage& st = fl.stages[static_cast<size_t>(n)];
    increasing_layer_alg_result out;
    out.lo = relative_circle_alg(prev.f, i);
    out.hi = relative_circle_alg(st.f, i);
    ext_power_result eplo = ext_power(prev.f.carrier, i.carrier, cap);
    ext_power_result ephi = ext_power(st.f.carrier, i.carrier, cap);
    std::map<int, sparse_matrix> em = ext_power_map(st.from_prev, eplo, ephi);
    chain_map gamma{out.lo.complex, out.hi.complex, {}};
    for (int q : out.lo.complex.degrees()) {
        auto eit = em.find(q);
        auto pit = out.hi.proj.find(q);
        auto sit = out.lo.section.find(q);
        if (eit == em.end() || pit == out.hi.proj.end() || sit == out.lo.section.end()) continue;
        sparse_matrix c = pit->second * eit->second * sit->second;
        if (!c.is_zero()) gamma.set_component(q, c);
    }
    out.gamma = std::move(gamma);
    out.layer = cofiber(out.gamma);
    return out;
}

increasing_layer_alg_result filtered_bar_increasing(const right_module& m, const algebra& i,
                                                    int n) {
    bar_com_result bc = bar_com(m);
    increasing_result fl = increasing_filtration(bc.mod, n);
    return module_layer_alg(fl, i, n);
}

// --- filtration comparison -------------------------------------------------

namespace {

bool injective_everywhere(const chain_map& f) {
    for (int q : f.src.degrees()) {
        sparse_matrix c = f.component(q);
        if (rank(c) != c.cols()) return false;
    }
    return true;
}

}  // namespace

compare_report compare_filtrations(const increasing_result& src, const increasing_result& tgt,
                                   const seq_map& f, const algebra& i, int n_max) {
    compare_report rep;
    int cap = src.base.carrier.max_arity();
    auto fail = [&](const std::string& s) {
        rep.ok = false;
        if (rep.detail.empty()) rep.detail = s;
    };
    std::vector<seq_map> fs = increasing_stage_maps(src, tgt, f);
    rep.layer_src.resize(static_cast<size_t>(n_max + 1));
    rep.layer_tgt.resize(static_cast<size_t>(n_max + 1));
    std::vector<ext_power_result> eps(static_cast<size_t>(n_max + 1)),
        ept(static_cast<size_t>(n_max + 1));
    for (int n = 0; n <= n_max; ++n) {
        eps[static_cast<size_t>(n)] =
            ext_power(src.stages[static_cast<size_t>(n)].f.carrier, i.carrier, cap);
        ept[static_cast<size_t>(n)] =
            ext_power(tgt.stages[static_cast<size_t>(n)].f.carrier, i.carrier, cap);
    }
    for (int n = 1; n <= n_max; ++n) {
        for (int l = 1; l <= cap; ++l)
            if (!is_quasi_iso(fs[static_cast<size_t>(n)].level_map(l))) {
                fail("stage " + std::to_string(n) + " fails to be a quasi-iso at level " +
                     std::to_string(l));
                break;
            }
        increasing_layer_alg_result la = module_layer_alg(src, i, n);
        increasing_layer_alg_result lb = module_layer_alg(tgt, i, n);
        rep.layer_src[static_cast<size_t>(n)] = homology_dims(la.layer.complex);
        rep.layer_tgt[static_cast<size_t>(n)] = homology_dims(lb.layer.complex);
        auto descend = [&](const quotient_complex& qa, const quotient_complex& qb, int k) {
            std::map<int, sparse_matrix> em =
                ext_power_map(fs[static_cast<size_t>(k)], eps[static_cast<size_t>(k)],
                              ept[static_cast<size_t>(k)]);
            chain_map out{qa.complex, qb.complex, {}};
            for (int q : qa.complex.degrees()) {
                auto eit = em.find(q);
                auto pit = qb.proj.find(q);
                auto sit = qa.section.find(q);
                if (eit == em.end() || pit == qb.proj.end() || sit == qa.section.end()) continue;
                sparse_matrix c = pit->second * eit->second * sit->second;
                if (!c.is_zero()) out.set_component(q, c);
            }
            return out;
        };
        chain_map phi_hi = descend(la.hi, lb.hi, n);
        chain_map phi_lo = descend(la.lo, lb.lo, n - 1);
        chain_map lm{la.layer.complex, lb.layer.complex, {}};
        for (int q : la.layer.complex.degrees()) {
            auto pit = lb.layer.proj.find(q);
            auto sit = la.layer.section.find(q);
            if (pit == lb.layer.proj.end() || sit == la.layer.section.end()) continue;
            sparse_matrix c = pit->second * phi_hi.component(q) * sit->second;
            if (!c.is_zero()) lm.set_component(q, c);
        }
        if (!lm.is_chain_map()) {
            fail("layer map at n = " + std::to_string(n) + " is not a chain map");
            continue;
        }
        if (!is_quasi_iso(lm)) {
            fail("layer map at n = " + std::to_string(n) + " is not a quasi-iso");
            continue;
        }
        if (!injective_everywhere(la.gamma) || !injective_everywhere(lb.gamma)) {
            fail("layer sequence at n = " + std::to_string(n) + " is not degreewise exact");
            continue;
        }
        chain_map pa{la.hi.complex, la.layer.complex, {}};
        for (const auto& [q, p] : la.layer.proj) pa.set_component(q, p);
        chain_map pb{lb.hi.complex, lb.layer.complex, {}};
        for (const auto& [q, p] : lb.layer.proj) pb.set_component(q, p);
        for (int q : la.layer.complex.degrees()) {
            sparse_matrix ds = connecting_map(la.gamma, pa, q);
            sparse_matrix dt = connecting_map(lb.gamma, pb, q);
            if (dt * induced_map(lm, q) != induced_map(phi_lo, q - 1) * ds)
                fail("connecting square at n = " + std::to_string(n) + ", degree " +
                     std::to_string(q) + " fails");
        }
    }
    return rep;
}

namespace {

// rel[n] = F_n M o_Com I with the stage inclusions, plus the maps into the
// top stage
struct stage_alg {
    std::vector<quotient_complex> rel;
    std::vector<ext_power_result> ep;
    std::vector<chain_map> gam;  // rel[n-1] -> rel[n]
    std::vector<chain_map> top;  // rel[n] -> rel[n_max]
};

stage_alg build_stage_alg(const increasing_result& fl, const algebra& i) {
    int cap = fl.base.carrier.max_arity();
    int n_max = static_cast<int>(fl.stages.size()) - 1;
    stage_alg out;
    out.rel.resize(static_cast<size_t>(n_max + 1));
    out.ep.resize(static_cast<size_t>(n_max + 1));
    out.gam.resize(static_cast<size_t>(n_max + 1));
    out.top.resize(static_cast<size_t>(n_max + 1));
    for (int n = 0; n <= n_max; ++n) {
        out.rel[static_cast<size_t>(n)] =
            relative_circle_alg(fl.stages[static_cast<size_t>(n)].f, i);
        out.ep[static_cast<size_t>(n)] =
            ext_power(fl.stages[static_cast<size_t>(n)].f.carrier, i.carrier, cap);
    }
    for (int n = 1; n <= n_max; ++n) {
        const quotient_complex& lo = out.rel[static_cast<size_t>(n - 1)];
        const quotient_complex& hi = out.rel[static_cast<size_t>(n)];
        std::map<int, sparse_matrix> em =
            ext_power_map(fl.stages[static_cast<size_t>(n)].from_prev,
                          out.ep[static_cast<size_t>(n - 1)], out.ep[static_cast<size_t>(n)]);
        chain_map g{lo.complex, hi.complex, {}};
        for (int q : lo.complex.degrees()) {
            auto eit = em.find(q);
            auto pit = hi.proj.find(q);
            auto sit = lo.section.find(q);
            if (eit == em.end() || pit == hi.proj.end() || sit == lo.section.end()) continue;
            sparse_matrix c = pit->second * eit->second * sit->second;
            if (!c.is_zero()) g.set_component(q, c);
        }
        out.gam[static_cast<size_t>(n)] = std::move(g);
    }
    out.top[static_cast<size_t>(n_max)] =
        identity_map(out.rel[static_cast<size_t>(n_max)].complex);
    for (int n = n_max - 1; n >= 0; --n)
        out.top[static_cast<size_t>(n)] =
            compose(out.top[static_cast<size_t>(n + 1)], out.gam[static_cast<size_t>(n + 1)]);
    return out;
}

// rel_a[na] -> rel_b[nb] induced by a stage map of the filtrations
chain_map descend_stage_map(const stage_alg& a, int na, const stage_alg& b, int nb,
                            const seq_map& f) {
    const quotient_complex& qa = a.rel[static_cast<size_t>(na)];
    const quotient_complex& qb = b.rel[static_cast<size_t>(nb)];
    std::map<int, sparse_matrix> em =
        ext_power_map(f, a.ep[static_cast<size_t>(na)], b.ep[static_cast<size_t>(nb)]);
    chain_map out{qa.complex, qb.complex, {}};
    for (int q : qa.complex.degrees()) {
        auto eit = em.find(q);
        auto pit = qb.proj.find(q);
        auto sit = qa.section.find(q);
        if (eit == em.end() || pit == qb.proj.end() || sit == qa.section.end()) continue;
        sparse_matrix c = pit->second * eit->second * sit->second;
        if (!c.is_zero()) out.set_component(q, c);
    }
    return out;
}

}  // namespace

tq_compare_report compare_tq_filtrations(const algebra& i, int n_max, int k) {
    const field& f = i.f;
    int cap = i.cap;
    tq_compare_report rep;
    rep.layer_bar.resize(static_cast<size_t>(n_max + 1));
    rep.layer_sphere.resize(static_cast<size_t>(n_max + 1));
    rep.window.assign(static_cast<size_t>(n_max + 1), -1);
    auto fail = [&](const std::string& s) {
        rep.ok = false;
        if (rep.detail.empty()) rep.detail = s;
    };
    // connectivity of the coefficients: strict coinvariants on the sphere
    // side add classes from degree n gmin + 2 on, so layers are compared
    // below that line
    int gmin = 0;
    for (int q = i.carrier.min_degree(); q <= i.carrier.max_degree(); ++q)
        if (i.carrier.dim(q)) { gmin = q; break; }
    right_module s1 = s1_module(f, cap);
    bar_com_result bc = bar_com(s1);
    tensor_module_result tm = tensor_com_module(sphere(k, false), f, cap);
    right_module mb = shift_module(tm.mod, -k);
    increasing_result fa = increasing_filtration(bc.mod, n_max);
    increasing_result fb = increasing_filtration(mb, n_max);
    increasing_result fu = increasing_filtration(s1, n_max);
    // the comparison maps into S(1): the bar augmentation, and the collapse
    // of the de-suspended sphere module onto its arity 1 level
    seq_map qb{mb.carrier, s1.carrier, {}};
    qb.set_component(1, 0, sparse_matrix::identity(f, 1));
    std::vector<seq_map> ga = increasing_stage_maps(fa, fu, bc.aug);
    std::vector<seq_map> gb = increasing_stage_maps(fb, fu, qb);
    stage_alg sa = build_stage_alg(fa, i);
    stage_alg sb = build_stage_alg(fb, i);
    stage_alg su = build_stage_alg(fu, i);
    for (int n = 1; n <= n_max; ++n) {
        quotient_complex layer_a = cofiber(sa.gam[static_cast<size_t>(n)]);
        quotient_complex layer_b = cofiber(sb.gam[static_cast<size_t>(n)]);
        rep.layer_bar[static_cast<size_t>(n)] = homology_dims(layer_a.complex);
        rep.layer_sphere[static_cast<size_t>(n)] = homology_dims(layer_b.complex);
        int win = n == 1 ? 1 << 20 : n * gmin + 1;
        rep.window[static_cast<size_t>(n)] = win;
        for (const auto& [d, h] : rep.layer_bar[static_cast<size_t>(n)])
            if (d <= win && rep.layer_sphere[static_cast<size_t>(n)].count(d) == 0)
                fail("layer " + std::to_string(n) + " homology mismatch in degree " +
                     std::to_string(d));
        for (const auto& [d, h] : rep.layer_sphere[static_cast<size_t>(n)]) {
            if (d > win) continue;
            auto it = rep.layer_bar[static_cast<size_t>(n)].find(d);
            if (it == rep.layer_bar[static_cast<size_t>(n)].end() || it->second != h)
                fail("layer " + std::to_string(n) + " homology mismatch in degree " +
                     std::to_string(d));
        }
        // induced filtration of the total homology, compared in the stable
        // window of the top stage (the arity >= 2 part of the sphere side
        // carries strict-coinvariant classes from degree 2 gmin + 2 up)
        int twin = std::min(win, 2 * gmin + 1);
        for (int d = 0; d <= twin && d <= sa.rel.back().complex.max_degree(); ++d) {
            int ra = rank(induced_map(sa.top[static_cast<size_t>(n)], d));
            int rb = rank(induced_map(sb.top[static_cast<size_t>(n)], d));
            if (ra != rb)
                fail("filtration image at n = " + std::to_string(n) + ", degree " +
                     std::to_string(d) + ": " + std::to_string(ra) + " vs " + std::to_string(rb));
        }
        // naturality of the stage inclusions under the comparison maps
        chain_map pa_n = descend_stage_map(sa, n, su, n, ga[static_cast<size_t>(n)]);
        chain_map pa_p = descend_stage_map(sa, n - 1, su, n - 1, ga[static_cast<size_t>(n - 1)]);
        chain_map pb_n = descend_stage_map(sb, n, su, n, gb[static_cast<size_t>(n)]);
        chain_map pb_p = descend_stage_map(sb, n - 1, su, n - 1, gb[static_cast<size_t>(n - 1)]);
        for (int q : sa.rel[static_cast<size_t>(n - 1)].complex.degrees())
            if (su.gam[static_cast<size_t>(n)].component(q) * pa_p.component(q) !=
                pa_n.component(q) * sa.gam[static_cast<size_t>(n)].component(q))
                fail("bar-side comparison square at n = " + std::to_string(n) + " fails");
        for (int q : sb.rel[static_cast<size_t>(n - 1)].complex.degrees())
            if (su.gam[static_cast<size_t>(n)].component(q) * pb_p.component(q) !=
                pb_n.component(q) * sb.gam[static_cast<size_t>(n)].component(q))
                fail("sphere-side comparison square at n = " + std::to_string(n) + " fails");
        // splicing of the connecting maps on each side
        for (int side = 0; side < 2; ++side) {
            const stage_alg& s = side == 0 ? sa : sb;
            const quotient_complex& layer = side == 0 ? layer_a : layer_b;
            const chain_map& gam = s.gam[static_cast<size_t>(n)];
            if (!injective_everywhere(gam)) {
                fail("stage inclusion at n = " + std::to_string(n) + " not injective");
                continue;
            }
            chain_map p{s.rel[static_cast<size_t>(n)].complex, layer.complex, {}};
            for (const auto& [q, pr] : layer.proj) p.set_component(q, pr);
            for (int q : layer.complex.degrees()) {
                if (q > win + 1) continue;
                sparse_matrix dl = connecting_map(gam, p, q);
                int hl = homology_dim(layer.complex, q);
                int hlo = homology_dim(s.rel[static_cast<size_t>(n - 1)].complex, q - 1);
                int hhi = homology_dim(s.rel[static_cast<size_t>(n)].complex, q);
                int rp = rank(induced_map(p, q));
                int rg = rank(induced_map(gam, q));
                // exactness at the layer and the middle spot
                if (rank(dl) != hl - rp)
                    fail("connecting rank at n = " + std::to_string(n) + ", degree " +
                         std::to_string(q) + " fails");
                if (rp + rg != hhi)
                    fail("middle exactness at n = " + std::to_string(n) + ", degree " +
                         std::to_string(q) + " fails");
                (void)hlo;
            }
        }
    }
    return rep;
}

}  // namespace opf

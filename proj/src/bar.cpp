#include "operadforge/bar.hpp"

#include <mutex>
#include <stdexcept>

namespace opf {

// --- simplicial machinery --------------------------------------------------

bool check_simplicial(const simplicial_data& sd) {
    int S = sd.top();
    for (int s = 2; s <= S; ++s)
        for (int i = 0; i < static_cast<int>(sd.face[s].size()); ++i)
            for (int j = i + 1; j < static_cast<int>(sd.face[s].size()); ++j)
                for (int q : sd.c[s].degrees())
                    if (sd.face[s - 1][i].component(q) * sd.face[s][j].component(q) !=
                        sd.face[s - 1][j - 1].component(q) * sd.face[s][i].component(q))
                        return false;
    for (int s = 0; s + 1 < S; ++s)
        for (int i = 0; i <= s; ++i)
            for (int j = i; j <= s; ++j)
                for (int q : sd.c[s].degrees())
                    if (sd.degen[s + 1][j + 1].component(q) * sd.degen[s][i].component(q) !=
                        sd.degen[s + 1][i].component(q) * sd.degen[s][j].component(q))
                        return false;
    for (int s = 0; s < S; ++s)
        for (int j = 0; j <= s; ++j)
            for (int i = 0; i <= s + 1; ++i)
                for (int q : sd.c[s].degrees()) {
                    sparse_matrix lhs = sd.face[s + 1][i].component(q) * sd.degen[s][j].component(q);
                    sparse_matrix rhs(sd.c[s].fld(), sd.c[s].dim(q), sd.c[s].dim(q));
                    if (i == j || i == j + 1)
                        rhs = sparse_matrix::identity(sd.c[s].fld(), sd.c[s].dim(q));
                    else if (i < j)
                        rhs = sd.degen[s - 1][j - 1].component(q) * sd.face[s][i].component(q);
                    else
                        rhs = sd.degen[s - 1][j].component(q) * sd.face[s][i - 1].component(q);
                    if (lhs != rhs) return false;
                }
    return true;
}

int realized::ndim(int s, int q) const {
    if (s < 0 || s >= static_cast<int>(nproj.size())) return 0;
    auto it = nproj[s].find(q);
    return it == nproj[s].end() ? 0 : it->second.rows();
}

realized realize(const simplicial_data& sd) {
    const field& f = sd.c[0].fld();
    int S = sd.top();
    realized out;
    out.nproj.resize(static_cast<size_t>(S + 1));
    out.nsect.resize(static_cast<size_t>(S + 1));
    for (int s = 0; s <= S; ++s) {
        for (int q : sd.c[s].degrees()) {
            int dim = sd.c[s].dim(q);
            if (s == 0) {
                out.nproj[0][q] = sparse_matrix::identity(f, dim);
                out.nsect[0][q] = sparse_matrix::identity(f, dim);
                continue;
            }
            sparse_matrix stacked(f, dim, 0);
            for (const auto& dg : sd.degen[s - 1]) stacked = stacked.hcat(dg.component(q));
            coker_presentation ck = cokernel_presentation(stacked);
            out.nproj[s][q] = ck.proj;
            out.nsect[s][q] = ck.section;
        }
    }
    // labels and block offsets
    chain_complex total(f);
    std::map<int, std::vector<basis_label>> labels;
    for (int s = 0; s <= S; ++s)
        for (const auto& [q, proj] : out.nproj[s]) {
            if (proj.rows() == 0) continue;
            out.offset[{s, q}] = static_cast<int>(labels[q + s].size());
            sparse_matrix sect_t = out.nsect[s].at(q).transpose();
            for (int k = 0; k < proj.rows(); ++k) {
                const auto& row = sect_t.row(k);
                basis_label l;
                if (row.size() == 1 && row.begin()->second.is_one())
                    l = sd.c[s].labels(q)[row.begin()->first];
                else
                    l.name = "q" + std::to_string(q) + "." + std::to_string(k);
                l.name = "s" + std::to_string(s) + "." + l.name;
                labels[q + s].push_back(std::move(l));
            }
        }
    for (auto& [t, ls] : labels) total.set_basis(t, std::move(ls));
    for (int t : total.degrees()) {
        sparse_matrix d(f, total.dim(t - 1), total.dim(t));
        for (int s = 0; s <= S; ++s) {
            int q = t - s;
            int nd = out.ndim(s, q);
            if (nd == 0) continue;
            int coff = out.offset.at({s, q});
            // internal differential
            if (out.ndim(s, q - 1) > 0) {
                sparse_matrix blk =
                    out.nproj[s].at(q - 1) * sd.c[s].d(q) * out.nsect[s].at(q);
                int roff = out.offset.at({s, q - 1});
                for (int i = 0; i < blk.rows(); ++i)
                    for (const auto& [j, v] : blk.row(i)) d.add_to(roff + i, coff + j, v);
            }
            // alternating face sum, with the (-1)^q totalization sign
            if (s > 0 && out.ndim(s - 1, q) > 0) {
                sparse_matrix sum(f, sd.c[s - 1].dim(q), sd.c[s].dim(q));
                for (int i = 0; i <= s; ++i) {
                    sparse_matrix fc = sd.face[s][i].component(q);
                    sum = i % 2 == 0 ? sum + fc : sum - fc;
                }
                sparse_matrix blk = out.nproj[s - 1].at(q) * sum * out.nsect[s].at(q);
                if (q % 2 != 0) blk = -blk;
                int roff = out.offset.at({s - 1, q});
                for (int i = 0; i < blk.rows(); ++i)
                    for (const auto& [j, v] : blk.row(i)) d.add_to(roff + i, coff + j, v);
            }
        }
        total.set_differential(t, d);
    }
    total.validate();  // d_total^2 = 0
    out.total = std::move(total);
    return out;
}

std::map<int, sparse_matrix> assemble_realized_map(
    const realized& src, const realized& tgt,
    const std::vector<std::map<int, sparse_matrix>>& per_s) {
    const field& f = src.total.fld();
    std::map<int, sparse_matrix> out;
    for (int t : src.total.degrees()) out.emplace(t, sparse_matrix(f, tgt.total.dim(t), src.total.dim(t)));
    for (const auto& [sq, coff] : src.offset) {
        auto [s, q] = sq;
        if (src.ndim(s, q) == 0 || tgt.ndim(s, q) == 0) continue;
        if (s >= static_cast<int>(per_s.size())) continue;
        auto it = per_s[s].find(q);
        if (it == per_s[s].end()) continue;
        sparse_matrix blk = tgt.nproj[s].at(q) * it->second * src.nsect[s].at(q);
        int roff = tgt.offset.at({s, q});
        auto& mat = out.at(q + s);
        for (int i = 0; i < blk.rows(); ++i)
            for (const auto& [j, v] : blk.row(i)) mat.add_to(roff + i, coff + j, v);
    }
    return out;
}

// --- the tower -------------------------------------------------------------

namespace {

// tf[s][s-1] for s >= 2: compose the two outermost surjection layers
seq_map compose_face(const bar_tower& t, int s) {
    const field& f = t.f;
    seq_map out{t.w[s].seq, t.w[s - 1].seq, {}};
    std::map<std::vector<int>, sparse_matrix> act_cache;
    for (int n = 1; n <= t.cap; ++n) {
        const basis_table& st = t.w[s].levels[n];
        table_map_builder build(st, t.w[s - 1].levels[n], 0);
        for (int id = 0; id < st.size(); ++id) {
            circle_key e = circle_key::decode(st.key(id));
            const surjection& phi = orbit_reps(n, e.r)[e.phi];
            const basis_table& inner = t.w[s - 1].levels[e.r];
            circle_key we = circle_key::decode(inner.key(inner.ids(e.m_deg)[e.m_idx]));
            const surjection& psi = orbit_reps(e.r, we.r)[we.phi];
            canonical_form cf = canonicalize(compose_surjection(psi, phi));
            perm tau_inv = perm_inverse(cf.tau);
            std::vector<int> ck{we.r, we.m_deg};
            ck.insert(ck.end(), tau_inv.begin(), tau_inv.end());
            auto it = act_cache.find(ck);
            if (it == act_cache.end())
                it = act_cache.emplace(ck, t.w_seq(s - 2).level(we.r).act(we.m_deg, tau_inv)).first;
            const sparse_matrix& am = it->second;
            for (int row = 0; row < am.rows(); ++row) {
                scalar v = am.get(row, we.m_idx);
                if (v.is_zero()) continue;
                circle_key tk = we;
                tk.phi = orbit_rep_index(cf.rep);
                tk.m_idx = row;
                int tid = t.w[s - 1].levels[n].find(tk.key());
                if (tid >= 0) build.add(id, tid, v);
            }
        }
        out.set_level(n, build.matrices(f));
    }
    return out;
}

}  // namespace

bar_tower build_tower(const right_module& m, int s_top) {
    bar_tower t;
    t.f = m.carrier.fld();
    t.cap = m.carrier.max_arity();
    t.s_top = s_top;
    t.m = m;
    t.com = com_seq(t.f, t.cap);
    t.w.resize(static_cast<size_t>(s_top + 1));
    t.tf.resize(static_cast<size_t>(s_top + 1));
    t.ins.resize(static_cast<size_t>(s_top));
    seq_map idc = seq_identity(t.com);
    for (int s = 1; s <= s_top; ++s) {
        t.w[s] = circle(t.w_seq(s - 1), t.com);
        if (s == 1) {
            t.tf[1].push_back(m.action(t.w[1]));
        } else {
            for (int i = 0; i + 1 < s; ++i)
                t.tf[s].push_back(circle_map(t.w[s], t.w[s - 1], t.tf[s - 1][i], idc));
            t.tf[s].push_back(compose_face(t, s));
        }
    }
    for (int s = 0; s < s_top; ++s) {
        for (int j = 0; j < s; ++j)
            t.ins[s].push_back(circle_map(t.w[s], t.w[s + 1], t.ins[s - 1][j], idc));
        t.ins[s].push_back(circle_unit_right(t.w_seq(s), t.w[s + 1]));
    }
    return t;
}

seq_map aug_face(const bar_tower& t, int s) {
    const field& f = t.f;
    seq_map out{t.w[s].seq, t.w_seq(s - 1), {}};
    for (int n = 1; n <= t.cap; ++n) {
        const basis_table& st = t.w[s].levels[n];
        const chain_complex& tc = t.w_seq(s - 1).level(n).complex();
        for (int q : st.degrees()) {
            sparse_matrix mat(f, tc.dim(q), st.dim(q));
            for (int id : st.ids(q)) {
                circle_key e = circle_key::decode(st.key(id));
                if (e.r == n && e.phi == 0) mat.set(e.m_idx, st.pos(id), scalar::one(f));
            }
            out.set_component(n, q, mat);
        }
    }
    return out;
}

// --- extended-power functoriality ------------------------------------------

std::map<int, sparse_matrix> ext_power_map(const seq_map& f, const ext_power_result& src,
                                           const ext_power_result& tgt) {
    const field& fl = f.src.fld();
    std::map<int, sparse_matrix> out;
    for (int q : src.complex.degrees())
        out.emplace(q, sparse_matrix(fl, tgt.complex.dim(q), src.complex.dim(q)));
    for (int r = src.lo; r <= src.hi; ++r) {
        const over_group_result& sp = src.parts[r];
        const over_group_result& tp = tgt.parts[r];
        if (sp.complex.total_dim() == 0) continue;
        const chain_complex& sa = f.src.level(r).complex();
        const chain_complex& ta = f.tgt.level(r).complex();
        for (int q : sp.complex.degrees()) {
            if (tp.complex.dim(q) == 0) continue;
            sparse_matrix pre(fl, tp.pre.dim(q), sp.pre.dim(q));
            for (int qa : sa.degrees()) {
                int qb = q - qa;
                int bd = sp.pow.complex.dim(qb);
                if (bd == 0) continue;
                sparse_matrix fm = f.component(r, qa);
                for (int row = 0; row < fm.rows(); ++row)
                    for (const auto& [col, v] : fm.row(row))
                        for (int bi = 0; bi < bd; ++bi)
                            pre.set(tensor_index(ta, sp.pow.complex, q, qa, row, bi),
                                    tensor_index(sa, sp.pow.complex, q, qa, col, bi), v);
            }
            sparse_matrix blk = tp.proj.at(q) * pre * sp.section.at(q);
            auto& mat = out.at(q);
            int roff = tgt.offset[r].at(q), coff = src.offset[r].at(q);
            for (int i = 0; i < blk.rows(); ++i)
                for (const auto& [j, v] : blk.row(i)) mat.add_to(roff + i, coff + j, v);
        }
    }
    return out;
}

namespace {

struct alg_ctx {
    const algebra* ia = nullptr;
    std::vector<tensor_power> pj;
    std::vector<std::map<int, sparse_matrix>> mu;
    std::vector<std::pair<int, int>> flat;
    std::map<std::pair<int, int>, int> flat_index;
};

alg_ctx make_alg_ctx(const algebra& i, int cap) {
    alg_ctx ctx;
    ctx.ia = &i;
    ctx.pj.resize(static_cast<size_t>(cap + 1));
    ctx.mu.resize(static_cast<size_t>(cap + 1));
    for (int j = 1; j <= cap; ++j) {
        ctx.pj[j] = i.pow(j);
        ctx.mu[j] = i.mu(j);
    }
    ctx.flat = flat_basis(i.carrier);
    for (size_t t = 0; t < ctx.flat.size(); ++t) ctx.flat_index[ctx.flat[t]] = static_cast<int>(t);
    return ctx;
}

// the multiplication face ext(A o Com, I) -> ext(A, I): the outer Com factor
// groups the algebra letters along its fibers and multiplies each group
std::map<int, sparse_matrix> mult_face(const circle_product& cp, const ext_power_result& src,
                                       const ext_power_result& tgt, const alg_ctx& ctx) {
    const field& fl = cp.seq.fld();
    int cap = cp.seq.max_arity();
    std::map<int, sparse_matrix> out;
    for (int q : src.complex.degrees())
        out.emplace(q, sparse_matrix(fl, tgt.complex.dim(q), src.complex.dim(q)));
    for (int n = 1; n <= cap; ++n) {
        const over_group_result& sp = src.parts[n];
        if (sp.complex.total_dim() == 0) continue;
        const basis_table& ct = cp.levels[n];
        const chain_complex& sa = cp.seq.level(n).complex();
        for (int q : sp.complex.degrees()) {
            sparse_matrix pre_to_out(fl, tgt.complex.dim(q), sp.pre.dim(q));
            for (int qa : sa.degrees()) {
                int qb = q - qa;
                int bd = sp.pow.complex.dim(qb);
                if (bd == 0) continue;
                for (int ai = 0; ai < sa.dim(qa); ++ai) {
                    circle_key e = circle_key::decode(ct.key(ct.ids(qa)[ai]));
                    const surjection& phi = orbit_reps(n, e.r)[e.phi];
                    std::vector<std::vector<int>> fbs = fibers(phi);
                    const over_group_result& tp = tgt.parts[e.r];
                    auto pit = tp.proj.find(q);
                    if (pit == tp.proj.end() || pit->second.rows() == 0) continue;
                    const chain_complex& ta = cp.m_factor.level(e.r).complex();
                    int roff = tgt.offset[e.r].at(q);
                    for (int bi = 0; bi < bd; ++bi) {
                        const auto& ytuple = sp.pow.table.key(sp.pow.table.ids(qb)[bi]);
                        // Koszul sign for sorting the letters into fiber order
                        perm sigma(static_cast<size_t>(n));
                        std::vector<int> degs(static_cast<size_t>(n));
                        {
                            int idx = 0;
                            for (const auto& fb : fbs)
                                for (int pos : fb) sigma[pos] = idx++;
                        }
                        for (int i = 0; i < n; ++i) degs[i] = ctx.flat[ytuple[i]].first;
                        int ks = koszul_sign(sigma, degs);
                        // multiply each fiber group
                        std::vector<std::vector<std::pair<int, scalar>>> zopts(fbs.size());
                        bool dead = false;
                        for (size_t k = 0; k < fbs.size() && !dead; ++k) {
                            int j = static_cast<int>(fbs[k].size());
                            if (j == 1) {
                                zopts[k].emplace_back(ytuple[fbs[k][0]], scalar::one(fl));
                                continue;
                            }
                            std::vector<int> sub;
                            for (int pos : fbs[k]) sub.push_back(ytuple[pos]);
                            int pid = ctx.pj[j].table.find(sub);
                            if (pid < 0) {
                                dead = true;
                                break;
                            }
                            int qsub = ctx.pj[j].table.degree(pid);
                            auto mit = ctx.mu[j].find(qsub);
                            if (mit == ctx.mu[j].end()) {
                                dead = true;
                                break;
                            }
                            int col = ctx.pj[j].table.pos(pid);
                            for (int row = 0; row < mit->second.rows(); ++row) {
                                scalar v = mit->second.get(row, col);
                                if (!v.is_zero())
                                    zopts[k].emplace_back(ctx.flat_index.at({qsub, row}), v);
                            }
                            if (zopts[k].empty()) dead = true;
                        }
                        if (dead) continue;
                        int src_col = tensor_index(sa, sp.pow.complex, q, qa, ai, bi);
                        // odometer over the factor choices
                        std::vector<size_t> pos(zopts.size(), 0);
                        for (;;) {
                            std::vector<int> zkey(zopts.size());
                            scalar c = ks == 1 ? scalar::one(fl) : -scalar::one(fl);
                            for (size_t k = 0; k < zopts.size(); ++k) {
                                zkey[k] = zopts[k][pos[k]].first;
                                c = c * zopts[k][pos[k]].second;
                            }
                            int pid2 = tp.pow.table.find(zkey);
                            if (pid2 >= 0) {
                                int prerow = tensor_index(ta, tp.pow.complex, q, qa, e.m_idx,
                                                          tp.pow.table.pos(pid2));
                                const sparse_matrix& proj = pit->second;
                                for (int row = 0; row < proj.rows(); ++row) {
                                    scalar v = proj.get(row, prerow);
                                    if (!v.is_zero())
                                        pre_to_out.add_to(roff + row, src_col, c * v);
                                }
                            }
                            size_t k = zopts.size();
                            while (k > 0 && ++pos[k - 1] == zopts[k - 1].size()) pos[--k] = 0;
                            if (k == 0) break;
                        }
                    }
                }
            }
            sparse_matrix blk = pre_to_out * sp.section.at(q);
            auto& mat = out.at(q);
            int coff = src.offset[n].at(q);
            for (int i = 0; i < blk.rows(); ++i)
                for (const auto& [j, v] : blk.row(i)) mat.add_to(i, coff + j, v);
        }
    }
    return out;
}

chain_map wrap_map(const chain_complex& src, const chain_complex& tgt,
                   const std::map<int, sparse_matrix>& mats) {
    chain_map f{src, tgt, {}};
    for (const auto& [q, m] : mats) f.set_component(q, m);
    return f;
}

}  // namespace

// --- realized bar constructions --------------------------------------------

bar_com_result bar_com(const right_module& m) {
    int cap = m.carrier.max_arity();
    int S = cap;
    bar_com_result out;
    out.tower = build_tower(m, S + 1);
    const bar_tower& t = out.tower;
    out.sd.resize(static_cast<size_t>(cap + 1));
    out.rl.resize(static_cast<size_t>(cap + 1));
    for (int n = 1; n <= cap; ++n) {
        simplicial_data& sdn = out.sd[n];
        sdn.c.resize(static_cast<size_t>(S + 1));
        sdn.face.resize(static_cast<size_t>(S + 1));
        sdn.degen.resize(static_cast<size_t>(S + 1));
        for (int s = 0; s <= S; ++s) sdn.c[s] = t.w[s + 1].seq.level(n).complex();
        for (int s = 1; s <= S; ++s)
            for (int i = 0; i <= s; ++i) sdn.face[s].push_back(t.tf[s + 1][i].level_map(n));
        for (int s = 0; s < S; ++s)
            for (int j = 0; j <= s; ++j) sdn.degen[s].push_back(t.ins[s + 1][j].level_map(n));
        out.rl[n] = realize(sdn);
        for (int s = n; s <= S; ++s)
            for (int q : sdn.c[s].degrees())
                if (out.rl[n].ndim(s, q) != 0)
                    throw std::logic_error("bar_com: normalized part fails to vanish");
    }
    // realized levels as an equivariant sequence
    sym_seq rseq(t.f, cap);
    for (int n = 1; n <= cap; ++n) {
        equivariant_complex e(out.rl[n].total, n);
        for (int i = 0; i + 1 < n; ++i) {
            std::vector<std::map<int, sparse_matrix>> per_s(static_cast<size_t>(S + 1));
            for (int s = 0; s <= S; ++s)
                for (int q : out.sd[n].c[s].degrees())
                    per_s[s][q] = t.w[s + 1].seq.level(n).generator(q, i);
            for (auto& [q, g] : assemble_realized_map(out.rl[n], out.rl[n], per_s))
                e.set_generator(q, i, std::move(g));
        }
        rseq.set_level(n, std::move(e));
    }
    out.mod.carrier = std::move(rseq);
    // inherited right-module structure from the outermost Com factor
    std::vector<right_module> fms(static_cast<size_t>(S + 1));
    for (int s = 0; s <= S; ++s) fms[s] = free_module_structure(t.w[s + 1]);
    for (int n = 1; n <= cap; ++n)
        for (int r = 1; r <= n; ++r)
            for (int p = 0; p < static_cast<int>(orbit_reps(n, r).size()); ++p) {
                std::vector<std::map<int, sparse_matrix>> per_s(static_cast<size_t>(S + 1));
                for (int s = 0; s <= S; ++s) {
                    auto it = fms[s].delta_reps.find({n, r, p});
                    if (it != fms[s].delta_reps.end()) per_s[s] = it->second;
                }
                auto mats = assemble_realized_map(out.rl[r], out.rl[n], per_s);
                std::map<int, sparse_matrix> nz;
                for (auto& [q, mat] : mats)
                    if (!mat.is_zero()) nz.emplace(q, std::move(mat));
                if (!nz.empty()) out.mod.set_delta(n, r, p, std::move(nz));
            }
    // augmentation: collapse the s = 0 block by the module action
    out.aug = seq_map{out.mod.carrier, m.carrier, {}};
    for (int n = 1; n <= cap; ++n) {
        for (int tt : out.rl[n].total.degrees()) {
            sparse_matrix mat(t.f, m.carrier.level(n).complex().dim(tt), out.rl[n].total.dim(tt));
            if (out.rl[n].ndim(0, tt) > 0) {
                sparse_matrix blk = t.tf[1][0].component(n, tt) * out.rl[n].nsect[0].at(tt);
                int coff = out.rl[n].offset.at({0, tt});
                for (int i = 0; i < blk.rows(); ++i)
                    for (const auto& [j, v] : blk.row(i)) mat.set(i, coff + j, v);
            }
            out.aug.set_component(n, tt, mat);
        }
    }
    return out;
}

bar_unit_result bar_unit(const right_module& m) {
    int cap = m.carrier.max_arity();
    int S = cap;
    bar_unit_result out;
    out.tower = build_tower(m, S);
    const bar_tower& t = out.tower;
    std::vector<seq_map> augf(static_cast<size_t>(S + 1));
    for (int s = 1; s <= S; ++s) augf[s] = aug_face(t, s);
    out.sd.resize(static_cast<size_t>(cap + 1));
    out.rl.resize(static_cast<size_t>(cap + 1));
    for (int n = 1; n <= cap; ++n) {
        simplicial_data& sdn = out.sd[n];
        sdn.c.resize(static_cast<size_t>(S + 1));
        sdn.face.resize(static_cast<size_t>(S + 1));
        sdn.degen.resize(static_cast<size_t>(S + 1));
        for (int s = 0; s <= S; ++s) sdn.c[s] = t.w_seq(s).level(n).complex();
        for (int s = 1; s <= S; ++s) {
            for (int i = 0; i < s; ++i) sdn.face[s].push_back(t.tf[s][i].level_map(n));
            sdn.face[s].push_back(augf[s].level_map(n));
        }
        for (int s = 0; s < S; ++s)
            for (int j = 0; j <= s; ++j) sdn.degen[s].push_back(t.ins[s][j].level_map(n));
        out.rl[n] = realize(sdn);
        for (int s = n; s <= S; ++s)
            for (int q : sdn.c[s].degrees())
                if (out.rl[n].ndim(s, q) != 0)
                    throw std::logic_error("bar_unit: normalized part fails to vanish");
    }
    out.seq = sym_seq(t.f, cap);
    for (int n = 1; n <= cap; ++n) {
        equivariant_complex e(out.rl[n].total, n);
        for (int i = 0; i + 1 < n; ++i) {
            std::vector<std::map<int, sparse_matrix>> per_s(static_cast<size_t>(S + 1));
            for (int s = 0; s <= S; ++s)
                for (int q : out.sd[n].c[s].degrees())
                    per_s[s][q] = t.w_seq(s).level(n).generator(q, i);
            for (auto& [q, g] : assemble_realized_map(out.rl[n], out.rl[n], per_s))
                e.set_generator(q, i, std::move(g));
        }
        out.seq.set_level(n, std::move(e));
    }
    return out;
}

bar_alg_result bar_alg(const right_module& m, const algebra& i) {
    int cap = m.carrier.max_arity();
    int S = cap;
    bar_alg_result out;
    out.tower = build_tower(m, S);
    out.i = i;
    const bar_tower& t = out.tower;
    alg_ctx ctx = make_alg_ctx(i, cap);
    out.ep.resize(static_cast<size_t>(S + 1));
    for (int s = 0; s <= S; ++s) out.ep[s] = ext_power(t.w_seq(s), i.carrier, cap);
    simplicial_data& sd = out.sd;
    sd.c.resize(static_cast<size_t>(S + 1));
    sd.face.resize(static_cast<size_t>(S + 1));
    sd.degen.resize(static_cast<size_t>(S + 1));
    for (int s = 0; s <= S; ++s) sd.c[s] = out.ep[s].complex;
    for (int s = 1; s <= S; ++s) {
        for (int i2 = 0; i2 < s; ++i2)
            sd.face[s].push_back(
                wrap_map(sd.c[s], sd.c[s - 1], ext_power_map(t.tf[s][i2], out.ep[s], out.ep[s - 1])));
        sd.face[s].push_back(
            wrap_map(sd.c[s], sd.c[s - 1], mult_face(t.w[s], out.ep[s], out.ep[s - 1], ctx)));
    }
    for (int s = 0; s < S; ++s)
        for (int j = 0; j <= s; ++j)
            sd.degen[s].push_back(
                wrap_map(sd.c[s], sd.c[s + 1], ext_power_map(t.ins[s][j], out.ep[s], out.ep[s + 1])));
    out.rl = realize(sd);
    return out;
}

equivariant_complex lie(const field& f, int n) {
    static std::map<std::pair<uint32_t, int>, equivariant_complex> cache;
    static std::mutex mu;
    {
        std::lock_guard<std::mutex> lk(mu);
        auto it = cache.find({f.p, n});
        if (it != cache.end()) return it->second;
    }
    bar_unit_result b = bar_unit(s1_module(f, n));
    std::lock_guard<std::mutex> lk(mu);
    for (int k = 1; k <= n; ++k) cache.insert({{f.p, k}, b.seq.level(k)});
    return cache.at({f.p, n});
}

chain_complex tq(const algebra& i) { return bar_alg(s1_module(i.f, i.cap), i).rl.total; }

// --- relative circle products ----------------------------------------------

seq_quotient coequalize(const seq_map& d0, const seq_map& d1) {
    const sym_seq& b0 = d0.tgt;
    const field& f = b0.fld();
    seq_quotient out;
    out.seq = sym_seq(f, b0.max_arity());
    out.proj.resize(static_cast<size_t>(b0.max_arity() + 1));
    out.section.resize(static_cast<size_t>(b0.max_arity() + 1));
    for (int n = 0; n <= b0.max_arity(); ++n) {
        const chain_complex& c0 = b0.level(n).complex();
        chain_complex qc(f);
        for (int q : c0.degrees()) {
            coker_presentation ck =
                cokernel_presentation(d0.component(n, q) - d1.component(n, q));
            std::vector<basis_label> labels;
            sparse_matrix sect_t = ck.section.transpose();
            for (int k = 0; k < ck.dim; ++k) {
                const auto& row = sect_t.row(k);
                if (row.size() == 1 && row.begin()->second.is_one())
                    labels.push_back(c0.labels(q)[row.begin()->first]);
                else
                    labels.push_back(basis_label{"q" + std::to_string(k), 0});
            }
            qc.set_basis(q, std::move(labels));
            out.proj[n][q] = ck.proj;
            out.section[n][q] = ck.section;
        }
        for (int q : c0.degrees()) {
            auto pit = out.proj[n].find(q - 1);
            if (pit == out.proj[n].end()) continue;
            qc.set_differential(q, pit->second * c0.d(q) * out.section[n].at(q));
        }
        equivariant_complex eq(std::move(qc), n);
        for (int q : c0.degrees())
            for (int i = 0; i + 1 < n; ++i)
                eq.set_generator(q, i,
                                 out.proj[n].at(q) * b0.level(n).generator(q, i) *
                                     out.section[n].at(q));
        out.seq.set_level(n, std::move(eq));
    }
    out.seq.validate();
    return out;
}

seq_quotient relative_circle_com(const right_module& m) {
    bar_tower t = build_tower(m, 2);
    return coequalize(t.tf[2][0], t.tf[2][1]);
}

seq_quotient relative_circle_unit(const right_module& m) {
    bar_tower t = build_tower(m, 1);
    return coequalize(t.tf[1][0], aug_face(t, 1));
}

quotient_complex relative_circle_alg(const right_module& m, const algebra& i) {
    bar_tower t = build_tower(m, 1);
    alg_ctx ctx = make_alg_ctx(i, t.cap);
    ext_power_result ep0 = ext_power(m.carrier, i.carrier, t.cap);
    ext_power_result ep1 = ext_power(t.w[1].seq, i.carrier, t.cap);
    std::map<int, sparse_matrix> d0 = ext_power_map(t.tf[1][0], ep1, ep0);
    std::map<int, sparse_matrix> d1 = mult_face(t.w[1], ep1, ep0, ctx);
    quotient_complex out;
    out.complex = chain_complex(t.f);
    const chain_complex& c0 = ep0.complex;
    auto at = [&](std::map<int, sparse_matrix>& m2, int q) {
        auto it = m2.find(q);
        return it == m2.end() ? sparse_matrix(t.f, c0.dim(q), ep1.complex.dim(q)) : it->second;
    };
    for (int q : c0.degrees()) {
        coker_presentation ck = cokernel_presentation(at(d0, q) - at(d1, q));
        std::vector<basis_label> labels;
        sparse_matrix sect_t = ck.section.transpose();
        for (int k = 0; k < ck.dim; ++k) {
            const auto& row = sect_t.row(k);
            if (row.size() == 1 && row.begin()->second.is_one())
                labels.push_back(c0.labels(q)[row.begin()->first]);
            else
                labels.push_back(basis_label{"q" + std::to_string(k), 0});
        }
        out.complex.set_basis(q, std::move(labels));
        out.proj[q] = ck.proj;
        out.section[q] = ck.section;
    }
    for (int q : c0.degrees()) {
        auto pit = out.proj.find(q - 1);
        if (pit == out.proj.end()) continue;
        out.complex.set_differential(q, pit->second * c0.d(q) * out.section.at(q));
    }
    out.complex.validate();
    return out;
}

bool bar_factorization_check(const right_module& m, left_arg n, const algebra* ia, int s_check) {
    bar_tower t = build_tower(m, s_check + 1);
    for (int s = 0; s <= s_check; ++s) {
        // B_s(M, Com, Com) with the module structure carried by the outer factor
        right_module bs = free_module_structure(t.w[s + 1]);
        if (n == left_arg::com) {
            bar_tower t2 = build_tower(bs, 2);
            seq_quotient q = coequalize(t2.tf[2][0], t2.tf[2][1]);
            // the action descends to the coequalizer; it should hit B_s o_Com Com = B_s
            seq_map cmp{q.seq, bs.carrier, {}};
            for (int n2 = 1; n2 <= t.cap; ++n2)
                for (int dq : q.seq.level(n2).complex().degrees())
                    cmp.set_component(n2, dq,
                                      t2.tf[1][0].component(n2, dq) * q.section[n2].at(dq));
            if (!seq_is_iso(cmp)) return false;
        } else if (n == left_arg::unit) {
            bar_tower t2 = build_tower(bs, 1);
            seq_quotient q = coequalize(t2.tf[1][0], aug_face(t2, 1));
            // unit insertion W_s -> W_{s+1} followed by the coequalizer projection
            seq_map eta = circle_unit_right(t.w_seq(s), t.w[s + 1]);
            seq_map cmp{t.w_seq(s), q.seq, {}};
            for (int n2 = 1; n2 <= t.cap; ++n2)
                for (int dq : t.w_seq(s).level(n2).complex().degrees())
                    cmp.set_component(n2, dq, q.proj[n2].at(dq) * eta.component(n2, dq));
            if (!seq_is_iso(cmp)) return false;
        } else {
            quotient_complex q = relative_circle_alg(bs, *ia);
            ext_power_result eps = ext_power(t.w_seq(s), ia->carrier, t.cap);
            ext_power_result eps1 = ext_power(t.w[s + 1].seq, ia->carrier, t.cap);
            seq_map eta = circle_unit_right(t.w_seq(s), t.w[s + 1]);
            std::map<int, sparse_matrix> em = ext_power_map(eta, eps, eps1);
            for (int dq : eps.complex.degrees()) {
                auto pit = q.proj.find(dq);
                sparse_matrix cmp =
                    (pit == q.proj.end()
                         ? sparse_matrix(t.f, 0, eps1.complex.dim(dq))
                         : pit->second) *
                    em.at(dq);
                if (cmp.rows() != cmp.cols() || rank(cmp) != cmp.rows()) return false;
            }
            if (q.complex.total_dim() != eps.complex.total_dim()) return false;
        }
    }
    return true;
}

}  // namespace opf

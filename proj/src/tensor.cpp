#include "operadforge/tensor.hpp"

#include <algorithm>
#include <stdexcept>

namespace opf {

tensor_module_result tensor_com_module(const sset& k, const field& f, int cap) {
    tensor_module_result out;
    out.powers.resize(static_cast<size_t>(cap + 1));
    sym_seq carrier(f, cap);
    for (int n = 1; n <= cap; ++n) {
        out.powers[n] = smash_power(k, n);
        carrier.set_level(n, smash_chains(out.powers[n], f));
    }
    out.mod.carrier = std::move(carrier);
    for (int n = 1; n <= cap; ++n)
        for (int r = 1; r <= n; ++r) {
            const std::vector<surjection>& reps = orbit_reps(n, r);
            for (int p = 0; p < static_cast<int>(reps.size()); ++p) {
                const sset& sr = out.powers[r].space;
                const sset& sn = out.powers[n].space;
                std::map<int, sparse_matrix> mats;
                for (int q = 0; q <= sr.dim(); ++q) {
                    int cdim = out.mod.carrier.level(r).complex().dim(q);
                    if (cdim == 0) continue;
                    sparse_matrix m(f, out.mod.carrier.level(n).complex().dim(q), cdim);
                    for (int id = 0; id < sr.count[q]; ++id) {
                        if (q == 0 && id == sr.base) continue;
                        std::vector<sref> nt(static_cast<size_t>(n));
                        for (int i = 0; i < n; ++i) nt[i] = out.powers[r].coords[q][id][reps[p].vals[i]];
                        int tid = out.powers[n].find(q, nt);
                        if (tid < 0) throw std::logic_error("tensor: diagonal image missed");
                        m.set(chain_pos(sn, q, tid), chain_pos(sr, q, id), scalar::one(f));
                    }
                    if (!m.is_zero()) mats.emplace(q, std::move(m));
                }
                if (!mats.empty()) out.mod.set_delta(n, r, p, std::move(mats));
            }
        }
    return out;
}

sym_seq mono_seq(const field& f, int m, int cap) {
    sym_seq out(f, cap);
    for (int r = 1; r <= std::min(m, cap); ++r) {
        std::vector<std::vector<int>> monos = mono_set(r, m);
        chain_complex c(f);
        std::vector<basis_label> labels;
        for (const auto& mu : monos) {
            std::string name = "m";
            for (int v : mu) name += std::to_string(v);
            labels.push_back(basis_label{name, 0});
        }
        c.set_basis(0, labels);
        equivariant_complex eq(std::move(c), r);
        for (int i = 0; i + 1 < r; ++i) {
            sparse_matrix g(f, static_cast<int>(monos.size()), static_cast<int>(monos.size()));
            for (size_t j = 0; j < monos.size(); ++j) {
                std::vector<int> t = monos[j];
                std::swap(t[i], t[i + 1]);  // precompose with s_i
                auto it = std::lower_bound(monos.begin(), monos.end(), t);
                g.set(static_cast<int>(it - monos.begin()), static_cast<int>(j), scalar::one(f));
            }
            eq.set_generator(0, i, g);
        }
        out.set_level(r, eq);
    }
    return out;
}

seq_map mono_decomposition(const tensor_module_result& t, const circle_product& mc) {
    const field& f = t.mod.carrier.fld();
    int cap = t.mod.carrier.max_arity();
    seq_map out{t.mod.carrier, mc.seq, {}};
    for (int n = 1; n <= cap; ++n) {
        const sset& sn = t.powers[n].space;
        int dim = t.mod.carrier.level(n).complex().dim(0);
        if (dim == 0) {
            continue;
        }
        sparse_matrix mat(f, mc.seq.level(n).complex().dim(0), dim);
        for (int id = 0; id < sn.count[0]; ++id) {
            if (id == sn.base) continue;
            std::vector<int> fn(static_cast<size_t>(n));
            int mpts = 0;
            for (int i = 0; i < n; ++i) {
                fn[i] = t.powers[n].coords[0][id][i].id - 1;  // vertex ids: base first
                mpts = std::max(mpts, fn[i] + 1);
            }
            epi_mono factored = epi_mono_factorize(fn, mpts);
            int r = factored.epi.r;
            std::vector<std::vector<int>> monos = mono_set(r, static_cast<int>(
                t.powers[1].space.count[0] - 1));
            auto it = std::lower_bound(monos.begin(), monos.end(), factored.mono);
            circle_key ck;
            ck.r = r;
            ck.phi = orbit_rep_index(factored.epi);
            ck.m_deg = 0;
            ck.m_idx = static_cast<int>(it - monos.begin());
            ck.xs.assign(static_cast<size_t>(r), {0, 0});
            int tid = mc.levels[n].find(ck.key());
            if (tid < 0) throw std::logic_error("mono_decomposition: target missed");
            mat.set(mc.levels[n].pos(tid), chain_pos(sn, 0, id), scalar::one(f));
        }
        out.set_component(n, 0, mat);
    }
    return out;
}

quotient_complex tensor_algebra(const tensor_module_result& t, const algebra& i) {
    return relative_circle_alg(t.mod, i);
}

std::vector<std::map<int, sparse_matrix>> suspension_levels(
    const tensor_module_result& lo, const tensor_module_result& hi, const smash_result& pair,
    const sset& s1, const sset& k) {
    const field& f = lo.mod.carrier.fld();
    int cap = lo.mod.carrier.max_arity();
    std::vector<const sset*> pf{&s1, &k};
    std::vector<std::map<int, sparse_matrix>> out(static_cast<size_t>(cap + 1));
    for (int n = 1; n <= cap; ++n) {
        const sset& slo = lo.powers[n].space;
        const sset& shi = hi.powers[n].space;
        const chain_complex& clo = lo.mod.carrier.level(n).complex();
        const chain_complex& chi = hi.mod.carrier.level(n).complex();
        for (int m = 0; m <= slo.dim(); ++m) {
            if (clo.dim(m) == 0) continue;
            sparse_matrix mat(f, chi.dim(m + 1), clo.dim(m));
            std::vector<const sset*> hfac(static_cast<size_t>(n), &pair.space);
            for (int id = 0; id < slo.count[m]; ++id) {
                if (m == 0 && id == slo.base) continue;
                const std::vector<sref>& xs = lo.powers[n].coords[m][id];
                for (int p = 0; p <= m; ++p) {
                    sref tp{1, 0, std::vector<int>(static_cast<size_t>(m + 2), 1)};
                    for (int u = 0; u <= p; ++u) tp.alpha[u] = 0;
                    std::vector<sref> tuple(static_cast<size_t>(n));
                    bool dead = false;
                    for (int i = 0; i < n && !dead; ++i) {
                        sref c = pair.normalize(pf, {tp, sset::degen(xs[i], p)});
                        if (c.d == 0 && c.id == pair.space.base) dead = true;
                        tuple[i] = c;
                    }
                    if (dead) continue;
                    // the image tuple may be jointly degenerate: those terms
                    // vanish in normalized chains
                    sref img = hi.powers[n].normalize(hfac, tuple);
                    if (img.degenerate()) continue;
                    mat.add_to(chain_pos(shi, m + 1, img.id), chain_pos(slo, m, id),
                               scalar(f, p % 2 == 0 ? 1 : -1));
                }
            }
            if (!mat.is_zero()) out[n].emplace(m, std::move(mat));
        }
    }
    return out;
}

seq_map stabilization_map(const tensor_module_result& lo, const tensor_module_result& hi,
                          const smash_result& pair, const sset& s1, const sset& k) {
    right_module lo1 = shift_module(lo.mod, 1);
    std::vector<std::map<int, sparse_matrix>> susp = suspension_levels(lo, hi, pair, s1, k);
    seq_map out{lo1.carrier, hi.mod.carrier, {}};
    for (int n = 1; n <= lo.mod.carrier.max_arity(); ++n)
        for (const auto& [m, mat] : susp[n]) out.set_component(n, m + 1, mat);
    return out;
}

std::map<int, sparse_matrix> ext_left_shift_map(
    const std::vector<std::map<int, sparse_matrix>>& lev, int shift, const sym_seq& src_seq,
    const sym_seq& tgt_seq, const ext_power_result& src, const ext_power_result& tgt,
    const field& f) {
    std::map<int, sparse_matrix> out;
    for (int q : src.complex.degrees())
        out.emplace(q, sparse_matrix(f, tgt.complex.dim(q + shift), src.complex.dim(q)));
    for (int r = src.lo; r <= src.hi && r < static_cast<int>(lev.size()); ++r) {
        const over_group_result& sp = src.parts[r];
        const over_group_result& tp = tgt.parts[r];
        if (sp.complex.total_dim() == 0) continue;
        const chain_complex& sa = src_seq.level(r).complex();
        const chain_complex& ta = tgt_seq.level(r).complex();
        for (int q : sp.complex.degrees()) {
            if (tp.complex.dim(q + shift) == 0) continue;
            sparse_matrix pre(f, tp.pre.dim(q + shift), sp.pre.dim(q));
            for (const auto& [qa, fm] : lev[r]) {
                int qb = q - qa;
                int bd = sp.pow.complex.dim(qb);
                if (bd == 0) continue;
                for (int row = 0; row < fm.rows(); ++row)
                    for (const auto& [col, v] : fm.row(row))
                        for (int bi = 0; bi < bd; ++bi)
                            pre.set(tensor_index(ta, tp.pow.complex, q + shift, qa + shift, row, bi),
                                    tensor_index(sa, sp.pow.complex, q, qa, col, bi), v);
            }
            auto pit = tp.proj.find(q + shift);
            auto sit = sp.section.find(q);
            if (pit == tp.proj.end() || sit == sp.section.end()) continue;
            sparse_matrix blk = pit->second * pre * sit->second;
            auto& mat = out.at(q);
            int roff = tgt.offset[r].at(q + shift), coff = src.offset[r].at(q);
            for (int i = 0; i < blk.rows(); ++i)
                for (const auto& [j, v] : blk.row(i)) mat.add_to(roff + i, coff + j, v);
        }
    }
    return out;
}

stable_tq_result stable_tq(const algebra& i, int degree_bound, int max_k) {
    const field& f = i.f;
    int cap = i.cap;
    sset s1 = delta_quotient(1);
    sset cur = discrete_plus(1);  // S^0
    tensor_module_result t = tensor_com_module(cur, f, cap);
    ext_power_result ep = ext_power(t.mod.carrier, i.carrier, cap);
    quotient_complex q = relative_circle_alg(t.mod, i);
    stable_tq_result out;
    auto record = [&](const chain_complex& c, int k) {
        std::map<int, int> h;
        for (int d = 0; d <= degree_bound; ++d) {
            int hd = homology_dim(c, d + k);
            if (hd) h[d] = hd;
        }
        out.homology.push_back(h);
    };
    record(q.complex, 0);
    int consec = 0;
    for (int k = 0; k < max_k; ++k) {
        smash_result pair = smash_product({&s1, &cur});
        tensor_module_result tn = tensor_com_module(pair.space, f, cap);
        ext_power_result epn = ext_power(tn.mod.carrier, i.carrier, cap);
        quotient_complex qn = relative_circle_alg(tn.mod, i);
        std::vector<std::map<int, sparse_matrix>> susp = suspension_levels(t, tn, pair, s1, cur);
        std::map<int, sparse_matrix> e =
            ext_left_shift_map(susp, 1, t.mod.carrier, tn.mod.carrier, ep, epn, f);
        chain_map fmap{shift(q.complex, 1), qn.complex, {}};
        for (const auto& [dq, mat] : e) {
            auto pit = qn.proj.find(dq + 1);
            auto sit = q.section.find(dq);
            if (pit == qn.proj.end() || sit == q.section.end()) continue;
            fmap.set_component(dq + 1, pit->second * mat * sit->second);
        }
        if (!fmap.is_chain_map()) throw std::logic_error("stable_tq: map fails to descend");
        record(qn.complex, k + 1);
        // Freudenthal window: stage-k classes in de-suspended degrees >= k are
        // not stable yet, so compare only in degrees d <= min(degree_bound, k-1)
        int window = std::min(degree_bound, k - 1);
        bool iso = window >= 0;
        for (int d = 0; d <= window && iso; ++d) {
            int qq = d + k + 1;
            if (homology_dim(q.complex, qq - 1) != homology_dim(qn.complex, qq)) iso = false;
            else if (rank(induced_map(fmap, qq)) != homology_dim(qn.complex, qq)) iso = false;
        }
        consec = iso ? consec + 1 : 0;
        cur = pair.space;
        t = std::move(tn);
        ep = std::move(epn);
        q = std::move(qn);
        if (consec >= 2) {
            out.witness = k + 1;
            // the last map verified degrees <= k - 1 = witness - 2; beyond
            // that the strict quotients still carry unstable (and over F_p,
            // extended-power) classes
            out.stable_through = std::min(degree_bound, out.witness - 2);
            // good truncation: degrees above the certified range are cut and
            // the boundary degree replaced by a basis of its image, so
            // homology <= stable_through is that of the full stage
            chain_complex full = shift(q.complex, -(k + 1));
            chain_complex trunc(f);
            for (int dq : full.degrees()) {
                if (dq > out.stable_through) continue;
                trunc.set_basis(dq, full.labels(dq));
                if (!full.d(dq).is_zero() && dq <= out.stable_through)
                    trunc.set_differential(dq, full.d(dq));
            }
            sparse_matrix top = full.d(out.stable_through + 1);
            if (!top.is_zero()) {
                std::vector<int> piv = rref(top).pivot_cols;
                if (!piv.empty()) {
                    trunc.set_basis_dim(out.stable_through + 1, static_cast<int>(piv.size()));
                    trunc.set_differential(out.stable_through + 1, top.select_cols(piv));
                }
            }
            out.complex = std::move(trunc);
            return out;
        }
    }
    return out;
}

}  // namespace opf

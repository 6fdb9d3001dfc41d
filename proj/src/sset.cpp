#include "operadforge/sset.hpp"

#include <algorithm>
#include <stdexcept>

namespace opf {

std::vector<int> sref::key() const {
    std::vector<int> k{d, id};
    k.insert(k.end(), alpha.begin(), alpha.end());
    return k;
}

bool sref::operator<(const sref& o) const { return key() < o.key(); }

sref nondeg_ref(int d, int id) {
    sref r{d, id, {}};
    r.alpha.resize(static_cast<size_t>(d + 1));
    for (int t = 0; t <= d; ++t) r.alpha[t] = t;
    return r;
}

sref sset::base_ref(int m) const {
    return sref{0, base, std::vector<int>(static_cast<size_t>(m + 1), 0)};
}

sref sset::face(const sref& r, int i) const {
    int m = r.dim();
    std::vector<int> beta;
    beta.reserve(static_cast<size_t>(m));
    for (int t = 0; t <= m; ++t)
        if (t != i) beta.push_back(r.alpha[t]);
    // beta misses at most one value of 0..d
    std::vector<char> seen(static_cast<size_t>(r.d + 1), 0);
    for (int v : beta) seen[v] = 1;
    int missing = -1;
    for (int v = 0; v <= r.d; ++v)
        if (!seen[v]) missing = v;
    if (missing < 0) return sref{r.d, r.id, std::move(beta)};
    const sref& fr = faces[r.d][r.id][missing];
    std::vector<int> comp(beta.size());
    for (size_t t = 0; t < beta.size(); ++t)
        comp[t] = fr.alpha[beta[t] < missing ? beta[t] : beta[t] - 1];
    return sref{fr.d, fr.id, std::move(comp)};
}

sref sset::degen(const sref& r, int j) {
    sref out{r.d, r.id, {}};
    out.alpha.reserve(r.alpha.size() + 1);
    for (int t = 0; t < static_cast<int>(r.alpha.size()); ++t) {
        out.alpha.push_back(r.alpha[t]);
        if (t == j) out.alpha.push_back(r.alpha[t]);
    }
    return out;
}

void sset::validate() const {
    if (base < 0 || base >= ncount(0)) throw std::logic_error("sset: bad basepoint");
    for (int k = 1; k <= dim(); ++k) {
        if (static_cast<int>(faces[k].size()) != count[k]) throw std::logic_error("sset: face table size");
        for (int id = 0; id < count[k]; ++id) {
            if (static_cast<int>(faces[k][id].size()) != k + 1)
                throw std::logic_error("sset: face count");
            for (const sref& fr : faces[k][id]) {
                if (fr.dim() != k - 1 || fr.d > k - 1 || fr.id >= ncount(fr.d))
                    throw std::logic_error("sset: face target");
                int prev = 0;
                std::vector<char> seen(static_cast<size_t>(fr.d + 1), 0);
                for (int v : fr.alpha) {
                    if (v < prev || v > prev + 1 || v > fr.d) throw std::logic_error("sset: face alpha");
                    prev = v;
                    seen[v] = 1;
                }
                for (char s : seen)
                    if (!s) throw std::logic_error("sset: face alpha not onto");
            }
        }
    }
    for (int k = 2; k <= dim(); ++k)
        for (int id = 0; id < count[k]; ++id) {
            sref x = nondeg_ref(k, id);
            for (int j = 1; j <= k; ++j)
                for (int i = 0; i < j; ++i)
                    if (!(face(face(x, j), i) == face(face(x, i), j - 1)))
                        throw std::logic_error("sset: simplicial identity");
        }
}

sset discrete_plus(int m) {
    sset k;
    k.count = {m + 1};
    k.faces.resize(1);
    k.names.resize(1);
    k.names[0].push_back("*");
    for (int i = 1; i <= m; ++i) k.names[0].push_back("p" + std::to_string(i));
    return k;
}

sset delta_quotient(int kk) {
    sset k;
    k.count.assign(static_cast<size_t>(kk + 1), 0);
    k.count[0] = 1;
    k.count[kk] = 1;
    k.faces.resize(static_cast<size_t>(kk + 1));
    k.names.resize(static_cast<size_t>(kk + 1));
    k.names[0] = {"*"};
    if (kk == 0) return k;  // a point; callers use discrete_plus(1) for S^0
    k.faces[kk].push_back(std::vector<sref>(static_cast<size_t>(kk + 1), k.base_ref(kk - 1)));
    k.names[kk] = {"c"};
    return k;
}

sset sphere(int k, bool smash_model) {
    if (k == 0) return discrete_plus(1);
    if (!smash_model) return delta_quotient(k);
    sset s1 = delta_quotient(1);
    sset acc = s1;
    for (int i = 1; i < k; ++i) acc = smash_product({&s1, &acc}).space;
    return acc;
}

namespace {

// all refs of dimension m over non-basepoint simplices
std::vector<sref> refs_of_dim(const sset& k, int m) {
    std::vector<sref> out;
    for (int d = 0; d <= std::min(m, k.dim()); ++d)
        for (int id = 0; id < k.count[d]; ++id) {
            if (d == 0 && id == k.base) continue;
            // monotone surjections [m] ->> [d]: choose the d ascent positions
            std::vector<int> jumps(static_cast<size_t>(d));
            for (int t = 0; t < d; ++t) jumps[t] = t;
            for (;;) {
                std::vector<int> alpha(static_cast<size_t>(m + 1), 0);
                {
                    std::vector<char> isj(static_cast<size_t>(m), 0);
                    for (int j : jumps) isj[j] = 1;
                    for (int t = 0; t < m; ++t) alpha[t + 1] = alpha[t] + (isj[t] ? 1 : 0);
                }
                out.push_back(sref{d, id, std::move(alpha)});
                int t = d - 1;
                while (t >= 0 && jumps[t] == m - d + t) --t;
                if (t < 0) break;
                ++jumps[t];
                for (int u = t + 1; u < d; ++u) jumps[u] = jumps[u - 1] + 1;
            }
        }
    return out;
}

std::vector<int> tuple_key(const std::vector<sref>& tuple) {
    std::vector<int> key;
    for (const sref& r : tuple) {
        std::vector<int> k = r.key();
        key.insert(key.end(), k.begin(), k.end());
    }
    return key;
}

bool jointly_nondeg(const std::vector<sref>& tuple, int m) {
    for (int j = 0; j < m; ++j) {
        bool all = true;
        for (const sref& r : tuple)
            if (r.alpha[j] != r.alpha[j + 1]) {
                all = false;
                break;
            }
        if (all) return false;
    }
    return true;
}

std::string coord_name(const sset& k, const sref& r) {
    std::string s = k.names[r.d][r.id];
    if (r.degenerate()) {
        s += ".";
        for (int v : r.alpha) s += std::to_string(v);
    }
    return s;
}

}  // namespace

int smash_result::find(int dim, const std::vector<sref>& tuple) const {
    if (dim < 0 || dim >= static_cast<int>(index.size())) return -1;
    auto it = index[dim].find(tuple_key(tuple));
    return it == index[dim].end() ? -1 : it->second;
}

sref smash_result::normalize(const std::vector<const sset*>& factors,
                             const std::vector<sref>& tuple) const {
    int m = tuple[0].dim();
    for (size_t f = 0; f < tuple.size(); ++f)
        if (tuple[f].d == 0 && tuple[f].id == factors[f]->base)
            return sref{0, space.base, std::vector<int>(static_cast<size_t>(m + 1), 0)};
    // gamma collapses the positions where every coordinate is degenerate
    std::vector<int> gamma(static_cast<size_t>(m + 1), 0);
    for (int t = 0; t < m; ++t) {
        bool jump = false;
        for (const sref& r : tuple)
            if (r.alpha[t] != r.alpha[t + 1]) {
                jump = true;
                break;
            }
        gamma[t + 1] = gamma[t] + (jump ? 1 : 0);
    }
    int c = gamma[m];
    std::vector<sref> core(tuple.size());
    for (size_t f = 0; f < tuple.size(); ++f) {
        std::vector<int> a(static_cast<size_t>(c + 1));
        int pos = 0;
        for (int t = 0; t <= m; ++t)
            if (t == 0 || gamma[t] != gamma[t - 1]) a[pos++] = tuple[f].alpha[t];
        core[f] = sref{tuple[f].d, tuple[f].id, std::move(a)};
    }
    int cid = find(c, core);
    if (cid < 0) throw std::logic_error("smash: normalize missed");
    return sref{c, cid, std::move(gamma)};
}

smash_result smash_product(const std::vector<const sset*>& factors) {
    int nf = static_cast<int>(factors.size());
    int top = 0;
    for (const sset* f : factors) top += f->dim();
    smash_result out;
    out.space.count.assign(static_cast<size_t>(top + 1), 0);
    out.space.faces.resize(static_cast<size_t>(top + 1));
    out.space.names.resize(static_cast<size_t>(top + 1));
    out.coords.resize(static_cast<size_t>(top + 1));
    out.index.resize(static_cast<size_t>(top + 1));
    // basepoint first
    out.space.names[0].push_back("*");
    {
        std::vector<sref> bt;
        for (const sset* f : factors) bt.push_back(nondeg_ref(0, f->base));
        out.coords[0].push_back(bt);
        out.index[0][tuple_key(bt)] = 0;
    }
    out.space.count[0] = 1;
    for (int m = 0; m <= top; ++m) {
        std::vector<std::vector<sref>> per(static_cast<size_t>(nf));
        bool any_empty = false;
        for (int f = 0; f < nf; ++f) {
            per[f] = refs_of_dim(*factors[f], m);
            if (per[f].empty()) any_empty = true;
        }
        if (any_empty) continue;
        std::vector<size_t> pos(static_cast<size_t>(nf), 0);
        for (;;) {
            std::vector<sref> tuple(static_cast<size_t>(nf));
            for (int f = 0; f < nf; ++f) tuple[f] = per[f][pos[f]];
            if (jointly_nondeg(tuple, m)) {
                int id = out.space.count[m]++;
                out.index[m][tuple_key(tuple)] = id;
                out.coords[m].push_back(tuple);
                std::string nm;
                for (int f = 0; f < nf; ++f) {
                    if (f) nm += "|";
                    nm += coord_name(*factors[f], tuple[f]);
                }
                out.space.names[m].push_back(nm);
            }
            int f = nf;
            while (f > 0 && ++pos[f - 1] == per[f - 1].size()) pos[--f] = 0;
            if (f == 0) break;
        }
    }
    // trim trailing empty dimensions
    while (out.space.count.size() > 1 && out.space.count.back() == 0) {
        out.space.count.pop_back();
        out.space.faces.pop_back();
        out.space.names.pop_back();
        out.coords.pop_back();
        out.index.pop_back();
    }
    for (int m = 1; m <= out.space.dim(); ++m) {
        out.space.faces[m].resize(static_cast<size_t>(out.space.count[m]));
        for (int id = 0; id < out.space.count[m]; ++id) {
            for (int i = 0; i <= m; ++i) {
                std::vector<sref> ft(static_cast<size_t>(nf));
                for (int f = 0; f < nf; ++f) ft[f] = factors[f]->face(out.coords[m][id][f], i);
                out.space.faces[m][id].push_back(out.normalize(factors, ft));
            }
        }
    }
    out.space.validate();
    return out;
}

smash_result smash_power(const sset& k, int n) {
    return smash_product(std::vector<const sset*>(static_cast<size_t>(n), &k));
}

int permute_simplex(const smash_result& sp, int dim, int id, const perm& p) {
    const std::vector<sref>& tuple = sp.coords[dim][id];
    std::vector<sref> t2(tuple.size());
    for (size_t i = 0; i < tuple.size(); ++i) t2[i] = tuple[p[i]];
    int r = sp.find(dim, t2);
    if (r < 0) throw std::logic_error("smash: permuted simplex missed");
    return r;
}

sset_part sub_sset(const sset& k, const std::vector<std::vector<char>>& keep) {
    if (!keep[0][k.base]) throw std::logic_error("sub_sset: basepoint not kept");
    sset_part out;
    out.parent_id.resize(keep.size());
    std::vector<std::vector<int>> to_new(keep.size());
    out.space.count.assign(keep.size(), 0);
    out.space.faces.resize(keep.size());
    out.space.names.resize(keep.size());
    for (size_t m = 0; m < keep.size(); ++m) {
        to_new[m].assign(keep[m].size(), -1);
        for (size_t id = 0; id < keep[m].size(); ++id)
            if (keep[m][id]) {
                to_new[m][id] = out.space.count[m]++;
                out.parent_id[m].push_back(static_cast<int>(id));
                out.space.names[m].push_back(k.names[m][id]);
            }
    }
    out.space.base = to_new[0][k.base];
    for (size_t m = 1; m < keep.size(); ++m) {
        out.space.faces[m].resize(static_cast<size_t>(out.space.count[m]));
        for (int nid = 0; nid < out.space.count[m]; ++nid) {
            for (const sref& fr : k.faces[m][out.parent_id[m][nid]]) {
                if (to_new[fr.d][fr.id] < 0) throw std::logic_error("sub_sset: not face-closed");
                out.space.faces[m][nid].push_back(sref{fr.d, to_new[fr.d][fr.id], fr.alpha});
            }
        }
    }
    while (out.space.count.size() > 1 && out.space.count.back() == 0) {
        out.space.count.pop_back();
        out.space.faces.pop_back();
        out.space.names.pop_back();
        out.parent_id.pop_back();
    }
    out.space.validate();
    return out;
}

sset_quot quotient_sset(const sset& k, const std::vector<std::vector<char>>& collapse) {
    if (!collapse[0][k.base]) throw std::logic_error("quotient: basepoint not collapsed");
    for (size_t m = 1; m < collapse.size(); ++m)
        for (size_t id = 0; id < collapse[m].size(); ++id)
            if (collapse[m][id])
                for (const sref& fr : k.faces[m][id])
                    if (!(fr.d == 0 && fr.id == k.base) && !collapse[fr.d][fr.id])
                        throw std::logic_error("quotient: not face-closed");
    sset_quot out;
    out.image_id.resize(collapse.size());
    out.space.count.assign(collapse.size(), 0);
    out.space.faces.resize(collapse.size());
    out.space.names.resize(collapse.size());
    out.space.names[0].push_back("*");
    out.space.count[0] = 1;
    for (size_t m = 0; m < collapse.size(); ++m) {
        out.image_id[m].assign(collapse[m].size(), -1);
        for (size_t id = 0; id < collapse[m].size(); ++id) {
            if (collapse[m][id]) continue;
            out.image_id[m][id] = out.space.count[m]++;
            out.space.names[m].push_back(k.names[m][id]);
        }
    }
    for (size_t m = 1; m < collapse.size(); ++m) {
        out.space.faces[m].resize(static_cast<size_t>(out.space.count[m]));
        for (size_t id = 0; id < collapse[m].size(); ++id) {
            if (collapse[m][id]) continue;
            auto& fl = out.space.faces[m][out.image_id[m][id]];
            for (const sref& fr : k.faces[m][id]) {
                int ni = out.image_id[fr.d][fr.id];
                if (ni < 0)
                    fl.push_back(out.space.base_ref(static_cast<int>(m) - 1));
                else
                    fl.push_back(sref{fr.d, ni, fr.alpha});
            }
        }
    }
    while (out.space.count.size() > 1 && out.space.count.back() == 0) {
        out.space.count.pop_back();
        out.space.faces.pop_back();
        out.space.names.pop_back();
        out.image_id.pop_back();
    }
    out.space.validate();
    return out;
}

std::vector<std::vector<char>> distinct_filter(const smash_result& sp, int r) {
    std::vector<std::vector<char>> keep(sp.coords.size());
    for (size_t m = 0; m < sp.coords.size(); ++m) {
        keep[m].assign(sp.coords[m].size(), 0);
        for (size_t id = 0; id < sp.coords[m].size(); ++id) {
            std::vector<sref> distinct;
            for (const sref& c : sp.coords[m][id])
                if (std::find(distinct.begin(), distinct.end(), c) == distinct.end())
                    distinct.push_back(c);
            if (static_cast<int>(distinct.size()) <= r) keep[m][id] = 1;
        }
    }
    return keep;
}

int chain_pos(const sset& k, int m, int id) {
    if (m == 0) return id < k.base ? id : id - 1;
    return id;
}

chain_complex reduced_chains(const sset& k, const field& f) {
    chain_complex c(f);
    for (int m = 0; m <= k.dim(); ++m) {
        std::vector<basis_label> labels;
        for (int id = 0; id < k.count[m]; ++id) {
            if (m == 0 && id == k.base) continue;
            labels.push_back(basis_label{k.names[m][id], 0});
        }
        if (!labels.empty()) c.set_basis(m, std::move(labels));
    }
    for (int m = 1; m <= k.dim(); ++m) {
        if (c.dim(m) == 0) continue;
        sparse_matrix d(f, c.dim(m - 1), c.dim(m));
        for (int id = 0; id < k.count[m]; ++id) {
            for (int i = 0; i <= m; ++i) {
                const sref& fr = k.faces[m][id][i];
                if (fr.degenerate() || k.is_base(fr)) continue;
                d.add_to(chain_pos(k, m - 1, fr.id), chain_pos(k, m, id),
                         scalar(f, i % 2 == 0 ? 1 : -1));
            }
        }
        c.set_differential(m, d);
    }
    c.validate();
    return c;
}

equivariant_complex smash_chains(const smash_result& sp, const field& f) {
    int n = sp.arity();
    equivariant_complex e(reduced_chains(sp.space, f), n);
    for (int q = 0; q <= sp.space.dim(); ++q) {
        int dim = e.complex().dim(q);
        if (dim == 0) continue;
        for (int i = 0; i + 1 < n; ++i) {
            perm s = perm_identity(n);
            std::swap(s[i], s[i + 1]);
            sparse_matrix g(f, dim, dim);
            for (int id = 0; id < sp.space.count[q]; ++id) {
                if (q == 0 && id == sp.space.base) continue;
                g.set(chain_pos(sp.space, q, permute_simplex(sp, q, id, s)),
                      chain_pos(sp.space, q, id), scalar::one(f));
            }
            e.set_generator(q, i, g);
        }
    }
    e.validate();
    return e;
}

chain_map chains_inclusion(const sset_part& part, const sset& parent, const field& f) {
    chain_complex src = reduced_chains(part.space, f);
    chain_complex tgt = reduced_chains(parent, f);
    chain_map out{src, tgt, {}};
    for (int m = 0; m <= part.space.dim(); ++m) {
        if (src.dim(m) == 0) continue;
        sparse_matrix mm(f, tgt.dim(m), src.dim(m));
        for (int id = 0; id < part.space.count[m]; ++id) {
            if (m == 0 && id == part.space.base) continue;
            mm.set(chain_pos(parent, m, part.parent_id[m][id]), chain_pos(part.space, m, id),
                   scalar::one(f));
        }
        out.set_component(m, mm);
    }
    if (!out.is_chain_map()) throw std::logic_error("chains_inclusion: not a chain map");
    return out;
}

chain_map chains_projection(const sset& parent, const sset_quot& quot, const field& f) {
    chain_complex src = reduced_chains(parent, f);
    chain_complex tgt = reduced_chains(quot.space, f);
    chain_map out{src, tgt, {}};
    for (int m = 0; m <= parent.dim(); ++m) {
        if (src.dim(m) == 0) continue;
        sparse_matrix mm(f, tgt.dim(m), src.dim(m));
        for (int id = 0; id < parent.count[m]; ++id) {
            if (m == 0 && id == parent.base) continue;
            if (m >= static_cast<int>(quot.image_id.size())) continue;
            int ni = quot.image_id[m][id];
            if (ni >= 0) mm.set(chain_pos(quot.space, m, ni), chain_pos(parent, m, id), scalar::one(f));
        }
        out.set_component(m, mm);
    }
    if (!out.is_chain_map()) throw std::logic_error("chains_projection: not a chain map");
    return out;
}

}  // namespace opf

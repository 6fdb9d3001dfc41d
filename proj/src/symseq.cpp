#include "operadforge/symseq.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "operadforge/parallel.hpp"

namespace opf {

// --- basis_table -----------------------------------------------------------

int basis_table::add(std::vector<int> key, int degree, int weight) {
    int id = static_cast<int>(keys_.size());
    auto [it, fresh] = index_.emplace(std::move(key), id);
    if (!fresh) throw std::logic_error("basis_table: duplicate key");
    keys_.push_back(it->first);
    degree_.push_back(degree);
    weight_.push_back(weight);
    auto& bucket = by_deg_[degree];
    pos_.push_back(static_cast<int>(bucket.size()));
    bucket.push_back(id);
    return id;
}

int basis_table::find(const std::vector<int>& key) const {
    auto it = index_.find(key);
    return it == index_.end() ? -1 : it->second;
}

int basis_table::dim(int deg) const {
    auto it = by_deg_.find(deg);
    return it == by_deg_.end() ? 0 : static_cast<int>(it->second.size());
}

const std::vector<int>& basis_table::ids(int deg) const {
    static const std::vector<int> empty;
    auto it = by_deg_.find(deg);
    return it == by_deg_.end() ? empty : it->second;
}

std::vector<int> basis_table::degrees() const {
    std::vector<int> out;
    for (const auto& [q, b] : by_deg_)
        if (!b.empty()) out.push_back(q);
    return out;
}

table_map_builder::table_map_builder(const basis_table& src, const basis_table& tgt, int deg_shift)
    : src_(src), tgt_(tgt), shift_(deg_shift) {}

void table_map_builder::add(int src_id, int tgt_id, const scalar& c) {
    if (c.is_zero()) return;
    int q = src_.degree(src_id);
    if (tgt_.degree(tgt_id) != q + shift_) throw std::logic_error("table_map_builder: degree mismatch");
    auto& m = entries_[q];
    auto key = std::make_pair(tgt_.pos(tgt_id), src_.pos(src_id));
    auto it = m.find(key);
    if (it == m.end())
        m.emplace(key, c);
    else {
        it->second = it->second + c;
        if (it->second.is_zero()) m.erase(it);
    }
}

std::map<int, sparse_matrix> table_map_builder::matrices(const field& f) const {
    std::map<int, sparse_matrix> out;
    for (const auto& [q, m] : entries_) {
        sparse_matrix mat(f, tgt_.dim(q + shift_), src_.dim(q));
        for (const auto& [rc, v] : m) mat.set(rc.first, rc.second, v);
        out.emplace(q, std::move(mat));
    }
    return out;
}

// --- sym_seq ---------------------------------------------------------------

sym_seq::sym_seq(const field& f, int max_arity) : f_(f), max_arity_(max_arity) {
    levels_.reserve(static_cast<size_t>(max_arity + 1));
    for (int n = 0; n <= max_arity; ++n) levels_.emplace_back(chain_complex(f), n);
}

void sym_seq::set_level(int n, equivariant_complex e) {
    if (e.group_arity() != n) throw std::invalid_argument("sym_seq::set_level: group arity mismatch");
    levels_[n] = std::move(e);
}

bool sym_seq::is_zero() const { return total_dim() == 0; }

int sym_seq::total_dim() const {
    int t = 0;
    for (const auto& l : levels_) t += l.complex().total_dim();
    return t;
}

void sym_seq::validate() const {
    for (const auto& l : levels_) {
        l.complex().validate();
        l.validate();
    }
}

sparse_matrix seq_map::component(int n, int q) const {
    if (n < static_cast<int>(comp.size())) {
        auto it = comp[n].find(q);
        if (it != comp[n].end()) return it->second;
    }
    return sparse_matrix(src.fld(), tgt.level(n).complex().dim(q), src.level(n).complex().dim(q));
}

void seq_map::set_component(int n, int q, sparse_matrix m) {
    if (static_cast<int>(comp.size()) <= n) comp.resize(static_cast<size_t>(n + 1));
    if (m.is_zero())
        comp[n].erase(q);
    else
        comp[n][q] = std::move(m);
}

void seq_map::set_level(int n, const std::map<int, sparse_matrix>& mats) {
    for (const auto& [q, m] : mats) set_component(n, q, m);
}

chain_map seq_map::level_map(int n) const {
    chain_map f{src.level(n).complex(), tgt.level(n).complex(), {}};
    for (int q : f.src.degrees()) f.set_component(q, component(n, q));
    return f;
}

bool seq_map::is_chain_map() const {
    for (int n = 0; n <= src.max_arity(); ++n)
        if (!level_map(n).is_chain_map()) return false;
    return true;
}

bool seq_map::is_equivariant() const {
    for (int n = 0; n <= src.max_arity(); ++n)
        for (int i = 0; i + 1 < n; ++i)
            for (int q : src.level(n).complex().degrees())
                if (tgt.level(n).generator(q, i) * component(n, q) !=
                    component(n, q) * src.level(n).generator(q, i))
                    return false;
    return true;
}

seq_map seq_identity(const sym_seq& m) {
    seq_map f{m, m, {}};
    for (int n = 0; n <= m.max_arity(); ++n)
        for (int q : m.level(n).complex().degrees())
            f.set_component(n, q, sparse_matrix::identity(m.fld(), m.level(n).complex().dim(q)));
    return f;
}

seq_map seq_compose(const seq_map& g, const seq_map& f) {
    seq_map out{f.src, g.tgt, {}};
    for (int n = 0; n <= f.src.max_arity(); ++n)
        for (int q : f.src.level(n).complex().degrees())
            out.set_component(n, q, g.component(n, q) * f.component(n, q));
    return out;
}

bool seq_is_iso(const seq_map& f) {
    for (int n = 0; n <= f.src.max_arity(); ++n) {
        const chain_complex& s = f.src.level(n).complex();
        const chain_complex& t = f.tgt.level(n).complex();
        std::vector<int> degs = s.degrees();
        for (int q : t.degrees())
            if (std::find(degs.begin(), degs.end(), q) == degs.end()) degs.push_back(q);
        for (int q : degs) {
            if (s.dim(q) != t.dim(q)) return false;
            if (rank(f.component(n, q)) != s.dim(q)) return false;
        }
    }
    return f.is_chain_map();
}

bool seq_is_levelwise_quasi_iso(const seq_map& f) {
    for (int n = 0; n <= f.src.max_arity(); ++n)
        if (!is_quasi_iso(f.level_map(n))) return false;
    return true;
}

seq_map seq_inverse(const seq_map& f) {
    seq_map out{f.tgt, f.src, {}};
    for (int n = 0; n <= f.src.max_arity(); ++n) {
        for (int q : f.tgt.level(n).complex().degrees()) {
            sparse_matrix m = f.component(n, q);
            if (m.rows() != m.cols()) throw std::logic_error("seq_inverse: not square");
            auto inv = solve(m, sparse_matrix::identity(f.src.fld(), m.rows()));
            if (!inv) throw std::logic_error("seq_inverse: not invertible");
            out.set_component(n, q, *inv);
        }
    }
    return out;
}

// --- basic sequences -------------------------------------------------------

sym_seq embed_i_n(const equivariant_complex& x, int n, int max_arity) {
    sym_seq out(x.complex().fld(), max_arity);
    if (n <= max_arity) out.set_level(n, x);
    return out;
}

static equivariant_complex unit_level(const field& f, int n) {
    chain_complex c(f);
    c.set_basis(0, {basis_label{"u", 0}});
    return equivariant_complex(std::move(c), n);
}

sym_seq unit_seq(const field& f, int max_arity) {
    sym_seq out(f, max_arity);
    if (max_arity >= 1) out.set_level(1, unit_level(f, 1));
    return out;
}

sym_seq zero_seq(const field& f, int max_arity) { return sym_seq(f, max_arity); }

sym_seq com_seq(const field& f, int max_arity) {
    sym_seq out(f, max_arity);
    for (int n = 1; n <= max_arity; ++n) out.set_level(n, unit_level(f, n));
    return out;
}

sym_seq surjection_seq(const field& f, int r, int max_arity) {
    sym_seq out(f, max_arity);
    for (int n = r; n <= max_arity; ++n) {
        std::vector<surjection> epis = epi_set(n, r);
        chain_complex c(f);
        std::vector<basis_label> labels;
        for (const auto& e : epis) {
            std::string name = "e";
            for (int v : e.vals) name += std::to_string(v);
            labels.push_back(basis_label{name, 0});
        }
        c.set_basis(0, labels);
        equivariant_complex eq(std::move(c), n);
        for (int i = 0; i + 1 < n; ++i) {
            sparse_matrix g(f, static_cast<int>(epis.size()), static_cast<int>(epis.size()));
            for (size_t j = 0; j < epis.size(); ++j) {
                surjection t = epis[j];
                std::swap(t.vals[i], t.vals[i + 1]);  // precompose with s_i
                auto it = std::lower_bound(epis.begin(), epis.end(), t);
                g.set(static_cast<int>(it - epis.begin()), static_cast<int>(j), scalar::one(f));
            }
            eq.set_generator(0, i, g);
        }
        out.set_level(n, eq);
    }
    return out;
}

sym_seq truncate_seq(const sym_seq& m, int max_arity) {
    sym_seq out(m.fld(), max_arity);
    for (int n = 0; n <= std::min(max_arity, m.max_arity()); ++n) out.set_level(n, m.level(n));
    return out;
}

// --- circle product --------------------------------------------------------

std::vector<std::pair<int, int>> flat_basis(const chain_complex& x) {
    std::vector<std::pair<int, int>> out;
    for (int q : x.degrees())
        for (int i = 0; i < x.dim(q); ++i) out.emplace_back(q, i);
    return out;
}

std::vector<int> circle_key::key() const {
    std::vector<int> k{r, phi, m_deg, m_idx};
    for (auto [d, i] : xs) {
        k.push_back(d);
        k.push_back(i);
    }
    return k;
}

circle_key circle_key::decode(const std::vector<int>& k) {
    circle_key e;
    e.r = k[0];
    e.phi = k[1];
    e.m_deg = k[2];
    e.m_idx = k[3];
    for (size_t j = 4; j + 1 < k.size(); j += 2) e.xs.emplace_back(k[j], k[j + 1]);
    return e;
}

namespace {

using circle_elt = circle_key;

std::string circle_name(const circle_elt& e) {
    std::ostringstream os;
    os << e.r << "." << e.phi << "." << e.m_deg << "/" << e.m_idx;
    for (auto [d, i] : e.xs) os << "." << d << "/" << i;
    return os.str();
}

int label_weight(const chain_complex& c, int deg, int idx) { return c.labels(deg)[idx].weight; }

}  // namespace

circle_product circle(const sym_seq& m, const sym_seq& n) {
    if (!n.reduced()) throw std::invalid_argument("circle: right factor must be reduced");
    const field& f = m.fld();
    int cap = m.max_arity();
    circle_product out;
    out.m_factor = m;
    out.n_factor = n;
    out.seq = sym_seq(f, cap);
    out.levels.resize(static_cast<size_t>(cap + 1));

    for (int lev = 1; lev <= cap; ++lev) {
        basis_table& table = out.levels[lev];
        // enumerate basis: r ascending, phi lex, M-part flat, factors lex
        for (int r = 1; r <= lev; ++r) {
            const chain_complex& mc = m.level(r).complex();
            if (mc.total_dim() == 0) continue;
            const auto& reps = orbit_reps(lev, r);
            for (int p = 0; p < static_cast<int>(reps.size()); ++p) {
                std::vector<int> fs = fiber_sizes(reps[p]);
                bool any_zero = false;
                std::vector<std::vector<std::pair<int, int>>> factor_basis(fs.size());
                for (size_t k = 0; k < fs.size(); ++k) {
                    factor_basis[k] = flat_basis(n.level(fs[k]).complex());
                    if (factor_basis[k].empty()) any_zero = true;
                }
                if (any_zero) continue;
                for (auto [mdeg, midx] : flat_basis(mc)) {
                    int base_w = label_weight(mc, mdeg, midx);
                    circle_elt e;
                    e.r = r;
                    e.phi = p;
                    e.m_deg = mdeg;
                    e.m_idx = midx;
                    e.xs.assign(fs.size(), {0, 0});
                    // odometer over factor tuples
                    std::vector<size_t> pos(fs.size(), 0);
                    for (;;) {
                        int deg = mdeg, w = base_w;
                        for (size_t k = 0; k < fs.size(); ++k) {
                            e.xs[k] = factor_basis[k][pos[k]];
                            deg += e.xs[k].first;
                            w += label_weight(n.level(fs[k]).complex(), e.xs[k].first, e.xs[k].second);
                        }
                        if (w <= cap) table.add(e.key(), deg, w);
                        size_t k = fs.size();
                        while (k > 0 && ++pos[k - 1] == factor_basis[k - 1].size()) pos[--k] = 0;
                        if (k == 0) break;
                    }
                }
            }
        }

        // complex with labels
        chain_complex c(f);
        for (int q : table.degrees()) {
            std::vector<basis_label> labels;
            for (int id : table.ids(q)) {
                circle_elt e = circle_elt::decode(table.key(id));
                labels.push_back(basis_label{circle_name(e), table.weight(id)});
            }
            c.set_basis(q, std::move(labels));
        }

        // differential
        table_map_builder dbuild(table, table, -1);
        for (int id = 0; id < table.size(); ++id) {
            circle_elt e = circle_elt::decode(table.key(id));
            const chain_complex& mc = m.level(e.r).complex();
            std::vector<int> fs = fiber_sizes(orbit_reps(lev, e.r)[e.phi]);
            // d on the M part
            sparse_matrix dm = mc.d(e.m_deg);
            for (int row = 0; row < dm.rows(); ++row) {
                scalar v = dm.get(row, e.m_idx);
                if (v.is_zero()) continue;
                circle_elt t = e;
                t.m_deg = e.m_deg - 1;
                t.m_idx = row;
                int tid = table.find(t.key());
                if (tid >= 0) dbuild.add(id, tid, v);
            }
            // d on each factor with Koszul sign
            int sign_deg = e.m_deg;
            for (size_t k = 0; k < e.xs.size(); ++k) {
                const chain_complex& nc = n.level(fs[k]).complex();
                sparse_matrix dn = nc.d(e.xs[k].first);
                scalar sg = sign_deg % 2 == 0 ? scalar::one(f) : -scalar::one(f);
                for (int row = 0; row < dn.rows(); ++row) {
                    scalar v = dn.get(row, e.xs[k].second);
                    if (v.is_zero()) continue;
                    circle_elt t = e;
                    t.xs[k] = {e.xs[k].first - 1, row};
                    int tid = table.find(t.key());
                    if (tid >= 0) dbuild.add(id, tid, sg * v);
                }
                sign_deg += e.xs[k].first;
            }
        }
        for (auto& [q, mat] : dbuild.matrices(f)) c.set_differential(q, mat);

        equivariant_complex eq(std::move(c), lev);

        // Sigma_lev generators by precomposition
        std::map<std::vector<int>, sparse_matrix> act_cache;  // (r, deg, tau...) -> matrix
        for (int i = 0; i + 1 < lev; ++i) {
            table_map_builder gbuild(table, table, 0);
            for (int id = 0; id < table.size(); ++id) {
                circle_elt e = circle_elt::decode(table.key(id));
                const surjection& rho = orbit_reps(lev, e.r)[e.phi];
                std::vector<int> fs = fiber_sizes(rho);
                if (rho.vals[i] == rho.vals[i + 1]) {
                    // in-fiber adjacent transposition on factor k
                    int k = rho.vals[i];
                    int p = 0;
                    for (int t = 0; t < i; ++t)
                        if (rho.vals[t] == k) ++p;
                    const equivariant_complex& nl = n.level(fs[k]);
                    sparse_matrix g = nl.generator(e.xs[k].first, p);
                    for (int row = 0; row < g.rows(); ++row) {
                        scalar v = g.get(row, e.xs[k].second);
                        if (v.is_zero()) continue;
                        circle_elt t = e;
                        t.xs[k].second = row;
                        int tid = table.find(t.key());
                        if (tid >= 0) gbuild.add(id, tid, v);
                    }
                } else {
                    surjection psi = rho;
                    std::swap(psi.vals[i], psi.vals[i + 1]);
                    canonical_form cf = canonicalize(psi);
                    int new_phi = orbit_rep_index(cf.rep);
                    perm tau_inv = perm_inverse(cf.tau);
                    // Koszul sign: factor k moves to position tau_inv[k]
                    std::vector<int> degs(e.xs.size());
                    for (size_t k = 0; k < e.xs.size(); ++k) degs[k] = e.xs[k].first;
                    int ks = koszul_sign(tau_inv, degs);
                    // action of tau^{-1} on the M part
                    std::vector<int> ck{e.r, e.m_deg};
                    ck.insert(ck.end(), tau_inv.begin(), tau_inv.end());
                    auto it = act_cache.find(ck);
                    if (it == act_cache.end())
                        it = act_cache.emplace(ck, m.level(e.r).act(e.m_deg, tau_inv)).first;
                    const sparse_matrix& am = it->second;
                    scalar sg = ks == 1 ? scalar::one(f) : -scalar::one(f);
                    for (int row = 0; row < am.rows(); ++row) {
                        scalar v = am.get(row, e.m_idx);
                        if (v.is_zero()) continue;
                        circle_elt t;
                        t.r = e.r;
                        t.phi = new_phi;
                        t.m_deg = e.m_deg;
                        t.m_idx = row;
                        t.xs.resize(e.xs.size());
                        for (size_t j = 0; j < e.xs.size(); ++j) t.xs[j] = e.xs[cf.tau[j]];
                        int tid = table.find(t.key());
                        if (tid >= 0) gbuild.add(id, tid, sg * v);
                    }
                }
            }
            for (auto& [q, mat] : gbuild.matrices(f)) eq.set_generator(q, i, mat);
        }

        out.seq.set_level(lev, std::move(eq));
    }
    return out;
}

seq_map circle_map(const circle_product& cp_src, const circle_product& cp_tgt, const seq_map& f,
                   const seq_map& g) {
    const field& fl = cp_src.seq.fld();
    seq_map out{cp_src.seq, cp_tgt.seq, {}};
    for (int lev = 1; lev <= cp_src.seq.max_arity(); ++lev) {
        const basis_table& st = cp_src.levels[lev];
        const basis_table& tt = cp_tgt.levels[lev];
        table_map_builder build(st, tt, 0);
        for (int id = 0; id < st.size(); ++id) {
            circle_elt e = circle_elt::decode(st.key(id));
            std::vector<int> fs = fiber_sizes(orbit_reps(lev, e.r)[e.phi]);
            sparse_matrix fm = f.component(e.r, e.m_deg);
            // expand the product of matrix columns factor by factor
            std::vector<std::pair<circle_elt, scalar>> images;
            for (int row = 0; row < fm.rows(); ++row) {
                scalar v = fm.get(row, e.m_idx);
                if (v.is_zero()) continue;
                circle_elt t = e;
                t.m_idx = row;
                images.emplace_back(t, v);
            }
            for (size_t k = 0; k < e.xs.size() && !images.empty(); ++k) {
                sparse_matrix gm = g.component(fs[k], e.xs[k].first);
                std::vector<std::pair<circle_elt, scalar>> next;
                for (const auto& [t, v] : images)
                    for (int row = 0; row < gm.rows(); ++row) {
                        scalar w = gm.get(row, e.xs[k].second);
                        if (w.is_zero()) continue;
                        circle_elt t2 = t;
                        t2.xs[k].second = row;
                        next.emplace_back(t2, v * w);
                    }
                images = std::move(next);
            }
            for (const auto& [t, v] : images) {
                int tid = tt.find(t.key());
                if (tid >= 0) build.add(id, tid, v);
            }
        }
        out.set_level(lev, build.matrices(fl));
    }
    return out;
}

seq_map circle_unit_right(const sym_seq& m, const circle_product& m_com) {
    const field& f = m.fld();
    seq_map out{m, m_com.seq, {}};
    for (int lev = 1; lev <= m.max_arity(); ++lev) {
        const basis_table& tt = m_com.levels[lev];
        for (int q : m.level(lev).complex().degrees()) {
            sparse_matrix mat(f, tt.dim(q), m.level(lev).complex().dim(q));
            for (int idx = 0; idx < m.level(lev).complex().dim(q); ++idx) {
                circle_elt e;
                e.r = lev;
                e.phi = 0;  // identity is the unique representative in Epi(lev, lev)
                e.m_deg = q;
                e.m_idx = idx;
                e.xs.assign(static_cast<size_t>(lev), {0, 0});
                int tid = tt.find(e.key());
                if (tid >= 0) mat.set(tt.pos(tid), idx, scalar::one(f));
            }
            out.set_component(lev, q, mat);
        }
    }
    return out;
}

seq_map circle_unit_iso_right(const circle_product& m_s1) {
    const field& f = m_s1.seq.fld();
    seq_map out{m_s1.seq, m_s1.m_factor, {}};
    for (int lev = 1; lev <= m_s1.seq.max_arity(); ++lev) {
        const basis_table& t = m_s1.levels[lev];
        for (int q : t.degrees()) {
            sparse_matrix mat(f, m_s1.m_factor.level(lev).complex().dim(q), t.dim(q));
            for (int id : t.ids(q)) {
                circle_elt e = circle_elt::decode(t.key(id));
                mat.set(e.m_idx, t.pos(id), scalar::one(f));
            }
            out.set_component(lev, q, mat);
        }
    }
    return out;
}

seq_map circle_unit_iso_left(const circle_product& s1_m) {
    const field& f = s1_m.seq.fld();
    seq_map out{s1_m.seq, s1_m.n_factor, {}};
    for (int lev = 1; lev <= s1_m.seq.max_arity(); ++lev) {
        const basis_table& t = s1_m.levels[lev];
        for (int q : t.degrees()) {
            sparse_matrix mat(f, s1_m.n_factor.level(lev).complex().dim(q), t.dim(q));
            for (int id : t.ids(q)) {
                circle_elt e = circle_elt::decode(t.key(id));
                mat.set(e.xs[0].second, t.pos(id), scalar::one(f));
            }
            out.set_component(lev, q, mat);
        }
    }
    return out;
}

seq_map assoc_to_left(const circle_product& bc, const circle_product& a_bc, const circle_product& ab,
                      const circle_product& ab_c) {
    const field& f = a_bc.seq.fld();
    seq_map out{a_bc.seq, ab_c.seq, {}};
    std::map<std::vector<int>, sparse_matrix> act_cache;  // (m, deg, tau...) -> action on AB(m)

    for (int lev = 1; lev <= a_bc.seq.max_arity(); ++lev) {
        const basis_table& st = a_bc.levels[lev];
        const basis_table& tt = ab_c.levels[lev];
        table_map_builder build(st, tt, 0);
        for (int id = 0; id < st.size(); ++id) {
            circle_elt e = circle_elt::decode(st.key(id));  // (chi, a, v_1..v_r), v_k in (BoC)(n_k)
            const surjection& chi = orbit_reps(lev, e.r)[e.phi];
            std::vector<std::vector<int>> chi_fibers = fibers(chi);
            std::vector<int> chi_fs = fiber_sizes(chi);

            // decode every v_k
            std::vector<circle_elt> v(e.xs.size());
            std::vector<int> mk(e.xs.size());
            for (size_t k = 0; k < e.xs.size(); ++k) {
                const basis_table& bt = bc.levels[chi_fs[k]];
                const auto& bucket = bt.ids(e.xs[k].first);
                v[k] = circle_elt::decode(bt.key(bucket[e.xs[k].second]));
                mk[k] = v[k].r;
            }
            int m_total = std::accumulate(mk.begin(), mk.end(), 0);
            std::vector<int> off(e.xs.size(), 0);
            for (size_t k = 1; k < e.xs.size(); ++k) off[k] = off[k - 1] + mk[k - 1];

            // psi: lev ->> m_total; rho: m_total ->> r are the blocks
            surjection psi{lev, m_total, std::vector<int>(static_cast<size_t>(lev), 0)};
            for (size_t k = 0; k < e.xs.size(); ++k) {
                const surjection& phik = orbit_reps(chi_fs[k], mk[k])[v[k].phi];
                for (int p = 0; p < chi_fs[k]; ++p) psi.vals[chi_fibers[k][p]] = off[k] + phik.vals[p];
            }
            surjection rho{m_total, e.r, std::vector<int>(static_cast<size_t>(m_total), 0)};
            for (size_t k = 0; k < e.xs.size(); ++k)
                for (int t = 0; t < mk[k]; ++t) rho.vals[off[k] + t] = static_cast<int>(k);

            // the middle element U = (rho, a, y_1..y_r) in (AoB)(m_total)
            circle_elt u;
            u.r = e.r;
            u.phi = orbit_rep_index(canonicalize(rho).rep);
            u.m_deg = e.m_deg;
            u.m_idx = e.m_idx;
            u.xs.resize(e.xs.size());
            int u_deg = e.m_deg;
            for (size_t k = 0; k < e.xs.size(); ++k) {
                u.xs[k] = {v[k].m_deg, v[k].m_idx};
                u_deg += v[k].m_deg;
            }
            const basis_table& abt = ab.levels[m_total];
            int uid = abt.find(u.key());
            if (uid < 0) continue;  // weight-truncated

            // the z factors in psi-fiber order (concatenation of the v_k
            // factors), with the Koszul sign for interleaving: the source
            // order is y_1 z^{(1)} y_2 z^{(2)} ..., the target pulls all y_k
            // to the front
            std::vector<std::pair<int, int>> z;
            std::vector<int> zdeg;
            perm interleave;
            std::vector<int> atom_deg;
            {
                int zcount = 0;
                for (const auto& vk : v) zcount += static_cast<int>(vk.xs.size());
                int zoff = 0;
                for (size_t k = 0; k < v.size(); ++k) {
                    interleave.push_back(static_cast<int>(k));
                    atom_deg.push_back(v[k].m_deg);
                    for (auto zz : v[k].xs) {
                        interleave.push_back(static_cast<int>(v.size()) + zoff++);
                        atom_deg.push_back(zz.first);
                        z.push_back(zz);
                        zdeg.push_back(zz.first);
                    }
                }
                (void)zcount;
            }
            int ks = koszul_sign(interleave, atom_deg);

            canonical_form cf = canonicalize(psi);
            perm tau_inv = perm_inverse(cf.tau);
            ks *= koszul_sign(tau_inv, zdeg);
            scalar sg = ks == 1 ? scalar::one(f) : -scalar::one(f);

            std::vector<int> ck{m_total, u_deg};
            ck.insert(ck.end(), tau_inv.begin(), tau_inv.end());
            auto it = act_cache.find(ck);
            if (it == act_cache.end())
                it = act_cache.emplace(ck, ab.seq.level(m_total).act(u_deg, tau_inv)).first;
            const sparse_matrix& am = it->second;
            int upos = abt.pos(uid);

            for (int row = 0; row < am.rows(); ++row) {
                scalar c = am.get(row, upos);
                if (c.is_zero()) continue;
                circle_elt t;
                t.r = m_total;
                t.phi = orbit_rep_index(cf.rep);
                t.m_deg = u_deg;
                t.m_idx = row;
                t.xs.resize(z.size());
                for (size_t j = 0; j < z.size(); ++j) t.xs[j] = z[cf.tau[j]];
                int tid = tt.find(t.key());
                if (tid >= 0) build.add(id, tid, sg * c);
            }
        }
        out.set_level(lev, build.matrices(f));
    }
    return out;
}

seq_map assoc_to_right(const circle_product& bc, const circle_product& a_bc, const circle_product& ab,
                       const circle_product& ab_c) {
    return seq_inverse(assoc_to_left(bc, a_bc, ab, ab_c));
}

// --- tensor product --------------------------------------------------------

namespace {

std::vector<std::vector<int>> subsets_of(int n, int l) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int start) -> void {
        if (static_cast<int>(cur.size()) == l) {
            out.push_back(cur);
            return;
        }
        for (int v = start; v < n; ++v) {
            cur.push_back(v);
            self(self, v + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

}  // namespace

tensor_seq_product tensor_seq(const sym_seq& m, const sym_seq& n) {
    const field& f = m.fld();
    int cap = m.max_arity();
    tensor_seq_product out;
    out.seq = sym_seq(f, cap);
    out.levels.resize(static_cast<size_t>(cap + 1));

    for (int lev = 0; lev <= cap; ++lev) {
        basis_table& table = out.levels[lev];
        for (int l = 0; l <= lev; ++l) {
            int mm = lev - l;
            const chain_complex& mc = m.level(l).complex();
            const chain_complex& nc = n.level(mm).complex();
            if (mc.total_dim() == 0 || nc.total_dim() == 0) continue;
            auto subs = subsets_of(lev, l);
            for (int si = 0; si < static_cast<int>(subs.size()); ++si)
                for (auto [ad, ai] : flat_basis(mc))
                    for (auto [bd, bi] : flat_basis(nc)) {
                        int w = label_weight(mc, ad, ai) + label_weight(nc, bd, bi);
                        if (w <= cap) table.add({l, si, ad, ai, bd, bi}, ad + bd, w);
                    }
        }
        chain_complex c(f);
        for (int q : table.degrees()) {
            std::vector<basis_label> labels;
            for (int id : table.ids(q)) {
                const auto& k = table.key(id);
                std::ostringstream os;
                os << "t" << k[0] << "." << k[1] << "." << k[2] << "/" << k[3] << "." << k[4] << "/" << k[5];
                labels.push_back(basis_label{os.str(), table.weight(id)});
            }
            c.set_basis(q, std::move(labels));
        }
        table_map_builder dbuild(table, table, -1);
        for (int id = 0; id < table.size(); ++id) {
            auto k = table.key(id);
            int l = k[0];
            const chain_complex& mc = m.level(l).complex();
            const chain_complex& nc = n.level(lev - l).complex();
            sparse_matrix da = mc.d(k[2]), db = nc.d(k[4]);
            for (int row = 0; row < da.rows(); ++row) {
                scalar v = da.get(row, k[3]);
                if (v.is_zero()) continue;
                std::vector<int> t = k;
                t[2] -= 1;
                t[3] = row;
                int tid = table.find(t);
                if (tid >= 0) dbuild.add(id, tid, v);
            }
            scalar sg = k[2] % 2 == 0 ? scalar::one(f) : -scalar::one(f);
            for (int row = 0; row < db.rows(); ++row) {
                scalar v = db.get(row, k[5]);
                if (v.is_zero()) continue;
                std::vector<int> t = k;
                t[4] -= 1;
                t[5] = row;
                int tid = table.find(t);
                if (tid >= 0) dbuild.add(id, tid, sg * v);
            }
        }
        for (auto& [q, mat] : dbuild.matrices(f)) c.set_differential(q, mat);

        equivariant_complex eq(std::move(c), lev);
        for (int i = 0; i + 1 < lev; ++i) {
            table_map_builder gbuild(table, table, 0);
            for (int id = 0; id < table.size(); ++id) {
                auto k = table.key(id);
                int l = k[0];
                auto subs = subsets_of(lev, l);
                const std::vector<int>& s = subs[k[1]];
                bool in_i = std::binary_search(s.begin(), s.end(), i);
                bool in_i1 = std::binary_search(s.begin(), s.end(), i + 1);
                if (in_i && in_i1) {
                    int p = static_cast<int>(std::lower_bound(s.begin(), s.end(), i) - s.begin());
                    sparse_matrix g = m.level(l).generator(k[2], p);
                    for (int row = 0; row < g.rows(); ++row) {
                        scalar v = g.get(row, k[3]);
                        if (v.is_zero()) continue;
                        std::vector<int> t = k;
                        t[3] = row;
                        int tid = table.find(t);
                        if (tid >= 0) gbuild.add(id, tid, v);
                    }
                } else if (!in_i && !in_i1) {
                    std::vector<int> comp;
                    for (int vpos = 0; vpos < lev; ++vpos)
                        if (!std::binary_search(s.begin(), s.end(), vpos)) comp.push_back(vpos);
                    int p = static_cast<int>(std::lower_bound(comp.begin(), comp.end(), i) - comp.begin());
                    sparse_matrix g = n.level(lev - l).generator(k[4], p);
                    for (int row = 0; row < g.rows(); ++row) {
                        scalar v = g.get(row, k[5]);
                        if (v.is_zero()) continue;
                        std::vector<int> t = k;
                        t[5] = row;
                        int tid = table.find(t);
                        if (tid >= 0) gbuild.add(id, tid, v);
                    }
                } else {
                    std::vector<int> s2 = s;
                    for (int& vpos : s2) {
                        if (vpos == i) vpos = i + 1;
                        else if (vpos == i + 1) vpos = i;
                    }
                    std::sort(s2.begin(), s2.end());
                    int si2 = static_cast<int>(std::lower_bound(subs.begin(), subs.end(), s2) - subs.begin());
                    std::vector<int> t = k;
                    t[1] = si2;
                    int tid = table.find(t);
                    if (tid >= 0) gbuild.add(id, tid, scalar::one(f));
                }
            }
            for (auto& [q, mat] : gbuild.matrices(f)) eq.set_generator(q, i, mat);
        }
        out.seq.set_level(lev, std::move(eq));
    }
    return out;
}

// --- extended powers -------------------------------------------------------

tensor_power power(const chain_complex& x, int r, int weight_cap) {
    const field& f = x.fld();
    tensor_power out;
    out.r = r;
    auto flat = flat_basis(x);
    std::vector<int> tuple(static_cast<size_t>(r), 0);
    if (r == 0) {
        out.table.add({}, 0, 0);
    } else if (!flat.empty()) {
        for (;;) {
            int deg = 0, w = 0;
            for (int j = 0; j < r; ++j) {
                auto [d, i] = flat[tuple[j]];
                deg += d;
                w += label_weight(x, d, i);
            }
            if (w <= weight_cap) out.table.add(tuple, deg, w);
            int j = r - 1;
            while (j >= 0 && ++tuple[j] == static_cast<int>(flat.size())) tuple[j--] = 0;
            if (j < 0) break;
        }
    }
    chain_complex c(f);
    for (int q : out.table.degrees()) {
        std::vector<basis_label> labels;
        for (int id : out.table.ids(q)) {
            std::string name;
            for (int t : out.table.key(id)) name += (name.empty() ? "" : "*") + x.labels(flat[t].first)[flat[t].second].name;
            labels.push_back(basis_label{name, out.table.weight(id)});
        }
        c.set_basis(q, std::move(labels));
    }
    // flat index -> position within degree, for differential columns
    table_map_builder dbuild(out.table, out.table, -1);
    // map (deg, idx) -> flat position
    std::map<std::pair<int, int>, int> flat_index;
    for (size_t t = 0; t < flat.size(); ++t) flat_index[flat[t]] = static_cast<int>(t);
    for (int id = 0; id < out.table.size(); ++id) {
        const auto& key = out.table.key(id);
        int sign_deg = 0;
        for (int j = 0; j < r; ++j) {
            auto [d, i] = flat[key[j]];
            sparse_matrix dx = x.d(d);
            scalar sg = sign_deg % 2 == 0 ? scalar::one(f) : -scalar::one(f);
            for (int row = 0; row < dx.rows(); ++row) {
                scalar v = dx.get(row, i);
                if (v.is_zero()) continue;
                auto it = flat_index.find({d - 1, row});
                if (it == flat_index.end()) continue;
                std::vector<int> t = key;
                t[j] = it->second;
                int tid = out.table.find(t);
                if (tid >= 0) dbuild.add(id, tid, sg * v);
            }
            sign_deg += d;
        }
    }
    for (auto& [q, mat] : dbuild.matrices(f)) c.set_differential(q, mat);
    out.complex = std::move(c);
    return out;
}

std::map<int, sparse_matrix> power_transposition(const chain_complex& x, const tensor_power& p, int i) {
    const field& f = x.fld();
    auto flat = flat_basis(x);
    table_map_builder build(p.table, p.table, 0);
    for (int id = 0; id < p.table.size(); ++id) {
        std::vector<int> key = p.table.key(id);
        int di = flat[key[i]].first, dj = flat[key[i + 1]].first;
        std::swap(key[i], key[i + 1]);
        int tid = p.table.find(key);
        if (tid < 0) continue;
        scalar sg = (di % 2 != 0 && dj % 2 != 0) ? -scalar::one(f) : scalar::one(f);
        build.add(id, tid, sg);
    }
    return build.matrices(f);
}

over_group_result over_group(const equivariant_complex& m, const chain_complex& x, int weight_cap) {
    const field& f = x.fld();
    int r = m.group_arity();
    over_group_result out;
    out.pow = power(x, r, weight_cap);
    for (int q : m.complex().degrees())
        for (int i = 0; i < m.complex().dim(q); ++i)
            if (m.complex().labels(q)[i].weight != 0)
                throw std::logic_error("over_group: left factor must carry weight 0");
    out.pre = tensor(m.complex(), out.pow.complex);
    equivariant_complex eq(out.pre, r);
    for (int i = 0; i + 1 < r; ++i) {
        std::map<int, sparse_matrix> trans = power_transposition(x, out.pow, i);
        for (int q : out.pre.degrees()) {
            sparse_matrix g(f, out.pre.dim(q), out.pre.dim(q));
            for (int qa : m.complex().degrees()) {
                int qb = q - qa;
                if (out.pow.complex.dim(qb) == 0) continue;
                sparse_matrix gm = m.generator(qa, i);
                sparse_matrix gt = trans.count(qb) ? trans.at(qb)
                                                   : sparse_matrix::identity(f, out.pow.complex.dim(qb));
                for (int ar = 0; ar < gm.rows(); ++ar)
                    for (const auto& [ac, av] : gm.row(ar))
                        for (int br = 0; br < gt.rows(); ++br)
                            for (const auto& [bc, bv] : gt.row(br))
                                g.add_to(tensor_index(m.complex(), out.pow.complex, q, qa, ar, br),
                                         tensor_index(m.complex(), out.pow.complex, q, qa, ac, bc),
                                         av * bv);
            }
            eq.set_generator(q, i, g);
        }
    }
    equivariant_complex::quotient quot = eq.coinvariants();
    out.complex = std::move(quot.complex);
    out.proj = std::move(quot.proj);
    out.section = std::move(quot.section);
    return out;
}

ext_power_result ext_power(const sym_seq& m, const chain_complex& x, int weight_cap) {
    ext_power_result out;
    out.lo = 1;
    out.hi = m.max_arity();
    out.parts.resize(static_cast<size_t>(out.hi + 1));
    out.offset.resize(static_cast<size_t>(out.hi + 1));
    chain_complex total(m.fld());
    std::map<int, std::vector<basis_label>> labels;
    for (int r = 1; r <= out.hi; ++r) {
        out.parts[r] = over_group(m.level(r), x, weight_cap);
        for (int q : out.parts[r].complex.degrees()) {
            out.offset[r][q] = static_cast<int>(labels[q].size());
            for (const auto& l : out.parts[r].complex.labels(q))
                labels[q].push_back(basis_label{"r" + std::to_string(r) + ":" + l.name, l.weight});
        }
    }
    for (auto& [q, ls] : labels) total.set_basis(q, std::move(ls));
    for (int q : total.degrees()) {
        sparse_matrix d(m.fld(), total.dim(q - 1), total.dim(q));
        for (int r = 1; r <= out.hi; ++r) {
            auto it = out.offset[r].find(q);
            if (it == out.offset[r].end()) continue;
            sparse_matrix dr = out.parts[r].complex.d(q);
            int roff = out.offset[r].count(q - 1) ? out.offset[r][q - 1] : 0;
            for (int i = 0; i < dr.rows(); ++i)
                for (const auto& [j, v] : dr.row(i)) d.set(roff + i, it->second + j, v);
        }
        total.set_differential(q, d);
    }
    out.complex = std::move(total);
    return out;
}

}  // namespace opf

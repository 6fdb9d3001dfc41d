#include "operadforge/module.hpp"

#include <algorithm>
#include <stdexcept>

namespace opf {

seq_map com_multiplication(const circle_product& cc, const sym_seq& com) {
    const field& f = com.fld();
    seq_map out{cc.seq, com, {}};
    for (int n = 1; n <= com.max_arity(); ++n) {
        const basis_table& t = cc.levels[n];
        for (int q : t.degrees()) {
            sparse_matrix m(f, com.level(n).complex().dim(q), t.dim(q));
            for (int id : t.ids(q)) m.set(0, t.pos(id), scalar::one(f));
            out.set_component(n, q, m);
        }
    }
    return out;
}

// --- right modules ---------------------------------------------------------

sparse_matrix right_module::delta_rep(int n, int r, int phi, int q) const {
    auto it = delta_reps.find({n, r, phi});
    if (it != delta_reps.end()) {
        auto jt = it->second.find(q);
        if (jt != it->second.end()) return jt->second;
    }
    return sparse_matrix(carrier.fld(), carrier.level(n).complex().dim(q),
                         carrier.level(r).complex().dim(q));
}

void right_module::set_delta(int n, int r, int phi, std::map<int, sparse_matrix> mats) {
    delta_reps[{n, r, phi}] = std::move(mats);
}

sparse_matrix right_module::delta(const surjection& phi, int q) const {
    canonical_form cf = canonicalize(phi);
    int p = orbit_rep_index(cf.rep);
    return delta_rep(phi.n, phi.r, p, q) * carrier.level(phi.r).act(q, perm_inverse(cf.tau));
}

seq_map right_module::action(const circle_product& m_com) const {
    const field& f = carrier.fld();
    seq_map out{m_com.seq, carrier, {}};
    for (int n = 1; n <= carrier.max_arity(); ++n) {
        const basis_table& t = m_com.levels[n];
        for (int q : t.degrees()) {
            sparse_matrix mat(f, carrier.level(n).complex().dim(q), t.dim(q));
            for (int id : t.ids(q)) {
                circle_key e = circle_key::decode(t.key(id));
                sparse_matrix dr = delta_rep(n, e.r, e.phi, q);
                for (int row = 0; row < dr.rows(); ++row) {
                    scalar v = dr.get(row, e.m_idx);
                    if (!v.is_zero()) mat.add_to(row, t.pos(id), v);
                }
            }
            out.set_component(n, q, mat);
        }
    }
    return out;
}

right_module com_module(const field& f, int cap) {
    right_module out;
    out.carrier = com_seq(f, cap);
    sparse_matrix one = sparse_matrix::identity(f, 1);
    for (int n = 1; n <= cap; ++n)
        for (int r = 1; r <= n; ++r)
            for (int p = 0; p < static_cast<int>(orbit_reps(n, r).size()); ++p)
                out.set_delta(n, r, p, {{0, one}});
    return out;
}

right_module s1_module(const field& f, int cap) {
    right_module out;
    out.carrier = unit_seq(f, cap);
    if (cap >= 1) out.set_delta(1, 1, 0, {{0, sparse_matrix::identity(f, 1)}});
    return out;
}

right_module free_right_module(const sym_seq& a) {
    return free_module_structure(circle(a, com_seq(a.fld(), a.max_arity())));
}

right_module free_module_structure(const circle_product& cp) {
    const sym_seq& a = cp.m_factor;
    const field& f = a.fld();
    int cap = a.max_arity();
    right_module out;
    out.carrier = cp.seq;
    for (int n = 1; n <= cap; ++n) {
        for (int r = 1; r <= n; ++r) {
            const auto& reps = orbit_reps(n, r);
            for (int p = 0; p < static_cast<int>(reps.size()); ++p) {
                table_map_builder build(cp.levels[r], cp.levels[n], 0);
                for (int id = 0; id < cp.levels[r].size(); ++id) {
                    circle_key e = circle_key::decode(cp.levels[r].key(id));
                    const surjection& psi = orbit_reps(r, e.r)[e.phi];
                    canonical_form cf = canonicalize(compose_surjection(psi, reps[p]));
                    sparse_matrix am = a.level(e.r).act(e.m_deg, perm_inverse(cf.tau));
                    for (int row = 0; row < am.rows(); ++row) {
                        scalar v = am.get(row, e.m_idx);
                        if (v.is_zero()) continue;
                        circle_key t = e;
                        t.phi = orbit_rep_index(cf.rep);
                        t.m_idx = row;
                        int tid = cp.levels[n].find(t.key());
                        if (tid >= 0) build.add(id, tid, v);
                    }
                }
                out.set_delta(n, r, p, build.matrices(f));
            }
        }
    }
    return out;
}

right_module surjection_module(const field& f, int r, int cap) {
    right_module out;
    out.carrier = surjection_seq(f, r, cap);
    for (int n = r; n <= cap; ++n) {
        std::vector<surjection> tgt = epi_set(n, r);
        for (int m = r; m <= n; ++m) {
            std::vector<surjection> src = epi_set(m, r);
            const auto& reps = orbit_reps(n, m);
            for (int p = 0; p < static_cast<int>(reps.size()); ++p) {
                sparse_matrix mat(f, static_cast<int>(tgt.size()), static_cast<int>(src.size()));
                for (size_t j = 0; j < src.size(); ++j) {
                    surjection t = compose_surjection(src[j], reps[p]);
                    auto it = std::lower_bound(tgt.begin(), tgt.end(), t);
                    mat.set(static_cast<int>(it - tgt.begin()), static_cast<int>(j), scalar::one(f));
                }
                out.set_delta(n, m, p, {{0, mat}});
            }
        }
    }
    return out;
}

right_module shift_module(const right_module& m, int k) {
    right_module out;
    out.carrier = sym_seq(m.carrier.fld(), m.carrier.max_arity());
    for (int n = 0; n <= m.carrier.max_arity(); ++n) {
        const equivariant_complex& lev = m.carrier.level(n);
        equivariant_complex e(shift(lev.complex(), k), n);
        for (int q : lev.complex().degrees())
            for (int i = 0; i + 1 < n; ++i) e.set_generator(q + k, i, lev.generator(q, i));
        out.carrier.set_level(n, std::move(e));
    }
    for (const auto& [key, mats] : m.delta_reps) {
        std::map<int, sparse_matrix> shifted;
        for (const auto& [q, mat] : mats) shifted.emplace(q + k, mat);
        out.delta_reps[key] = std::move(shifted);
    }
    return out;
}

namespace {

sparse_matrix block_diag(const field& f, const sparse_matrix& a, const sparse_matrix& b) {
    sparse_matrix out(f, a.rows() + b.rows(), a.cols() + b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (const auto& [j, v] : a.row(i)) out.set(i, j, v);
    for (int i = 0; i < b.rows(); ++i)
        for (const auto& [j, v] : b.row(i)) out.set(a.rows() + i, a.cols() + j, v);
    return out;
}

}  // namespace

right_module direct_sum_modules(const right_module& a, const right_module& b) {
    const field& f = a.carrier.fld();
    int cap = a.carrier.max_arity();
    if (b.carrier.max_arity() != cap)
        throw std::invalid_argument("direct_sum_modules: arity mismatch");
    right_module out;
    out.carrier = sym_seq(f, cap);
    for (int n = 0; n <= cap; ++n) {
        const equivariant_complex& la = a.carrier.level(n);
        const equivariant_complex& lb = b.carrier.level(n);
        equivariant_complex e(direct_sum(la.complex(), lb.complex()), n);
        for (int q : e.complex().degrees())
            for (int i = 0; i + 1 < n; ++i)
                e.set_generator(q, i, block_diag(f, la.generator(q, i), lb.generator(q, i)));
        out.carrier.set_level(n, std::move(e));
    }
    for (int n = 1; n <= cap; ++n)
        for (int r = 1; r <= n; ++r)
            for (int p = 0; p < static_cast<int>(orbit_reps(n, r).size()); ++p) {
                std::map<int, sparse_matrix> mats;
                for (int q : out.carrier.level(r).complex().degrees()) {
                    sparse_matrix mat =
                        block_diag(f, a.delta_rep(n, r, p, q), b.delta_rep(n, r, p, q));
                    if (!mat.is_zero()) mats.emplace(q, std::move(mat));
                }
                if (!mats.empty()) out.set_delta(n, r, p, std::move(mats));
            }
    return out;
}

bool check_right_module(const right_module& m) {
    int cap = m.carrier.max_arity();
    // identity surjections act as the identity
    for (int n = 1; n <= cap; ++n)
        for (int q : m.carrier.level(n).complex().degrees())
            if (m.delta_rep(n, n, 0, q) !=
                sparse_matrix::identity(m.carrier.fld(), m.carrier.level(n).complex().dim(q)))
                return false;
    // each structure map is a chain map
    for (const auto& [key, mats] : m.delta_reps) {
        auto [n, r, p] = key;
        for (int q : m.carrier.level(r).complex().degrees())
            if (m.carrier.level(n).complex().d(q) * m.delta_rep(n, r, p, q) !=
                m.delta_rep(n, r, p, q - 1) * m.carrier.level(r).complex().d(q))
                return false;
    }
    // contravariant functoriality over all composable pairs
    for (int n = 1; n <= cap; ++n)
        for (int mm = 1; mm <= n; ++mm)
            for (int rr = 1; rr <= mm; ++rr) {
                if (m.carrier.level(rr).complex().total_dim() == 0) continue;
                for (const surjection& psi : epi_set(n, mm))
                    for (const surjection& phi : epi_set(mm, rr)) {
                        surjection comp = compose_surjection(phi, psi);
                        for (int q : m.carrier.level(rr).complex().degrees())
                            if (m.delta(comp, q) != m.delta(psi, q) * m.delta(phi, q)) return false;
                    }
            }
    return true;
}

bool is_module_map(const right_module& src, const right_module& tgt, const seq_map& f) {
    if (!f.is_chain_map() || !f.is_equivariant()) return false;
    int cap = src.carrier.max_arity();
    for (int n = 1; n <= cap; ++n)
        for (int r = 1; r <= n; ++r)
            for (int p = 0; p < static_cast<int>(orbit_reps(n, r).size()); ++p)
                for (int q : src.carrier.level(r).complex().degrees())
                    if (f.component(n, q) * src.delta_rep(n, r, p, q) !=
                        tgt.delta_rep(n, r, p, q) * f.component(r, q))
                        return false;
    return true;
}

sym_seq random_seq(const field& f, int cap, std::mt19937_64& rng) {
    sym_seq out(f, cap);
    std::uniform_int_distribution<int> dim_dist(1, 2), deg_dist(0, 1), kind_dist(0, 2),
        entry_dist(-1, 1);
    // arity 1: a small two-term complex with a random differential
    chain_complex c1(f);
    int d0 = dim_dist(rng), d1 = deg_dist(rng);
    c1.set_basis_dim(0, d0);
    if (d1 > 0) {
        c1.set_basis_dim(1, d1);
        sparse_matrix d(f, d0, d1);
        for (int i = 0; i < d0; ++i)
            for (int j = 0; j < d1; ++j) d.set(i, j, scalar(f, entry_dist(rng)));
        c1.set_differential(1, d);
    }
    out.set_level(1, equivariant_complex(std::move(c1), 1));
    // higher arities: zero, trivial, or sign representations on one generator
    for (int n = 2; n <= cap; ++n) {
        int kind = kind_dist(rng);
        if (kind == 0) continue;
        int g = deg_dist(rng);
        chain_complex c(f);
        c.set_basis_dim(g, 1);
        equivariant_complex e(std::move(c), n);
        if (kind == 2) {
            sparse_matrix s(f, 1, 1);
            s.set(0, 0, -scalar::one(f));
            for (int i = 0; i + 1 < n; ++i) e.set_generator(g, i, s);
        }
        out.set_level(n, std::move(e));
    }
    return out;
}

// --- algebras --------------------------------------------------------------

namespace {

sparse_matrix mu2_at(const algebra& a, int q) {
    auto it = a.mu2.find(q);
    if (it != a.mu2.end()) return it->second;
    return sparse_matrix(a.f, a.carrier.dim(q), a.pow2.complex.dim(q));
}

}  // namespace

std::map<int, sparse_matrix> algebra::mu(int j) const {
    std::map<int, sparse_matrix> out;
    if (j == 1) {
        for (int q : carrier.degrees()) out.emplace(q, sparse_matrix::identity(f, carrier.dim(q)));
        return out;
    }
    tensor_power pj = pow(j);
    auto flat = flat_basis(carrier);
    std::map<std::pair<int, int>, int> flat_index;
    for (size_t t = 0; t < flat.size(); ++t) flat_index[flat[t]] = static_cast<int>(t);
    for (int q : pj.table.degrees()) out.emplace(q, sparse_matrix(f, carrier.dim(q), pj.table.dim(q)));
    for (int id = 0; id < pj.table.size(); ++id) {
        const auto& key = pj.table.key(id);
        int q = pj.table.degree(id);
        // fold left-to-right through the binary product
        std::map<std::pair<int, int>, scalar> cur;
        cur.emplace(flat[key[0]], scalar::one(f));
        for (int t = 1; t < j; ++t) {
            auto [fd, fp] = flat[key[t]];
            (void)fp;
            std::map<std::pair<int, int>, scalar> nxt;
            for (const auto& [cf, c] : cur) {
                int pid = pow2.table.find({flat_index.at(cf), key[t]});
                if (pid < 0) continue;  // weight-truncated: the product vanishes
                sparse_matrix m2 = mu2_at(*this, cf.first + fd);
                int col = pow2.table.pos(pid);
                for (int row = 0; row < m2.rows(); ++row) {
                    scalar v = m2.get(row, col);
                    if (v.is_zero()) continue;
                    auto [it, fresh] = nxt.emplace(std::make_pair(cf.first + fd, row), c * v);
                    if (!fresh) it->second = it->second + c * v;
                }
            }
            cur = std::move(nxt);
        }
        for (const auto& [cf, c] : cur)
            if (!c.is_zero()) out.at(q).add_to(cf.second, pj.table.pos(id), c);
    }
    return out;
}

bool algebra::validate() const {
    // weights: every carrier element carries at least one letter
    for (int q : carrier.degrees())
        for (const auto& l : carrier.labels(q))
            if (l.weight < 1) return false;
    // mu2 is a chain map
    chain_map cm{pow2.complex, carrier, {}};
    for (int q : pow2.complex.degrees()) cm.set_component(q, mu2_at(*this, q));
    if (!cm.is_chain_map()) return false;
    // graded commutativity
    std::map<int, sparse_matrix> trans = power_transposition(carrier, pow2, 0);
    for (int q : pow2.complex.degrees()) {
        sparse_matrix t = trans.count(q) ? trans.at(q)
                                         : sparse_matrix::identity(f, pow2.complex.dim(q));
        if (mu2_at(*this, q) * t != mu2_at(*this, q)) return false;
    }
    // associativity on triples: left fold vs right fold
    tensor_power p3 = pow(3);
    auto flat = flat_basis(carrier);
    std::map<std::pair<int, int>, int> flat_index;
    for (size_t t = 0; t < flat.size(); ++t) flat_index[flat[t]] = static_cast<int>(t);
    std::map<int, sparse_matrix> left = mu(3);
    for (int id = 0; id < p3.table.size(); ++id) {
        const auto& key = p3.table.key(id);
        int q = p3.table.degree(id);
        std::map<int, scalar> rhs;  // carrier position in degree q -> coeff
        int pid = pow2.table.find({key[1], key[2]});
        if (pid >= 0) {
            int q12 = flat[key[1]].first + flat[key[2]].first;
            sparse_matrix m12 = mu2_at(*this, q12);
            int col = pow2.table.pos(pid);
            for (int row = 0; row < m12.rows(); ++row) {
                scalar v = m12.get(row, col);
                if (v.is_zero()) continue;
                int mid = pow2.table.find({key[0], flat_index.at({q12, row})});
                if (mid < 0) continue;
                sparse_matrix m2 = mu2_at(*this, q);
                int col2 = pow2.table.pos(mid);
                for (int r2 = 0; r2 < m2.rows(); ++r2) {
                    scalar w = m2.get(r2, col2);
                    if (w.is_zero()) continue;
                    auto [it, fresh] = rhs.emplace(r2, v * w);
                    if (!fresh) it->second = it->second + v * w;
                }
            }
        }
        for (int row = 0; row < carrier.dim(q); ++row) {
            scalar l = left.count(q) ? left.at(q).get(row, p3.table.pos(id)) : scalar::zero(f);
            scalar r = rhs.count(row) ? rhs.at(row) : scalar::zero(f);
            if (l != r) return false;
        }
    }
    return true;
}

namespace {

chain_complex force_letter_weights(const chain_complex& x) {
    chain_complex out(x.fld());
    for (int q : x.degrees()) {
        std::vector<basis_label> labels = x.labels(q);
        for (auto& l : labels)
            if (l.weight == 0) l.weight = 1;
        out.set_basis(q, std::move(labels));
    }
    for (int q : x.degrees()) out.set_differential(q, x.d(q));
    return out;
}

}  // namespace

ext_power_result free_algebra_carrier(const chain_complex& x, int cap) {
    return ext_power(com_seq(x.fld(), cap), force_letter_weights(x), cap);
}

algebra free_algebra(const chain_complex& x, int cap) {
    const field& f = x.fld();
    ext_power_result ep = free_algebra_carrier(x, cap);
    algebra out{f, cap, ep.complex, power(ep.complex, 2, cap), {}};
    auto flat = flat_basis(out.carrier);
    // carrier (degree, position) -> (word length r, index within the part)
    auto decode_part = [&](int q, int pos) {
        for (int r = 1; r <= cap; ++r) {
            auto it = ep.offset[r].find(q);
            if (it == ep.offset[r].end()) continue;
            int dim = ep.parts[r].complex.dim(q);
            if (pos >= it->second && pos < it->second + dim)
                return std::make_pair(r, pos - it->second);
        }
        throw std::logic_error("free_algebra: basis element outside every part");
    };
    // representative words of a class, as pow-table keys with coefficients
    auto rep_words = [&](int r, int q, int local) {
        const over_group_result& part = ep.parts[r];
        std::vector<std::pair<std::vector<int>, scalar>> terms;
        const sparse_matrix& sect = part.section.at(q);
        for (int row = 0; row < sect.rows(); ++row) {
            scalar v = sect.get(row, local);
            if (v.is_zero()) continue;
            terms.emplace_back(part.pow.table.key(part.pow.table.ids(q)[row]), v);
        }
        return terms;
    };
    std::map<int, sparse_matrix> mu;
    for (int q : out.pow2.table.degrees()) mu.emplace(q, sparse_matrix(f, out.carrier.dim(q), out.pow2.table.dim(q)));
    for (int id = 0; id < out.pow2.table.size(); ++id) {
        const auto& key = out.pow2.table.key(id);
        auto [qa, pa] = flat[key[0]];
        auto [qb, pb] = flat[key[1]];
        auto [r1, l1] = decode_part(qa, pa);
        auto [r2, l2] = decode_part(qb, pb);
        if (r1 + r2 > cap) continue;
        const over_group_result& tgt = ep.parts[r1 + r2];
        int q = qa + qb;
        for (const auto& [k1, c1] : rep_words(r1, qa, l1))
            for (const auto& [k2, c2] : rep_words(r2, qb, l2)) {
                std::vector<int> cat = k1;
                cat.insert(cat.end(), k2.begin(), k2.end());
                int pid = tgt.pow.table.find(cat);
                if (pid < 0) continue;
                int pre = tgt.pow.table.pos(pid);
                const sparse_matrix& proj = tgt.proj.at(q);
                for (int row = 0; row < proj.rows(); ++row) {
                    scalar v = proj.get(row, pre);
                    if (!v.is_zero())
                        mu.at(q).add_to(ep.offset[r1 + r2].at(q) + row, out.pow2.table.pos(id),
                                        c1 * c2 * v);
                }
            }
    }
    for (auto& [q, m] : mu)
        if (!m.is_zero()) out.mu2.emplace(q, std::move(m));
    return out;
}

algebra square_zero(const chain_complex& x, int cap) {
    chain_complex c = force_letter_weights(x);
    algebra out{x.fld(), cap, c, power(c, 2, cap), {}};
    return out;
}

algebra zero_algebra(const field& f, int cap) {
    chain_complex c(f);
    return algebra{f, cap, c, power(c, 2, cap), {}};
}

quotient_complex indecomposables(const algebra& i) {
    quotient_complex out;
    out.complex = chain_complex(i.f);
    for (int q : i.carrier.degrees()) {
        coker_presentation ck = cokernel_presentation(mu2_at(i, q));
        std::vector<basis_label> labels;
        sparse_matrix sect_t = ck.section.transpose();
        for (int k = 0; k < ck.dim; ++k)
            for (const auto& [r, v] : sect_t.row(k)) labels.push_back(i.carrier.labels(q)[r]);
        out.complex.set_basis(q, std::move(labels));
        out.proj[q] = ck.proj;
        out.section[q] = ck.section;
    }
    for (int q : i.carrier.degrees()) {
        auto pit = out.proj.find(q - 1);
        if (pit == out.proj.end()) continue;
        out.complex.set_differential(q, pit->second * i.carrier.d(q) * out.section.at(q));
    }
    out.complex.validate();
    return out;
}

}  // namespace opf

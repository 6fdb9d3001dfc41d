#include "operadforge/chain.hpp"

#include <algorithm>
#include <stdexcept>

#include "operadforge/parallel.hpp"

namespace opf {

void chain_complex::set_basis(int q, std::vector<basis_label> labels) {
    if (labels.empty())
        basis_.erase(q);
    else
        basis_[q] = std::move(labels);
}

void chain_complex::set_basis_dim(int q, int dim) {
    std::vector<basis_label> labels(static_cast<size_t>(dim));
    for (int i = 0; i < dim; ++i) labels[i].name = "e" + std::to_string(i);
    set_basis(q, std::move(labels));
}

void chain_complex::set_differential(int q, sparse_matrix d) {
    if (d.is_zero())
        diff_.erase(q);
    else
        diff_[q] = std::move(d);
}

int chain_complex::dim(int q) const {
    auto it = basis_.find(q);
    return it == basis_.end() ? 0 : static_cast<int>(it->second.size());
}

const std::vector<basis_label>& chain_complex::labels(int q) const {
    static const std::vector<basis_label> empty;
    auto it = basis_.find(q);
    return it == basis_.end() ? empty : it->second;
}

sparse_matrix chain_complex::d(int q) const {
    auto it = diff_.find(q);
    return it == diff_.end() ? sparse_matrix(f_, dim(q - 1), dim(q)) : it->second;
}

std::vector<int> chain_complex::degrees() const {
    std::vector<int> out;
    for (const auto& [q, b] : basis_)
        if (!b.empty()) out.push_back(q);
    return out;
}

int chain_complex::min_degree() const { return basis_.empty() ? 0 : basis_.begin()->first; }

int chain_complex::max_degree() const { return basis_.empty() ? 0 : basis_.rbegin()->first; }

int chain_complex::total_dim() const {
    int t = 0;
    for (const auto& [q, b] : basis_) t += static_cast<int>(b.size());
    return t;
}

void chain_complex::validate() const {
    for (const auto& [q, m] : diff_) {
        if (m.rows() != dim(q - 1) || m.cols() != dim(q))
            throw std::logic_error("chain_complex: differential shape mismatch in degree " + std::to_string(q));
    }
    for (const auto& [q, m] : diff_) {
        if (diff_.count(q - 1) && !(d(q - 1) * m).is_zero())
            throw std::logic_error("chain_complex: d d != 0 at degree " + std::to_string(q));
    }
}

sparse_matrix chain_map::component(int q) const {
    auto it = comp.find(q);
    return it == comp.end() ? sparse_matrix(src.fld(), tgt.dim(q), src.dim(q)) : it->second;
}

void chain_map::set_component(int q, sparse_matrix m) {
    if (m.is_zero())
        comp.erase(q);
    else
        comp[q] = std::move(m);
}

bool chain_map::is_chain_map() const {
    for (int q : src.degrees())
        if (tgt.d(q) * component(q) != component(q - 1) * src.d(q)) return false;
    return true;
}

chain_map identity_map(const chain_complex& c) {
    chain_map f{c, c, {}};
    for (int q : c.degrees()) f.set_component(q, sparse_matrix::identity(c.fld(), c.dim(q)));
    return f;
}

chain_map compose(const chain_map& g, const chain_map& f) {
    chain_map out{f.src, g.tgt, {}};
    for (int q : f.src.degrees()) out.set_component(q, g.component(q) * f.component(q));
    return out;
}

chain_map zero_map(const chain_complex& src, const chain_complex& tgt) { return chain_map{src, tgt, {}}; }

chain_complex direct_sum(const chain_complex& a, const chain_complex& b) {
    chain_complex out(a.fld());
    std::vector<int> degs = a.degrees();
    for (int q : b.degrees())
        if (std::find(degs.begin(), degs.end(), q) == degs.end()) degs.push_back(q);
    for (int q : degs) {
        std::vector<basis_label> labels = a.labels(q);
        for (const auto& l : b.labels(q)) labels.push_back(l);
        out.set_basis(q, std::move(labels));
    }
    for (int q : degs) {
        sparse_matrix d(a.fld(), out.dim(q - 1), out.dim(q));
        sparse_matrix da = a.d(q), db = b.d(q);
        for (int i = 0; i < da.rows(); ++i)
            for (const auto& [j, v] : da.row(i)) d.set(i, j, v);
        for (int i = 0; i < db.rows(); ++i)
            for (const auto& [j, v] : db.row(i)) d.set(a.dim(q - 1) + i, a.dim(q) + j, v);
        out.set_differential(q, d);
    }
    return out;
}

chain_map sum_inclusion(const chain_complex& a, const chain_complex& b, int which) {
    chain_complex s = direct_sum(a, b);
    const chain_complex& part = which == 0 ? a : b;
    chain_map f{part, s, {}};
    for (int q : part.degrees()) {
        sparse_matrix m(a.fld(), s.dim(q), part.dim(q));
        int off = which == 0 ? 0 : a.dim(q);
        for (int j = 0; j < part.dim(q); ++j) m.set(off + j, j, scalar::one(a.fld()));
        f.set_component(q, m);
    }
    return f;
}

chain_map sum_projection(const chain_complex& a, const chain_complex& b, int which) {
    chain_complex s = direct_sum(a, b);
    const chain_complex& part = which == 0 ? a : b;
    chain_map f{s, part, {}};
    for (int q : s.degrees()) {
        sparse_matrix m(a.fld(), part.dim(q), s.dim(q));
        int off = which == 0 ? 0 : a.dim(q);
        for (int j = 0; j < part.dim(q); ++j) m.set(j, off + j, scalar::one(a.fld()));
        f.set_component(q, m);
    }
    return f;
}

static int tensor_offset(const chain_complex& a, const chain_complex& b, int q, int i) {
    int off = 0;
    for (int k : a.degrees()) {
        if (k >= i) continue;
        off += a.dim(k) * b.dim(q - k);
    }
    return off;
}

int tensor_index(const chain_complex& a, const chain_complex& b, int q, int i, int ai, int bi) {
    return tensor_offset(a, b, q, i) + ai * b.dim(q - i) + bi;
}

chain_complex tensor(const chain_complex& a, const chain_complex& b) {
    chain_complex out(a.fld());
    const field& f = a.fld();
    std::vector<int> adeg = a.degrees(), bdeg = b.degrees();
    std::map<int, std::vector<basis_label>> labels;
    for (int i : adeg)
        for (int j : bdeg) {
            auto& dst = labels[i + j];
            for (const auto& la : a.labels(i))
                for (const auto& lb : b.labels(j))
                    dst.push_back(basis_label{la.name + "(x)" + lb.name, la.weight + lb.weight});
        }
    for (auto& [q, ls] : labels) out.set_basis(q, std::move(ls));

    for (int q : out.degrees()) {
        sparse_matrix d(f, out.dim(q - 1), out.dim(q));
        for (int i : adeg) {
            int j = q - i;
            if (b.dim(j) == 0 || a.dim(i) == 0) continue;
            int src_off = tensor_offset(a, b, q, i);
            sparse_matrix da = a.d(i), db = b.d(j);
            // d_A (x) 1 lands in block (i-1, j)
            if (!da.is_zero()) {
                int tgt_off = tensor_offset(a, b, q - 1, i - 1);
                for (int r = 0; r < da.rows(); ++r)
                    for (const auto& [c, v] : da.row(r))
                        for (int bj = 0; bj < b.dim(j); ++bj)
                            d.add_to(tgt_off + r * b.dim(j) + bj, src_off + c * b.dim(j) + bj, v);
            }
            // (-1)^i 1 (x) d_B lands in block (i, j-1)
            if (!db.is_zero()) {
                int tgt_off = tensor_offset(a, b, q - 1, i);
                scalar sign = i % 2 == 0 ? scalar::one(f) : -scalar::one(f);
                for (int r = 0; r < db.rows(); ++r)
                    for (const auto& [c, v] : db.row(r))
                        for (int ai = 0; ai < a.dim(i); ++ai)
                            d.add_to(tgt_off + ai * b.dim(j - 1) + r, src_off + ai * b.dim(j) + c, sign * v);
            }
        }
        out.set_differential(q, d);
    }
    return out;
}

chain_complex shift(const chain_complex& c, int k) {
    chain_complex out(c.fld());
    for (int q : c.degrees()) out.set_basis(q + k, c.labels(q));
    scalar sign = k % 2 == 0 ? scalar::one(c.fld()) : -scalar::one(c.fld());
    for (int q : c.degrees()) {
        sparse_matrix d = c.d(q);
        if (!d.is_zero()) out.set_differential(q + k, d.scaled(sign));
    }
    return out;
}

chain_map shift(const chain_map& f, int k) {
    chain_map out{shift(f.src, k), shift(f.tgt, k), {}};
    for (const auto& [q, m] : f.comp) out.set_component(q + k, m);
    return out;
}

chain_complex cone(const chain_map& f) {
    chain_complex out(f.src.fld());
    const field& fl = f.src.fld();
    std::vector<int> degs;
    for (int q : f.tgt.degrees()) degs.push_back(q);
    for (int q : f.src.degrees())
        if (std::find(degs.begin(), degs.end(), q + 1) == degs.end()) degs.push_back(q + 1);
    for (int q : degs) {
        std::vector<basis_label> labels = f.tgt.labels(q);
        for (const auto& l : f.src.labels(q - 1)) labels.push_back(basis_label{"c." + l.name, l.weight});
        out.set_basis(q, std::move(labels));
    }
    for (int q : out.degrees()) {
        int tdim = f.tgt.dim(q), sdim = f.src.dim(q - 1);
        sparse_matrix d(fl, out.dim(q - 1), tdim + sdim);
        sparse_matrix dt = f.tgt.d(q), fs = f.component(q - 1), ds = f.src.d(q - 1);
        for (int i = 0; i < dt.rows(); ++i)
            for (const auto& [j, v] : dt.row(i)) d.set(i, j, v);
        for (int i = 0; i < fs.rows(); ++i)
            for (const auto& [j, v] : fs.row(i)) d.set(i, tdim + j, v);
        int toff = f.tgt.dim(q - 1);
        for (int i = 0; i < ds.rows(); ++i)
            for (const auto& [j, v] : ds.row(i)) d.set(toff + i, tdim + j, -v);
        out.set_differential(q, d);
    }
    return out;
}

int homology_dim(const chain_complex& c, int q) {
    return c.dim(q) - rank(c.d(q)) - rank(c.d(q + 1));
}

std::map<int, int> homology_dims(const chain_complex& c) {
    std::vector<int> degs = c.degrees();
    std::vector<int> dims(degs.size(), 0);
    parallel_for(static_cast<int>(degs.size()), [&](int k) { dims[k] = homology_dim(c, degs[k]); });
    std::map<int, int> out;
    for (size_t k = 0; k < degs.size(); ++k)
        if (dims[k] != 0) out[degs[k]] = dims[k];
    return out;
}

bool is_acyclic(const chain_complex& c) { return homology_dims(c).empty(); }

bool is_quasi_iso(const chain_map& f) { return is_acyclic(cone(f)); }

sparse_matrix homology_basis::class_of(const sparse_matrix& v) const {
    auto coords = solve(cycles, v);
    if (!coords) throw std::logic_error("homology_basis::class_of: vector is not a cycle");
    return proj * *coords;
}

homology_basis homology_at(const chain_complex& c, int q) {
    homology_basis out;
    out.cycles = kernel_basis(c.d(q));
    sparse_matrix dq1 = c.d(q + 1);
    auto img = solve(out.cycles, dq1);
    if (!img) throw std::logic_error("homology_at: image not contained in kernel");
    coker_presentation ck = cokernel_presentation(*img);
    out.proj = ck.proj;
    out.reps = out.cycles * ck.section;
    out.dim = ck.dim;
    return out;
}

sparse_matrix induced_map(const chain_map& f, int q) {
    homology_basis hs = homology_at(f.src, q);
    homology_basis ht = homology_at(f.tgt, q);
    return ht.class_of(f.component(q) * hs.reps);
}

sparse_matrix connecting_map(const chain_map& i, const chain_map& p, int q) {
    const chain_complex& a = i.src;
    const chain_complex& b = i.tgt;
    const chain_complex& c = p.tgt;
    homology_basis hc = homology_at(c, q);
    homology_basis ha = homology_at(a, q - 1);
    auto lift = solve(p.component(q), hc.reps);
    if (!lift) throw std::logic_error("connecting_map: quotient map not surjective on cycles");
    sparse_matrix w = b.d(q) * *lift;
    auto pull = solve(i.component(q - 1), w);
    if (!pull) throw std::logic_error("connecting_map: boundary not in the subcomplex");
    return ha.class_of(*pull);
}

void equivariant_complex::set_generator(int q, int i, sparse_matrix g) { gen_[{q, i}] = std::move(g); }

sparse_matrix equivariant_complex::generator(int q, int i) const {
    auto it = gen_.find({q, i});
    return it == gen_.end() ? sparse_matrix::identity(c_.fld(), c_.dim(q)) : it->second;
}

sparse_matrix equivariant_complex::act(int q, const perm& p) const {
    sparse_matrix out = sparse_matrix::identity(c_.fld(), c_.dim(q));
    for (int i : reduced_word(p)) out = out * generator(q, i);
    return out;
}

void equivariant_complex::validate() const {
    for (int q : c_.degrees()) {
        sparse_matrix id = sparse_matrix::identity(c_.fld(), c_.dim(q));
        for (int i = 0; i + 1 < n_; ++i) {
            sparse_matrix gi = generator(q, i);
            if (gi * gi != id) throw std::logic_error("equivariant_complex: generator not an involution");
            for (int j = i + 1; j + 1 < n_; ++j) {
                sparse_matrix gj = generator(q, j);
                if (j == i + 1) {
                    if (gi * gj * gi != gj * gi * gj)
                        throw std::logic_error("equivariant_complex: braid relation fails");
                } else if (gi * gj != gj * gi) {
                    throw std::logic_error("equivariant_complex: distant generators do not commute");
                }
            }
            if (c_.d(q) * gi != generator(q - 1, i) * c_.d(q))
                throw std::logic_error("equivariant_complex: action does not commute with d");
        }
    }
}

equivariant_complex::quotient equivariant_complex::coinvariants() const {
    quotient out;
    out.complex = chain_complex(c_.fld());
    const field& f = c_.fld();
    for (int q : c_.degrees()) {
        int dim = c_.dim(q);
        sparse_matrix stacked(f, dim, 0);
        for (int i = 0; i + 1 < n_; ++i)
            stacked = stacked.hcat(generator(q, i) - sparse_matrix::identity(f, dim));
        coker_presentation ck = cokernel_presentation(stacked);
        // section columns are unit vectors, so the quotient basis inherits
        // labels from the chosen representatives
        std::vector<basis_label> labels;
        sparse_matrix sect_t = ck.section.transpose();
        for (int k = 0; k < ck.dim; ++k)
            for (const auto& [r, v] : sect_t.row(k)) labels.push_back(c_.labels(q)[r]);
        out.complex.set_basis(q, std::move(labels));
        out.proj[q] = ck.proj;
        out.section[q] = ck.section;
    }
    for (int q : c_.degrees()) {
        auto pit = out.proj.find(q - 1);
        if (pit == out.proj.end()) {
            if (out.complex.dim(q - 1) != 0) throw std::logic_error("coinvariants: missing projection");
            continue;
        }
        out.complex.set_differential(q, pit->second * c_.d(q) * out.section[q]);
    }
    out.complex.validate();
    return out;
}

}  // namespace opf

#pragma once

#include <map>
#include <string>
#include <vector>

#include "operadforge/perm.hpp"
#include "operadforge/sparse.hpp"

namespace opf {

// Basis element of a chain group.  weight counts algebra letters in the
// label; constructions that mix operad and algebra inputs truncate uniformly
// in total weight.
struct basis_label {
    std::string name;
    int weight = 0;

    bool operator==(const basis_label& o) const { return name == o.name && weight == o.weight; }
};

// Bounded chain complex of finite dimensional vector spaces; differentials
// d_q: C_q -> C_{q-1} with d d = 0.
class chain_complex {
  public:
    chain_complex() = default;
    explicit chain_complex(const field& f) : f_(f) {}

    const field& fld() const { return f_; }

    void set_basis(int q, std::vector<basis_label> labels);
    void set_basis_dim(int q, int dim);  // anonymous labels
    void set_differential(int q, sparse_matrix d);

    int dim(int q) const;
    const std::vector<basis_label>& labels(int q) const;
    sparse_matrix d(int q) const;  // zero matrix if unset
    std::vector<int> degrees() const;
    int min_degree() const;
    int max_degree() const;
    int total_dim() const;

    void validate() const;  // shapes + d d = 0

  private:
    field f_;
    std::map<int, std::vector<basis_label>> basis_;
    std::map<int, sparse_matrix> diff_;
};

// Chain map f: src -> tgt of a fixed degree shift (deg 0 unless stated).
struct chain_map {
    chain_complex src, tgt;
    std::map<int, sparse_matrix> comp;  // comp[q]: src_q -> tgt_q

    sparse_matrix component(int q) const;
    void set_component(int q, sparse_matrix m);
    bool is_chain_map() const;  // d f = f d
};

chain_map identity_map(const chain_complex& c);
chain_map compose(const chain_map& g, const chain_map& f);  // g after f
chain_map zero_map(const chain_complex& src, const chain_complex& tgt);

chain_complex direct_sum(const chain_complex& a, const chain_complex& b);
// Inclusions/projections of the summands of direct_sum(a, b).
chain_map sum_inclusion(const chain_complex& a, const chain_complex& b, int which);
chain_map sum_projection(const chain_complex& a, const chain_complex& b, int which);

// (A (x) B)_q = sum A_i (x) B_{q-i}, d = d_A (x) 1 + (-1)^i 1 (x) d_B.
chain_complex tensor(const chain_complex& a, const chain_complex& b);
// basis order of tensor: for each total degree q, blocks by ascending
// A-degree i, within a block A-index major.
int tensor_index(const chain_complex& a, const chain_complex& b, int q, int i, int ai, int bi);

// C[k]_q = C_{q-k}, differential scaled by (-1)^k.
chain_complex shift(const chain_complex& c, int k);
chain_map shift(const chain_map& f, int k);

// cone(f)_q = tgt_q + src_{q-1}, d = [d_tgt, f; 0, -d_src].
chain_complex cone(const chain_map& f);

int homology_dim(const chain_complex& c, int q);
std::map<int, int> homology_dims(const chain_complex& c);
bool is_acyclic(const chain_complex& c);
bool is_quasi_iso(const chain_map& f);

// Basis-level homology: cycles = kernel basis of d_q (C_q x k), proj sends
// kernel coordinates to homology classes (h x k), reps = cycle
// representatives (C_q x h), proj(coords(reps)) = id.
struct homology_basis {
    sparse_matrix cycles;
    sparse_matrix proj;
    sparse_matrix reps;
    int dim = 0;

    // homology class of a cycle given in chain coordinates
    sparse_matrix class_of(const sparse_matrix& v) const;
};
homology_basis homology_at(const chain_complex& c, int q);

// H_q(f): H_q(src) -> H_q(tgt).
sparse_matrix induced_map(const chain_map& f, int q);

// Connecting map H_q(C) -> H_{q-1}(A) of a degreewise-split short exact
// sequence 0 -> A -i-> B -p-> C -> 0 (lift along p, apply d_B, pull back
// along i).
sparse_matrix connecting_map(const chain_map& i, const chain_map& p, int q);

// Sigma_n-equivariant complex: each degree carries matrices for the adjacent
// transpositions s_0..s_{n-2}; arbitrary permutations act via reduced words.
class equivariant_complex {
  public:
    equivariant_complex() = default;
    equivariant_complex(chain_complex c, int n) : c_(std::move(c)), n_(n) {}

    const chain_complex& complex() const { return c_; }
    chain_complex& complex() { return c_; }
    int group_arity() const { return n_; }

    void set_generator(int q, int i, sparse_matrix g);  // action of s_i on C_q
    sparse_matrix generator(int q, int i) const;        // identity if unset
    sparse_matrix act(int q, const perm& p) const;

    void validate() const;  // involutions, braid/commuting, commutes with d

    // quotient by the group action in every degree
    struct quotient {
        chain_complex complex;
        std::map<int, sparse_matrix> proj;     // C_q -> (C_q)_{Sigma_n}
        std::map<int, sparse_matrix> section;  // splitting of proj
    };
    quotient coinvariants() const;

  private:
    chain_complex c_;
    int n_ = 1;
    std::map<std::pair<int, int>, sparse_matrix> gen_;  // (degree, i)
};

}  // namespace opf

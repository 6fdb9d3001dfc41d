#pragma once

#include <map>
#include <vector>

#include "operadforge/chain.hpp"

namespace opf {

// Ordered basis keyed by integer vectors, bucketed by homological degree.
// Insertion order is the canonical basis order; positions within a degree
// index rows/columns of matrices.
class basis_table {
  public:
    int add(std::vector<int> key, int degree, int weight = 0);
    int find(const std::vector<int>& key) const;  // -1 if absent
    int size() const { return static_cast<int>(keys_.size()); }
    const std::vector<int>& key(int id) const { return keys_[id]; }
    int degree(int id) const { return degree_[id]; }
    int weight(int id) const { return weight_[id]; }
    int pos(int id) const { return pos_[id]; }  // position within its degree
    int dim(int deg) const;
    const std::vector<int>& ids(int deg) const;
    std::vector<int> degrees() const;

  private:
    std::vector<std::vector<int>> keys_;
    std::vector<int> degree_, weight_, pos_;
    std::map<int, std::vector<int>> by_deg_;
    std::map<std::vector<int>, int> index_;
};

// Sparse linear map between basis_table-indexed spaces, assembled from
// per-element images; deg_shift is the homological degree of the map.
class table_map_builder {
  public:
    table_map_builder(const basis_table& src, const basis_table& tgt, int deg_shift = 0);
    void add(int src_id, int tgt_id, const scalar& c);
    std::map<int, sparse_matrix> matrices(const field& f) const;  // degree -> matrix

  private:
    const basis_table& src_;
    const basis_table& tgt_;
    int shift_;
    std::map<int, std::map<std::pair<int, int>, scalar>> entries_;  // src degree -> (tgt pos, src pos)
};

// Symmetric sequence of Sigma_n-equivariant complexes, arities 0..max_arity.
class sym_seq {
  public:
    sym_seq() = default;
    sym_seq(const field& f, int max_arity);

    const field& fld() const { return f_; }
    int max_arity() const { return max_arity_; }
    bool reduced() const { return levels_.empty() || levels_[0].complex().total_dim() == 0; }

    const equivariant_complex& level(int n) const { return levels_[n]; }
    equivariant_complex& level(int n) { return levels_[n]; }
    void set_level(int n, equivariant_complex e);

    bool is_zero() const;
    int total_dim() const;
    void validate() const;

  private:
    field f_;
    int max_arity_ = 0;
    std::vector<equivariant_complex> levels_;
};

// Levelwise map of symmetric sequences (degree 0, equivariant).
struct seq_map {
    sym_seq src, tgt;
    std::vector<std::map<int, sparse_matrix>> comp;  // level -> degree -> matrix

    sparse_matrix component(int n, int q) const;
    void set_component(int n, int q, sparse_matrix m);
    void set_level(int n, const std::map<int, sparse_matrix>& mats);
    chain_map level_map(int n) const;

    bool is_chain_map() const;
    bool is_equivariant() const;
};

seq_map seq_identity(const sym_seq& m);
seq_map seq_compose(const seq_map& g, const seq_map& f);
bool seq_is_iso(const seq_map& f);
bool seq_is_levelwise_quasi_iso(const seq_map& f);
// inverse of a levelwise isomorphism
seq_map seq_inverse(const seq_map& f);

// X concentrated at arity n.
sym_seq embed_i_n(const equivariant_complex& x, int n, int max_arity);
// S(1): the unit complex at arity 1.
sym_seq unit_seq(const field& f, int max_arity);
sym_seq zero_seq(const field& f, int max_arity);
// the underlying sequence of Com: unit complex in every arity 1..max_arity,
// trivial actions
sym_seq com_seq(const field& f, int max_arity);
// level n = free module on Epi(n, r) in degree 0, Sigma_n permuting by
// precomposition
sym_seq surjection_seq(const field& f, int r, int max_arity);

sym_seq truncate_seq(const sym_seq& m, int max_arity);

// --- circle product -------------------------------------------------------

// Basis element of (M o N)(n): key = (r, phi, m_deg, m_idx, x_1.deg,
// x_1.idx, ..., x_r.deg, x_r.idx) with phi indexing orbit_reps(n, r); the
// x_k live in N(n_k) for the fiber sizes n_k of phi, indexed by position
// within their degree.
struct circle_key {
    int r = 0, phi = 0;
    int m_deg = 0, m_idx = 0;
    std::vector<std::pair<int, int>> xs;

    std::vector<int> key() const;
    static circle_key decode(const std::vector<int>& k);
};

struct circle_product {
    sym_seq seq;
    std::vector<basis_table> levels;  // size max_arity + 1
    sym_seq m_factor, n_factor;       // the inputs, kept for map construction
};

// Requires N reduced.  Elements whose summed label weight exceeds max_arity
// are truncated away (weights count algebra letters; operad-lane labels have
// weight 0, so this is invisible until algebras enter).
circle_product circle(const sym_seq& m, const sym_seq& n);

// f o g on circle products built from the factors of cp_src / cp_tgt.
seq_map circle_map(const circle_product& cp_src, const circle_product& cp_tgt, const seq_map& f,
                   const seq_map& g);

// unit insertion M -> M o Com, x |-> (identity surjection, x, units)
seq_map circle_unit_right(const sym_seq& m, const circle_product& m_com);

// canonical iso M o S(1) -> M (resp. S(1) o M -> M)
seq_map circle_unit_iso_right(const circle_product& m_s1);
seq_map circle_unit_iso_left(const circle_product& s1_m);

// Associativity: A o (B o C) -> (A o B) o C.  Arguments carry the four
// circle products: bc = B o C, a_bc = A o (B o C), ab = A o B,
// ab_c = (A o B) o C.
seq_map assoc_to_left(const circle_product& bc, const circle_product& a_bc, const circle_product& ab,
                      const circle_product& ab_c);
// inverse direction, computed by inverting assoc_to_left levelwise
seq_map assoc_to_right(const circle_product& bc, const circle_product& a_bc, const circle_product& ab,
                       const circle_product& ab_c);

// --- tensor product of sequences ------------------------------------------

// (M (x) N)(n) = sum over l+m=n of the induced representation; basis key =
// (l, shuffle index into the lex list of l-subsets of {0..n-1}, a, b).
struct tensor_seq_product {
    sym_seq seq;
    std::vector<basis_table> levels;
};
tensor_seq_product tensor_seq(const sym_seq& m, const sym_seq& n);

// --- extended powers -------------------------------------------------------

// X^{(x)r} with basis keyed by index tuples, weight-truncated.
struct tensor_power {
    chain_complex complex;
    basis_table table;  // key = (flat_1, ..., flat_r) over the flat basis of X
    int r = 0;
};
// flat enumeration of a complex's basis: degrees ascending, index within
std::vector<std::pair<int, int>> flat_basis(const chain_complex& x);
tensor_power power(const chain_complex& x, int r, int weight_cap);
// the transposition of factors i, i+1 with Koszul signs, degree by degree
std::map<int, sparse_matrix> power_transposition(const chain_complex& x, const tensor_power& p, int i);

// M(r) (x)_{Sigma_r} X^{(x)r}: diagonal action coinvariants.
struct over_group_result {
    chain_complex complex;
    tensor_power pow;                      // the X^{(x)r} factor
    chain_complex pre;                     // M(r) (x) X^{(x)r} before quotient
    std::map<int, sparse_matrix> proj;     // pre -> quotient
    std::map<int, sparse_matrix> section;  // quotient -> pre
};
over_group_result over_group(const equivariant_complex& m, const chain_complex& x, int weight_cap);

// sum over r = lo..hi of M(r) (x)_{Sigma_r} X^{(x)r}
struct ext_power_result {
    chain_complex complex;
    std::vector<over_group_result> parts;   // index r
    std::vector<std::map<int, int>> offset;  // r -> degree -> offset in complex
    int lo = 1, hi = 0;
};
ext_power_result ext_power(const sym_seq& m, const chain_complex& x, int weight_cap);

}  // namespace opf

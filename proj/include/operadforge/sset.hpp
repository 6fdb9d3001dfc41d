#pragma once

#include <string>

#include "operadforge/chain.hpp"

namespace opf {

// Reference to a (possibly degenerate) simplex: the degeneracy of a
// nondegenerate simplex (d, id) along the monotone surjection alpha:
// [m] ->> [d].  alpha = identity means the simplex itself.
struct sref {
    int d = 0, id = 0;
    std::vector<int> alpha;

    int dim() const { return static_cast<int>(alpha.size()) - 1; }
    bool degenerate() const { return dim() != d; }
    std::vector<int> key() const;

    bool operator==(const sref& o) const { return d == o.d && id == o.id && alpha == o.alpha; }
    bool operator<(const sref& o) const;
};

sref nondeg_ref(int d, int id);

// Finite pointed simplicial set: nondegenerate simplices per dimension with
// face maps recorded as refs; degeneracies are implicit in the refs.
struct sset {
    std::vector<int> count;                             // nondegenerate simplices per dim
    std::vector<std::vector<std::vector<sref>>> faces;  // faces[k][id][i], k >= 1
    std::vector<std::vector<std::string>> names;
    int base = 0;  // basepoint vertex id in dimension 0

    int dim() const { return static_cast<int>(count.size()) - 1; }
    int ncount(int k) const { return k >= 0 && k <= dim() ? count[k] : 0; }
    bool is_base(const sref& r) const { return r.d == 0 && r.id == base; }
    sref base_ref(int m) const;

    sref face(const sref& r, int i) const;
    static sref degen(const sref& r, int j);

    void validate() const;  // simplicial identities, face targets in range
};

// m non-base points plus a basepoint
sset discrete_plus(int m);
// Delta[k] / boundary: one k-cell over the basepoint
sset delta_quotient(int k);
// minimal model = delta_quotient(k); smash model = (S^1)^{smash k}
sset sphere(int k, bool smash_model);

// --- smash products ---------------------------------------------------------

// Smash of finitely many factors.  Nondegenerate m-simplices are tuples of
// m-dim refs, none over a basepoint, with no common degeneracy; coordinate
// data is kept for diagonals and group actions.
struct smash_result {
    sset space;
    std::vector<std::vector<std::vector<sref>>> coords;  // [dim][id][factor]
    std::vector<std::map<std::vector<int>, int>> index;  // per dim: tuple key -> id

    int arity() const { return coords.empty() || coords[0].empty() ? 0 : static_cast<int>(coords[0][0].size()); }
    int find(int dim, const std::vector<sref>& tuple) const;
    // normalize an arbitrary tuple of equal-dim refs to a ref of the smash
    sref normalize(const std::vector<const sset*>& factors, const std::vector<sref>& tuple) const;
};

smash_result smash_product(const std::vector<const sset*>& factors);
smash_result smash_power(const sset& k, int n);

// coordinate permutation on a smash power: id of the permuted simplex
int permute_simplex(const smash_result& sp, int dim, int id, const perm& p);

// --- subsets and quotients --------------------------------------------------

struct sset_part {
    sset space;
    std::vector<std::vector<int>> parent_id;  // new (dim, id) -> parent id
};
// keep must contain the basepoint and be closed under faces (checked)
sset_part sub_sset(const sset& k, const std::vector<std::vector<char>>& keep);

struct sset_quot {
    sset space;
    std::vector<std::vector<int>> image_id;  // parent (dim, id) -> quotient id, -1 if collapsed
};
// collapse must contain the basepoint and be closed under faces (checked)
sset_quot quotient_sset(const sset& k, const std::vector<std::vector<char>>& collapse);

// simplices of a smash power with at most r distinct coordinates: the image
// of the diagonals from exponents <= r
std::vector<std::vector<char>> distinct_filter(const smash_result& sp, int r);

// --- chains -----------------------------------------------------------------

// normalized reduced chains: basis = non-basepoint nondegenerate simplices
chain_complex reduced_chains(const sset& k, const field& f);
// position of simplex (m, id) in the reduced-chains basis
int chain_pos(const sset& k, int m, int id);

// reduced chains of a smash power with the coordinate-permutation action
equivariant_complex smash_chains(const smash_result& sp, const field& f);

// chain maps of a subset inclusion / quotient projection
chain_map chains_inclusion(const sset_part& part, const sset& parent, const field& f);
chain_map chains_projection(const sset& parent, const sset_quot& quot, const field& f);

}  // namespace opf

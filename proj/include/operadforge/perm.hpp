#pragma once

#include <vector>

#include "operadforge/field.hpp"

namespace opf {

// Permutations are 0-indexed: p[i] is the image of i.
using perm = std::vector<int>;

perm perm_identity(int n);
perm perm_compose(const perm& a, const perm& b);  // (a*b)(i) = a(b(i))
perm perm_inverse(const perm& p);
int perm_parity_sign(const perm& p);  // +1 / -1

// p as a product of adjacent transpositions: p = s_{w[0]} * s_{w[1]} * ...
std::vector<int> reduced_word(const perm& p);

// Sign for permuting homogeneous tensor factors: factor in position i moves
// to position sigma[i]; sign = prod over inversions i<j, sigma[i]>sigma[j]
// of (-1)^{deg[i] deg[j]}.
int koszul_sign(const perm& sigma, const std::vector<int>& degrees);

// Permutation of {0..sum(sizes)-1} moving block k (contiguous, in the order
// given by sizes) to block position tau[k], preserving order inside blocks.
perm block_permutation(const perm& tau, const std::vector<int>& sizes);

// Surjection {0..n-1} ->> {0..r-1}.
struct surjection {
    int n = 0, r = 0;
    std::vector<int> vals;

    bool operator==(const surjection& o) const { return n == o.n && r == o.r && vals == o.vals; }
    bool operator<(const surjection& o) const { return vals < o.vals; }
};

bool is_surjective(const surjection& s);

// Complete lexicographic enumeration of Epi(n, r).
std::vector<surjection> epi_set(int n, int r);

// First-occurrence-ordered orbit representatives for the free Sigma_r action
// by postcomposition, in lexicographic order.
const std::vector<surjection>& orbit_reps(int n, int r);

// phi = tau o rep with rep first-occurrence ordered; tau in Sigma_r.
struct canonical_form {
    surjection rep;
    perm tau;
};
canonical_form canonicalize(const surjection& phi);

int orbit_rep_index(const surjection& rep);  // index into orbit_reps(n, r)

std::vector<int> fiber_sizes(const surjection& phi);
// positions of each fiber in increasing order
std::vector<std::vector<int>> fibers(const surjection& phi);

// phi o psi for psi: m ->> n, phi: n ->> r.
surjection compose_surjection(const surjection& phi, const surjection& psi);

// Epi-mono factorization of an arbitrary f: {0..n-1} -> {0..m-1}:
// f = mono o epi with epi first-occurrence ordered, mono given by its list
// of pairwise distinct values.
struct epi_mono {
    std::vector<int> mono;  // length r, values in 0..m-1
    surjection epi;
};
epi_mono epi_mono_factorize(const std::vector<int>& f, int m);

// All injections {0..r-1} -> {0..m-1} as value lists, lexicographic.
std::vector<std::vector<int>> mono_set(int r, int m);

}  // namespace opf

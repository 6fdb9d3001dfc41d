#pragma once

#include <array>
#include <random>

#include "operadforge/symseq.hpp"

namespace opf {

// multiplication Com o Com -> Com: every partition basis element hits the
// generator
seq_map com_multiplication(const circle_product& cc, const sym_seq& com);

// Right Com-module: carrier plus structure maps Delta_phi: M(r) -> M(n),
// stored for orbit representatives only; general surjections factor through
// the group action.
struct right_module {
    sym_seq carrier;
    // (n, r, phi index) -> per-degree matrices M(r)_q -> M(n)_q
    std::map<std::array<int, 3>, std::map<int, sparse_matrix>> delta_reps;

    sparse_matrix delta_rep(int n, int r, int phi, int q) const;
    void set_delta(int n, int r, int phi, std::map<int, sparse_matrix> mats);
    // Delta for an arbitrary surjection: canonicalize and route the witness
    // through the group action on M(r)
    sparse_matrix delta(const surjection& phi, int q) const;

    // the action M o Com -> M as a levelwise map
    seq_map action(const circle_product& m_com) const;
};

right_module com_module(const field& f, int cap);
right_module s1_module(const field& f, int cap);
// free module on a generating sequence: carrier = A o Com
right_module free_right_module(const sym_seq& a);
// the free structure carried by the outer Com factor of an existing A o Com
right_module free_module_structure(const circle_product& cp);
// P_r: free module on Epi(-, r)
right_module surjection_module(const field& f, int r, int cap);
right_module shift_module(const right_module& m, int k);
right_module direct_sum_modules(const right_module& a, const right_module& b);

// functoriality / compatibility checks (enumerated up to the carrier arity)
bool check_right_module(const right_module& m);
bool is_module_map(const right_module& src, const right_module& tgt, const seq_map& f);

// random generator sequence (zero/trivial/sign levels, small dimensions);
// free modules on these are the seeded cellular test modules
sym_seq random_seq(const field& f, int cap, std::mt19937_64& rng);

// Nonunital graded-commutative algebra: carrier with weighted basis (weight
// = number of algebra letters) and binary multiplication; j-fold products
// are derived by folding.
struct algebra {
    field f;
    int cap = 0;
    chain_complex carrier;
    tensor_power pow2;                  // power(carrier, 2, cap)
    std::map<int, sparse_matrix> mu2;   // per degree: pow2 -> carrier

    tensor_power pow(int j) const { return power(carrier, j, cap); }
    // j-fold multiplication on power(carrier, j, cap), j >= 1
    std::map<int, sparse_matrix> mu(int j) const;
    bool validate() const;  // chain map, graded commutativity, associativity
};

algebra free_algebra(const chain_complex& x, int cap);
algebra square_zero(const chain_complex& x, int cap);
algebra zero_algebra(const field& f, int cap);

// I/I^2: cokernel of the binary multiplication
struct quotient_complex {
    chain_complex complex;
    std::map<int, sparse_matrix> proj, section;
};
quotient_complex indecomposables(const algebra& i);

// carrier of the free algebra on x together with the part bookkeeping
ext_power_result free_algebra_carrier(const chain_complex& x, int cap);

}  // namespace opf

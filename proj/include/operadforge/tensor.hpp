#pragma once

#include "operadforge/bar.hpp"
#include "operadforge/sset.hpp"

namespace opf {

// K (x) Com: level n = reduced chains of K^{smash n} with the coordinate
// permutation action; the right structure maps are the chain maps of the
// diagonals.
struct tensor_module_result {
    right_module mod;
    std::vector<smash_result> powers;  // index n = 1..cap
};
tensor_module_result tensor_com_module(const sset& k, const field& f, int cap);

// free Sigma_r-sequence on the injections r -> m (precomposition action)
sym_seq mono_seq(const field& f, int m, int cap);

// the decomposition m_+ (x) Com = Mono_m o Com: levelwise iso from the
// tensor module carrier of discrete_plus(m) onto circle(mono_seq(m), Com)
seq_map mono_decomposition(const tensor_module_result& t, const circle_product& mc);

// K (x) I := (K (x) Com) o_Com I
quotient_complex tensor_algebra(const tensor_module_result& t, const algebra& i);

// Suspension by the diagonal on the circle coordinate: per level n and
// simplex degree m, chains(K^{smash n})_m -> chains((S^1 ^ K)^{smash n})_{m+1}.
// pair must be smash_product({s1, k}) and hi the tensor module of its space.
std::vector<std::map<int, sparse_matrix>> suspension_levels(
    const tensor_module_result& lo, const tensor_module_result& hi, const smash_result& pair,
    const sset& s1, const sset& k);

// the same data as a module map shift(K (x) Com, 1) -> (S^1 ^ K) (x) Com
seq_map stabilization_map(const tensor_module_result& lo, const tensor_module_result& hi,
                          const smash_result& pair, const sset& s1, const sset& k);

// extended-power functoriality for a family of degree-shifted level maps
std::map<int, sparse_matrix> ext_left_shift_map(
    const std::vector<std::map<int, sparse_matrix>>& lev, int shift, const sym_seq& src_seq,
    const sym_seq& tgt_seq, const ext_power_result& src, const ext_power_result& tgt,
    const field& f);

// Sigma^{-k}(S^k (x) I) until the stabilization map is a homology iso for two
// consecutive steps.  Stage k still carries unstable classes in de-suspended
// degrees >= k (the suspension map is roughly k-connected), so the map at
// stage k is tested in degrees d <= min(degree_bound, k-1) and the returned
// complex is truncated to the certified range min(degree_bound, witness - 2).
struct stable_tq_result {
    chain_complex complex;    // stable truncation of the witness stage
    int witness = -1;         // -1 if max_k was hit without stabilizing
    int stable_through = -1;  // top degree certified stable
    std::vector<std::map<int, int>> homology;  // per k, H(Sigma^{-k}(S^k (x) I))
};
stable_tq_result stable_tq(const algebra& i, int degree_bound, int max_k);

}  // namespace opf

#pragma once

#include "operadforge/tensor.hpp"

namespace opf {

// --- decreasing filtration -------------------------------------------------

// F^n M: levels below n removed, structure maps restricted
right_module decreasing_filtration(const right_module& m, int n);
// the layer F^n/F^{n+1}: M(n) concentrated at level n
sym_seq decreasing_layer(const right_module& m, int n);
// the levelwise inclusion F^{n+1} M -> F^n M (as modules built by
// decreasing_filtration)
seq_map decreasing_inclusion(const right_module& hi, const right_module& lo);

// chain-level cokernel of a chain map, with projection and section
quotient_complex cofiber(const chain_map& f);

// realization map B(M', Com, I) -> B(M, Com, I) induced by a levelwise map
// of modules M' -> M
chain_map bar_alg_map(const bar_alg_result& src, const bar_alg_result& tgt, const seq_map& f0);

// n-th layer of the filtered bar construction: cofiber of
// B(F^{n+1}M, Com, I) -> B(F^n M, Com, I)
struct filtered_bar_layer {
    bar_alg_result hi, lo;  // bar of F^n, F^{n+1}
    chain_map incl;
    quotient_complex layer;
};
filtered_bar_layer filtered_bar_decreasing(const right_module& m, const algebra& i, int n);

// I^n = B(F^n Com, Com, I) with the tower maps I^{n+1} -> I^n and the
// multiplication augmentation I^1 -> I
struct tower_result {
    std::vector<chain_complex> stages;  // index n = 1..n_max
    std::vector<chain_map> maps;        // maps[n]: I^{n+1} -> I^n
    chain_map aug;                      // I^1 -> I
};
tower_result augmentation_ideal_tower(const algebra& i, int n_max);

// p_n = cofiber of B(F^{n+1}M, Com, I) -> B(M, Com, I), with the tower maps
// p_{n+1} -> p_n
struct quotient_tower_result {
    chain_complex full;                    // B(M, Com, I)
    std::vector<quotient_complex> stages;  // index n = 1..n_max
    std::vector<chain_map> maps;           // maps[n]: p_{n+1} -> p_n
};
quotient_tower_result tower_quotient(const right_module& m, const algebra& i, int n_max);

// --- increasing filtration -------------------------------------------------

// free-to-module counit (i_n(X) o Com)(l) -> N(l) along iota: X -> N(n),
// (phi, x, units) |-> Delta_phi(iota x)
seq_map free_counit(const circle_product& cp, int n, const right_module& nmod,
                    const std::map<int, sparse_matrix>& iota);

// One stage of the increasing filtration, presented as the levelwise pushout
// quotient of (i_n(M(n)) o Com) + F_{n-1}M.
struct increasing_stage {
    right_module f;      // F_n M
    seq_map g;           // g_n: F_n M -> M
    seq_map from_prev;   // f_{n-1}: F_{n-1} M -> F_n M
    seq_map from_free;   // i_n(M(n)) o Com -> F_n M (first pushout leg)
    circle_product free_part;  // i_n(M(n)) o Com
    std::vector<std::map<int, sparse_matrix>> proj, section;  // pushout presentation
};
struct increasing_result {
    right_module base;
    std::vector<increasing_stage> stages;  // index n = 0..n_max, stage 0 = zero
};
increasing_result increasing_filtration(const right_module& m, int n_max);

// induced maps F_n f for a levelwise module map f: src.base -> tgt.base
std::vector<seq_map> increasing_stage_maps(const increasing_result& src,
                                           const increasing_result& tgt, const seq_map& f);

// the layer of the increasing filtration: \bar M(n) = cofiber of
// (F_{n-1}M)(n) -> M(n), with the checked identification of the sequence
// layer coker(f_{n-1}) with i_n(\bar M(n)) o Com.  Throws if g_{n-1} fails
// levelwise injectivity at level n (signals non-cellular input).
struct increasing_layer_result {
    equivariant_complex mbar;              // \bar M(n)
    std::map<int, sparse_matrix> mproj, msect;  // M(n) -> \bar M(n) presentation
    right_module fbar;                     // i_n(\bar M(n)) o Com, free structure
    circle_product fbar_part;
    seq_quotient coker;                    // coker(f_{n-1}: F_{n-1}M -> F_n M)
    seq_map iso;                           // fbar -> coker, levelwise iso (checked)
};
increasing_layer_result increasing_layer(const increasing_result& fl, int n);

// layer of (F_* M) o_Com I: cofiber of the induced map of relative circle
// products of consecutive stages
struct increasing_layer_alg_result {
    quotient_complex lo, hi;  // F_{n-1}M o_Com I, F_n M o_Com I
    chain_map gamma;          // induced by f_{n-1}
    quotient_complex layer;
};
increasing_layer_alg_result module_layer_alg(const increasing_result& fl, const algebra& i, int n);

// n-th layer of B(M, Com, I) for the increasing filtration of the realized
// module B(M, Com, Com)
increasing_layer_alg_result filtered_bar_increasing(const right_module& m, const algebra& i,
                                                    int n);

// --- filtration comparison -------------------------------------------------

// For a levelwise quasi-iso f of cellular modules: checks that every F_n f
// is a levelwise quasi-iso, that the induced maps on the algebra layers are
// quasi-isos, and that they commute with the connecting maps of the layer
// sequences.  Reports the first failure.
struct compare_report {
    bool ok = true;
    std::string detail;  // first failure, empty when ok
    std::vector<std::map<int, int>> layer_src, layer_tgt;  // index n: layer homology
};
compare_report compare_filtrations(const increasing_result& src, const increasing_result& tgt,
                                   const seq_map& f, const algebra& i, int n_max);

// Layer-by-layer comparison of the two filtrations of TQ(I): the one from
// B(S(1), Com, Com) and the one from Sigma^{-k}(S^k (x) Com).  For each
// n <= n_max the layer homologies are compared in the window d <= n*g + 1
// (g the connectivity of I; all degrees for n = 1): above it the sphere
// side carries strict-coinvariant classes with no bar counterpart.  The
// induced filtrations of the total homology are compared in the n = 2
// window, and the maps to the S(1) side are checked to commute with the
// connecting maps of the layer sequences.
struct tq_compare_report {
    bool ok = true;
    std::string detail;
    std::vector<std::map<int, int>> layer_bar, layer_sphere;  // index n, full homology
    std::vector<int> window;                                  // index n: top compared degree
};
tq_compare_report compare_tq_filtrations(const algebra& i, int n_max, int k);

}  // namespace opf

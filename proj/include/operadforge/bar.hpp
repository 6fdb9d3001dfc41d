#pragma once

#include "operadforge/module.hpp"

namespace opf {

// --- simplicial chain complexes and their realization ----------------------

// Levelwise chain complexes with faces d_i: c[s] -> c[s-1] (i = 0..s) and
// degeneracies s_j: c[s] -> c[s+1] (j = 0..s).
struct simplicial_data {
    std::vector<chain_complex> c;
    std::vector<std::vector<chain_map>> face;
    std::vector<std::vector<chain_map>> degen;

    int top() const { return static_cast<int>(c.size()) - 1; }
};

bool check_simplicial(const simplicial_data& sd);

// Normalized Moore totalization: total degree q + s, d_total = d_internal +
// (-1)^q sum_i (-1)^i d_i on the quotient by degenerate chains.
struct realized {
    chain_complex total;
    std::vector<std::map<int, sparse_matrix>> nproj;  // per s: c[s]_q -> N_{s,q}
    std::vector<std::map<int, sparse_matrix>> nsect;
    std::map<std::pair<int, int>, int> offset;  // (s, q) -> column offset in degree q+s
    int ndim(int s, int q) const;
};

realized realize(const simplicial_data& sd);

// Assemble a chain map of realizations from per-simplicial-degree components
// on the unnormalized levels (they must commute with faces and degeneracies).
std::map<int, sparse_matrix> assemble_realized_map(
    const realized& src, const realized& tgt,
    const std::vector<std::map<int, sparse_matrix>>& per_s);

// --- the bar tower ---------------------------------------------------------

// W_0 = M, W_s = W_{s-1} o Com, with the tower faces tf[s][i]: W_s -> W_{s-1}
// (i = 0 the module action, inner i the operad multiplications, i = s-1 the
// composition of the two outermost surjection layers) and the unit insertions
// ins[s][j]: W_s -> W_{s+1} (j = 0..s).
struct bar_tower {
    field f;
    int cap = 0, s_top = 0;
    right_module m;
    sym_seq com;
    std::vector<circle_product> w;          // valid for s = 1..s_top
    std::vector<std::vector<seq_map>> tf;   // tf[s][i], s = 1..s_top
    std::vector<std::vector<seq_map>> ins;  // ins[s][j], s = 0..s_top-1

    const sym_seq& w_seq(int s) const { return s == 0 ? m.carrier : w[s].seq; }
};

bar_tower build_tower(const right_module& m, int s_top);

// the face killing the outermost Com factor through the augmentation
// Com -> S(1): only identity-surjection components survive
seq_map aug_face(const bar_tower& t, int s);

// --- realized bar constructions --------------------------------------------

// B(M, Com, Com): levels realized, with the Sigma_n-actions, the inherited
// right-module structure on the realization, and the augmentation to M.
struct bar_com_result {
    bar_tower tower;
    std::vector<simplicial_data> sd;  // per arity
    std::vector<realized> rl;
    right_module mod;  // carrier = realized levels
    seq_map aug;       // realization -> M
};
bar_com_result bar_com(const right_module& m);

// B(M, Com, S(1)) — for M = S(1) the arity-n level realizes Lie(n).
struct bar_unit_result {
    bar_tower tower;
    std::vector<simplicial_data> sd;
    std::vector<realized> rl;
    sym_seq seq;  // realized levels with their actions
};
bar_unit_result bar_unit(const right_module& m);

// B(M, Com, I) for an algebra I: the aggregated (weight-truncated) complex.
struct bar_alg_result {
    bar_tower tower;
    algebra i;
    std::vector<ext_power_result> ep;  // per simplicial degree
    simplicial_data sd;
    realized rl;
};
bar_alg_result bar_alg(const right_module& m, const algebra& i);

// induced map on extended powers of a levelwise equivariant map
std::map<int, sparse_matrix> ext_power_map(const seq_map& f, const ext_power_result& src,
                                           const ext_power_result& tgt);

equivariant_complex lie(const field& f, int n);
chain_complex tq(const algebra& i);

// --- relative circle products ----------------------------------------------

// M o_Com N as the coequalizer of the two simplicial-degree-one bar faces.
struct seq_quotient {
    sym_seq seq;
    std::vector<std::map<int, sparse_matrix>> proj, section;  // per level
};
// levelwise coker(d0 - d1) with descended differential and actions
seq_quotient coequalize(const seq_map& d0, const seq_map& d1);

seq_quotient relative_circle_com(const right_module& m);   // N = Com: gives back M
seq_quotient relative_circle_unit(const right_module& m);  // N = S(1): module indecomposables
quotient_complex relative_circle_alg(const right_module& m, const algebra& i);

// Degreewise rendering of B(M,Com,N) = B(M,Com,Com) o_Com N, for simplicial
// degrees s <= s_check.
enum class left_arg { com, unit, alg };
bool bar_factorization_check(const right_module& m, left_arg n, const algebra* i, int s_check);

}  // namespace opf

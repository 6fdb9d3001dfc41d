#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "operadforge/tensor.hpp"

using namespace opf;

namespace {

const field qq = field::rationals();
const field f2 = field::prime(2);

chain_complex point_complex(const field& f, int deg) {
    chain_complex x(f);
    x.set_basis(deg, {basis_label{"x", 1}});
    return x;
}

// m disjoint copies of x, block-diagonal differential
chain_complex copies_complex(const chain_complex& x, int m) {
    chain_complex out(x.fld());
    for (int q : x.degrees()) {
        std::vector<basis_label> ls;
        for (int c = 0; c < m; ++c)
            for (int i = 0; i < x.dim(q); ++i)
                ls.push_back(basis_label{"c" + std::to_string(c) + "." + x.labels(q)[i].name,
                                         x.labels(q)[i].weight});
        out.set_basis(q, ls);
    }
    for (int q : x.degrees()) {
        if (x.dim(q - 1) == 0 || x.d(q).is_zero()) continue;
        sparse_matrix d(x.fld(), m * x.dim(q - 1), m * x.dim(q));
        sparse_matrix dx = x.d(q);
        for (int c = 0; c < m; ++c)
            for (int i = 0; i < dx.rows(); ++i)
                for (const auto& [j, v] : dx.row(i)) d.set(c * x.dim(q - 1) + i, c * x.dim(q) + j, v);
        out.set_differential(q, d);
    }
    return out;
}

std::map<int, int> hdims(const chain_complex& c, int lo, int hi) {
    std::map<int, int> h;
    for (int q = lo; q <= hi; ++q) {
        int d = homology_dim(c, q);
        if (d) h[q] = d;
    }
    return h;
}

std::map<int, int> hdims(const chain_complex& c) {
    if (c.degrees().empty()) return {};
    return hdims(c, c.degrees().front(), c.degrees().back());
}

}  // namespace

TEST_CASE("basic spaces and their homology") {
    sset two = discrete_plus(2);
    two.validate();
    CHECK(hdims(reduced_chains(two, qq)) == std::map<int, int>{{0, 2}});

    sset s1 = delta_quotient(1);
    s1.validate();
    CHECK(hdims(reduced_chains(s1, qq)) == std::map<int, int>{{1, 1}});
    CHECK(hdims(reduced_chains(delta_quotient(2), qq)) == std::map<int, int>{{2, 1}});
    CHECK(hdims(reduced_chains(sphere(3, false), qq)) == std::map<int, int>{{3, 1}});

    for (int k = 1; k <= 3; ++k) {
        sset sk = sphere(k, true);
        sk.validate();
        CHECK(hdims(reduced_chains(sk, qq)) == std::map<int, int>{{k, 1}});
        CHECK(hdims(reduced_chains(sk, f2)) == std::map<int, int>{{k, 1}});
    }
}

TEST_CASE("smash powers") {
    smash_result p2 = smash_power(discrete_plus(2), 2);
    CHECK(p2.space.count[0] == 5);  // basepoint + 4 off-diagonal-or-not pairs
    CHECK(hdims(reduced_chains(p2.space, qq)) == std::map<int, int>{{0, 4}});

    sset s1 = delta_quotient(1);
    smash_result one = smash_power(s1, 1);
    CHECK(one.space.count == s1.count);
    CHECK(hdims(reduced_chains(one.space, qq)) == std::map<int, int>{{1, 1}});

    smash_result s0cube = smash_power(discrete_plus(1), 3);
    CHECK(hdims(reduced_chains(s0cube.space, qq)) == std::map<int, int>{{0, 1}});

    CHECK(hdims(reduced_chains(smash_power(s1, 2).space, qq)) == std::map<int, int>{{2, 1}});
    CHECK(hdims(reduced_chains(smash_power(s1, 3).space, qq)) == std::map<int, int>{{3, 1}});
}

TEST_CASE("tensor modules satisfy the module axioms") {
    CHECK(check_right_module(tensor_com_module(discrete_plus(2), qq, 3).mod));
    CHECK(check_right_module(tensor_com_module(delta_quotient(1), qq, 3).mod));
    CHECK(check_right_module(tensor_com_module(delta_quotient(1), f2, 3).mod));
    CHECK(check_right_module(tensor_com_module(delta_quotient(2), qq, 2).mod));
}

TEST_CASE("fat diagonals and diagonal quotients") {
    // discrete: the quotient of (2_+)^2 by the diagonal keeps the two
    // off-diagonal points
    smash_result d2 = smash_power(discrete_plus(2), 2);
    sset_quot q2 = quotient_sset(d2.space, distinct_filter(d2, 1));
    CHECK(q2.space.count[0] == 3);
    CHECK(hdims(reduced_chains(q2.space, qq)) == std::map<int, int>{{0, 2}});

    // S^1: cofiber of the diagonal S^1 -> S^2
    smash_result c2 = smash_power(delta_quotient(1), 2);
    std::vector<std::vector<char>> keep = distinct_filter(c2, 1);
    sset_part part = sub_sset(c2.space, keep);
    sset_quot quot = quotient_sset(c2.space, keep);
    CHECK(hdims(reduced_chains(part.space, qq)) == std::map<int, int>{{1, 1}});
    CHECK(hdims(reduced_chains(quot.space, qq)) == std::map<int, int>{{2, 2}});

    chain_map inc = chains_inclusion(part, c2.space, qq);
    chain_map pr = chains_projection(c2.space, quot, qq);
    chain_complex total = reduced_chains(c2.space, qq);
    for (int q = 0; q <= 2; ++q)
        CHECK(total.dim(q) == reduced_chains(part.space, qq).dim(q) +
                                  reduced_chains(quot.space, qq).dim(q));
    // LES: 0 -> H_2(S^2)=1 -> H_2(Q)=2 -> H_1(S^1)=1 -> H_1(S^2)=0
    CHECK(rank(connecting_map(inc, pr, 2)) == 1);

    // S^2: cofiber of the diagonal S^2 -> S^4 has homology in degrees 3, 4
    smash_result e2 = smash_power(delta_quotient(2), 2);
    sset_quot qe = quotient_sset(e2.space, distinct_filter(e2, 1));
    CHECK(hdims(reduced_chains(qe.space, qq)) == std::map<int, int>{{3, 1}, {4, 1}});
}

TEST_CASE("discrete tensor modules are free on injections") {
    for (int m = 1; m <= 3; ++m) {
        int cap = 3;
        tensor_module_result t = tensor_com_module(discrete_plus(m), qq, cap);
        sym_seq ms = mono_seq(qq, m, cap);
        circle_product mc = circle(ms, com_seq(qq, cap));
        seq_map g = mono_decomposition(t, mc);
        CHECK(seq_is_iso(g));
        CHECK(is_module_map(t.mod, free_module_structure(mc), g));
    }
}

TEST_CASE("tensor algebras") {
    // S^0 (x) I = I
    algebra i = free_algebra(point_complex(qq, 1), 3);
    tensor_module_result t0 = tensor_com_module(discrete_plus(1), qq, 3);
    quotient_complex qc = tensor_algebra(t0, i);
    for (int q = 0; q <= 4; ++q) CHECK(qc.complex.dim(q) == i.carrier.dim(q));

    // discrete K: K (x) (free on X) = free on (chains(K) (x) X)
    chain_complex x(qq);
    x.set_basis(0, {basis_label{"x0", 1}});
    x.set_basis(1, {basis_label{"x1", 1}});
    sparse_matrix dx(qq, 1, 1);
    dx.set(0, 0, scalar(qq, 1));
    x.set_differential(1, dx);
    for (int m = 2; m <= 3; ++m) {
        algebra fx = free_algebra(x, 3);
        tensor_module_result tm = tensor_com_module(discrete_plus(m), qq, 3);
        quotient_complex qm = tensor_algebra(tm, fx);
        chain_complex free_cmp = free_algebra_carrier(copies_complex(x, m), 3).complex;
        for (int q = 0; q <= 4; ++q) CHECK(qm.complex.dim(q) == free_cmp.dim(q));
        CHECK(hdims(qm.complex, 0, 4) == hdims(free_cmp, 0, 4));
    }

    // S^1: homology-level comparison against the free algebra on the shift
    algebra fp = free_algebra(point_complex(qq, 0), 3);
    tensor_module_result tc = tensor_com_module(delta_quotient(1), qq, 3);
    quotient_complex qs = tensor_algebra(tc, fp);
    chain_complex free_s = free_algebra_carrier(point_complex(qq, 1), 3).complex;
    CHECK(hdims(qs.complex, 0, 4) == hdims(free_s, 0, 4));
}

TEST_CASE("stabilization maps") {
    sset s1 = delta_quotient(1);
    sset k0 = discrete_plus(1);
    tensor_module_result lo = tensor_com_module(k0, qq, 2);
    smash_result pair = smash_product({&s1, &k0});
    tensor_module_result hi = tensor_com_module(pair.space, qq, 2);
    seq_map g = stabilization_map(lo, hi, pair, s1, k0);
    for (int n = 1; n <= 2; ++n) CHECK(g.level_map(n).is_chain_map());
    CHECK(is_module_map(shift_module(lo.mod, 1), hi.mod, g));
    sparse_matrix c1 = g.component(1, 1);
    CHECK(c1.rows() == 1);
    CHECK(c1.cols() == 1);
    CHECK(!c1.is_zero());

    // one more step: S^1 -> S^2
    sset k1 = pair.space;
    tensor_module_result lo2 = tensor_com_module(k1, qq, 2);
    smash_result pair2 = smash_product({&s1, &k1});
    tensor_module_result hi2 = tensor_com_module(pair2.space, qq, 2);
    seq_map g2 = stabilization_map(lo2, hi2, pair2, s1, k1);
    for (int n = 1; n <= 2; ++n) CHECK(g2.level_map(n).is_chain_map());
    CHECK(is_module_map(shift_module(lo2.mod, 1), hi2.mod, g2));
}

TEST_CASE("stable tq") {
    stable_tq_result z = stable_tq(zero_algebra(f2, 2), 2, 3);
    for (const auto& h : z.homology) CHECK(h.empty());

    stable_tq_result fr = stable_tq(free_algebra(point_complex(qq, 0), 2), 2, 4);
    CHECK(fr.witness == 3);
    CHECK(fr.stable_through == 1);
    CHECK(hdims(fr.complex, 0, 3) == std::map<int, int>{{0, 1}});

    // square-zero: stable tq agrees with tq in the certified range
    algebra sz = square_zero(point_complex(f2, 0), 2);
    stable_tq_result st = stable_tq(sz, 2, 4);
    CHECK(st.witness == 3);
    chain_complex t = tq(sz);
    for (int d = 0; d <= st.stable_through; ++d)
        CHECK(homology_dim(st.complex, d) == homology_dim(t, d));
}

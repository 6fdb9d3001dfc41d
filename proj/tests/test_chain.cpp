#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "operadforge/chain.hpp"

using namespace opf;

namespace {

const field q_field = field::rationals();

// one 0-cell, one 1-cell, zero differential
chain_complex circle(const field& f) {
    chain_complex c(f);
    c.set_basis_dim(0, 1);
    c.set_basis_dim(1, 1);
    return c;
}

// contractible: two 0-cells, one 1-cell joining them
chain_complex interval(const field& f) {
    chain_complex c(f);
    c.set_basis_dim(0, 2);
    c.set_basis_dim(1, 1);
    sparse_matrix d(f, 2, 1);
    d.set(0, 0, scalar(f, -1));
    d.set(1, 0, scalar(f, 1));
    c.set_differential(1, d);
    return c;
}

sparse_matrix mat1(const field& f, long v) {
    sparse_matrix m(f, 1, 1);
    m.set(0, 0, scalar(f, v));
    return m;
}

}  // namespace

TEST_CASE("homology of basic complexes") {
    auto c = circle(q_field);
    c.validate();
    CHECK(homology_dim(c, 0) == 1);
    CHECK(homology_dim(c, 1) == 1);
    auto i = interval(q_field);
    i.validate();
    CHECK(homology_dim(i, 0) == 1);
    CHECK(homology_dim(i, 1) == 0);
    CHECK(!is_acyclic(i));
    CHECK(homology_dims(i) == std::map<int, int>{{0, 1}});
}

TEST_CASE("tensor satisfies Kunneth on the torus") {
    auto t = tensor(circle(q_field), circle(q_field));
    t.validate();
    CHECK(homology_dim(t, 0) == 1);
    CHECK(homology_dim(t, 1) == 2);
    CHECK(homology_dim(t, 2) == 1);

    auto it = tensor(interval(q_field), circle(q_field));
    it.validate();
    CHECK(homology_dims(it) == std::map<int, int>{{0, 1}, {1, 1}});

    // d squared stays zero on a triple product with signs in play
    auto t3 = tensor(t, interval(q_field));
    t3.validate();
    CHECK(homology_dims(t3) == std::map<int, int>{{0, 1}, {1, 2}, {2, 1}});
}

TEST_CASE("shift negates the differential and moves degrees") {
    auto i = shift(interval(q_field), 3);
    i.validate();
    CHECK(i.dim(3) == 2);
    CHECK(i.dim(4) == 1);
    CHECK(i.d(4).get(0, 0) == scalar(q_field, 1));  // (-1)^3 * (-1)
    CHECK(homology_dims(i) == std::map<int, int>{{3, 1}});
    auto back = shift(i, -3);
    CHECK(back.d(1) == interval(q_field).d(1));
}

TEST_CASE("cone and quasi-isomorphisms") {
    auto c = circle(q_field);
    CHECK(is_acyclic(cone(identity_map(c))));
    CHECK(is_quasi_iso(identity_map(c)));

    // the constant map interval -> point is a quasi-iso
    chain_complex pt(q_field);
    pt.set_basis_dim(0, 1);
    chain_map f{interval(q_field), pt, {}};
    sparse_matrix m(q_field, 1, 2);
    m.set(0, 0, scalar(q_field, 1));
    m.set(0, 1, scalar(q_field, 1));
    f.set_component(0, m);
    CHECK(f.is_chain_map());
    CHECK(is_quasi_iso(f));

    // multiplication by 2 on the circle's degree-1 part is not
    chain_map g = identity_map(c);
    g.set_component(1, mat1(q_field, 2));
    CHECK(g.is_chain_map());
    CHECK(is_quasi_iso(g));  // iso over Q
    auto c2 = circle(field::prime(2));
    chain_map g2 = identity_map(c2);
    g2.set_component(1, mat1(field::prime(2), 2));
    CHECK(!is_quasi_iso(g2));  // zero map over F_2
}

TEST_CASE("induced map on homology") {
    auto c = circle(q_field);
    chain_map g = identity_map(c);
    g.set_component(1, mat1(q_field, 3));
    sparse_matrix h1 = induced_map(g, 1);
    CHECK(h1.rows() == 1);
    CHECK(h1.get(0, 0) == scalar(q_field, 3));
}

TEST_CASE("connecting map of a short exact sequence") {
    // 0 -> A -> B -> C -> 0 with B contractible (d = id in degree 1),
    // A = degree-0 part, C = degree-1 quotient; delta: H_1(C) ~ H_0(A).
    chain_complex a(q_field), b(q_field), c(q_field);
    a.set_basis_dim(0, 1);
    b.set_basis_dim(0, 1);
    b.set_basis_dim(1, 1);
    b.set_differential(1, mat1(q_field, 1));
    c.set_basis_dim(1, 1);
    chain_map inc{a, b, {}};
    inc.set_component(0, mat1(q_field, 1));
    chain_map pr{b, c, {}};
    pr.set_component(1, mat1(q_field, 1));
    sparse_matrix delta = connecting_map(inc, pr, 1);
    CHECK(delta.rows() == 1);
    CHECK(delta.cols() == 1);
    CHECK(!delta.get(0, 0).is_zero());
}

TEST_CASE("homology basis round trip") {
    auto c = tensor(circle(q_field), circle(q_field));
    homology_basis h = homology_at(c, 1);
    CHECK(h.dim == 2);
    CHECK((c.d(1) * h.reps).is_zero());
    // proj(coords(reps)) = identity
    auto coords = solve(h.cycles, h.reps);
    REQUIRE(coords.has_value());
    CHECK(h.proj * *coords == sparse_matrix::identity(q_field, 2));
}

TEST_CASE("equivariant complex: coinvariants of Sigma_2 representations") {
    // regular representation in degree 0
    chain_complex c(q_field);
    c.set_basis_dim(0, 2);
    equivariant_complex e(c, 2);
    sparse_matrix swap(q_field, 2, 2);
    swap.set(0, 1, scalar(q_field, 1));
    swap.set(1, 0, scalar(q_field, 1));
    e.set_generator(0, 0, swap);
    e.validate();
    CHECK(e.coinvariants().complex.dim(0) == 1);

    // sign representation: coinvariants vanish over Q, survive over F_2
    chain_complex s(q_field);
    s.set_basis_dim(0, 1);
    equivariant_complex es(s, 2);
    es.set_generator(0, 0, mat1(q_field, -1));
    es.validate();
    CHECK(es.coinvariants().complex.dim(0) == 0);

    field f2 = field::prime(2);
    chain_complex s2(f2);
    s2.set_basis_dim(0, 1);
    equivariant_complex es2(s2, 2);
    es2.set_generator(0, 0, mat1(f2, -1));
    CHECK(es2.coinvariants().complex.dim(0) == 1);
}

TEST_CASE("equivariant complex: Sigma_3 permutation representation") {
    chain_complex c(q_field);
    c.set_basis_dim(0, 3);
    equivariant_complex e(c, 3);
    for (int i = 0; i < 2; ++i) {
        sparse_matrix g = sparse_matrix::identity(q_field, 3);
        g.set(i, i, scalar(q_field, 0));
        g.set(i + 1, i + 1, scalar(q_field, 0));
        g.set(i, i + 1, scalar(q_field, 1));
        g.set(i + 1, i, scalar(q_field, 1));
        e.set_generator(0, i, g);
    }
    e.validate();
    CHECK(e.coinvariants().complex.dim(0) == 1);
    // act() realizes an arbitrary permutation through its reduced word
    perm p{2, 0, 1};
    sparse_matrix m = e.act(0, p);
    for (int i = 0; i < 3; ++i) CHECK(m.get(p[i], i).is_one());
}

TEST_CASE("coinvariants of a complex with differential") {
    // two copies of the interval swapped by Sigma_2; quotient is an interval
    auto i2 = direct_sum(interval(q_field), interval(q_field));
    equivariant_complex e(i2, 2);
    for (int q = 0; q <= 1; ++q) {
        int n = i2.dim(q) / 2;
        sparse_matrix g(q_field, 2 * n, 2 * n);
        for (int k = 0; k < n; ++k) {
            g.set(k, n + k, scalar(q_field, 1));
            g.set(n + k, k, scalar(q_field, 1));
        }
        e.set_generator(q, 0, g);
    }
    e.validate();
    auto quot = e.coinvariants();
    CHECK(quot.complex.dim(0) == 2);
    CHECK(quot.complex.dim(1) == 1);
    CHECK(homology_dims(quot.complex) == std::map<int, int>{{0, 1}});
}

TEST_CASE("direct sum inclusions and projections") {
    auto a = circle(q_field);
    auto b = interval(q_field);
    auto s = direct_sum(a, b);
    s.validate();
    CHECK(s.dim(0) == 3);
    CHECK(homology_dims(s) == std::map<int, int>{{0, 2}, {1, 1}});
    auto ia = sum_inclusion(a, b, 0);
    auto pb = sum_projection(a, b, 1);
    CHECK(ia.is_chain_map());
    CHECK(pb.is_chain_map());
    CHECK(compose(pb, ia).component(0).is_zero());
}

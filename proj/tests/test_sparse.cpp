#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "operadforge/sparse.hpp"

using namespace opf;

namespace {

sparse_matrix from_ints(const field& f, const std::vector<std::vector<long>>& rows) {
    int r = static_cast<int>(rows.size());
    int c = r == 0 ? 0 : static_cast<int>(rows[0].size());
    sparse_matrix m(f, r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m.set(i, j, scalar(f, rows[i][j]));
    return m;
}

sparse_matrix random_matrix(const field& f, int rows, int cols, std::mt19937_64& rng) {
    sparse_matrix m(f, rows, cols);
    std::uniform_int_distribution<long> val(-3, 3);
    std::uniform_int_distribution<int> keep(0, 2);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            if (keep(rng) == 0) m.set(i, j, scalar(f, val(rng)));
    return m;
}

}  // namespace

TEST_CASE("rank over Q vs F2 differ on the all-ones 2x2") {
    auto m_q = from_ints(field::rationals(), {{1, 1}, {1, 1}});
    auto m_2 = from_ints(field::prime(2), {{1, 1}, {1, 1}});
    CHECK(rank(m_q) == 1);
    CHECK(rank(m_2) == 1);
    auto n_q = from_ints(field::rationals(), {{1, 1}, {1, -1}});
    auto n_2 = from_ints(field::prime(2), {{1, 1}, {1, -1}});
    CHECK(rank(n_q) == 2);
    CHECK(rank(n_2) == 1);
}

TEST_CASE("rref produces identity block on invertible matrix") {
    field q = field::rationals();
    auto m = from_ints(q, {{2, 1, 0}, {0, 3, 1}, {1, 0, 2}});
    rref_result e = rref(m);
    CHECK(e.pivot_cols == std::vector<int>{0, 1, 2});
    CHECK(e.r == sparse_matrix::identity(q, 3));
}

TEST_CASE("kernel_basis spans the kernel") {
    field q = field::rationals();
    auto m = from_ints(q, {{1, 2, 3}, {2, 4, 6}});
    auto k = kernel_basis(m);
    CHECK(k.cols() == 2);
    CHECK((m * k).is_zero());
    CHECK(rank(k) == 2);
}

TEST_CASE("cokernel presentation identities") {
    field q = field::rationals();
    auto m = from_ints(q, {{1, 0}, {2, 0}, {0, 0}});
    auto c = cokernel_presentation(m);
    CHECK(c.dim == 2);  // rank 1, so coker has dim 3 - 1
    CHECK((c.proj * m).is_zero());
    CHECK(c.proj * c.section == sparse_matrix::identity(q, c.dim));
}

TEST_CASE("solve consistent and inconsistent systems") {
    field q = field::rationals();
    auto a = from_ints(q, {{1, 2}, {3, 4}});
    auto b = from_ints(q, {{5}, {6}});
    auto x = solve(a, b);
    REQUIRE(x.has_value());
    CHECK(a * *x == b);

    auto sing = from_ints(q, {{1, 1}, {2, 2}});
    auto bad = from_ints(q, {{1}, {3}});
    CHECK(!solve(sing, bad).has_value());
    auto good = from_ints(q, {{1}, {2}});
    auto y = solve(sing, good);
    REQUIRE(y.has_value());
    CHECK(sing * *y == good);
}

TEST_CASE("randomized rank-nullity and cokernel over Q and F5") {
    std::mt19937_64 rng(20240817);
    for (const field& f : {field::rationals(), field::prime(5)}) {
        for (int t = 0; t < 20; ++t) {
            auto m = random_matrix(f, 7, 9, rng);
            int r = rank(m);
            auto k = kernel_basis(m);
            CHECK(k.cols() == 9 - r);
            CHECK((m * k).is_zero());
            auto c = cokernel_presentation(m);
            CHECK(c.dim == 7 - r);
            CHECK((c.proj * m).is_zero());
            CHECK(c.proj * c.section == sparse_matrix::identity(f, c.dim));
            CHECK(rank(m.transpose()) == r);
        }
    }
}

TEST_CASE("matrix algebra basics") {
    field q = field::rationals();
    auto a = from_ints(q, {{1, 2}, {3, 4}});
    auto b = from_ints(q, {{0, 1}, {1, 0}});
    CHECK(a * b == from_ints(q, {{2, 1}, {4, 3}}));
    CHECK(a + (-a) == sparse_matrix(q, 2, 2));
    CHECK(a.scaled(scalar(q, 2)) == a + a);
    CHECK(a.hcat(b).cols() == 4);
    CHECK(a.vcat(b).rows() == 4);
    CHECK(a.select_cols({1}) == from_ints(q, {{2}, {4}}));
    CHECK(a.select_rows({1, 0}) == from_ints(q, {{3, 4}, {1, 2}}));
    std::vector<scalar> x{scalar(q, 1), scalar(q, -1)};
    auto y = a.apply(x);
    CHECK(y[0] == scalar(q, -1));
    CHECK(y[1] == scalar(q, -1));
}

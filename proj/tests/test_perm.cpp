#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "operadforge/perm.hpp"

using namespace opf;

namespace {

perm adjacent(int n, int i) {
    perm s = perm_identity(n);
    std::swap(s[i], s[i + 1]);
    return s;
}

perm random_perm(int n, std::mt19937_64& rng) {
    perm p = perm_identity(n);
    std::shuffle(p.begin(), p.end(), rng);
    return p;
}

long stirling2(int n, int r) {
    if (n == 0 && r == 0) return 1;
    if (n == 0 || r == 0) return 0;
    return r * stirling2(n - 1, r) + stirling2(n - 1, r - 1);
}

long factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

}  // namespace

TEST_CASE("permutation group basics") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 30; ++t) {
        perm p = random_perm(6, rng), q = random_perm(6, rng);
        CHECK(perm_compose(p, perm_inverse(p)) == perm_identity(6));
        CHECK(perm_parity_sign(perm_compose(p, q)) == perm_parity_sign(p) * perm_parity_sign(q));
        // reduced word reassembles p
        perm acc = perm_identity(6);
        for (int i : reduced_word(p)) acc = perm_compose(acc, adjacent(6, i));
        CHECK(acc == p);
        CHECK(static_cast<int>(reduced_word(p).size()) % 2 == (perm_parity_sign(p) == 1 ? 0 : 1));
    }
}

TEST_CASE("koszul sign") {
    // swapping two odd factors gives -1, anything touching an even factor +1
    CHECK(koszul_sign({1, 0}, {1, 1}) == -1);
    CHECK(koszul_sign({1, 0}, {2, 1}) == 1);
    CHECK(koszul_sign({1, 0}, {0, 0}) == 1);
    // cyclic rotation of three odd factors: two transpositions
    CHECK(koszul_sign({1, 2, 0}, {1, 1, 1}) == 1);
    CHECK(koszul_sign({2, 0, 1}, {1, 1, 1}) == 1);
    CHECK(koszul_sign({0, 2, 1}, {3, 1, 1}) == -1);

    // multiplicativity: sign(ab) = sign(a after b) * sign(b) on equal degrees
    std::mt19937_64 rng(11);
    for (int t = 0; t < 20; ++t) {
        perm a = random_perm(5, rng), b = random_perm(5, rng);
        std::vector<int> deg(5);
        for (auto& d : deg) d = static_cast<int>(rng() % 3);
        std::vector<int> deg_b(5);  // degrees after applying b
        for (int i = 0; i < 5; ++i) deg_b[b[i]] = deg[i];
        CHECK(koszul_sign(perm_compose(a, b), deg) == koszul_sign(b, deg) * koszul_sign(a, deg_b));
    }
}

TEST_CASE("block permutation") {
    // two blocks of sizes 2, 3 swapped
    perm bp = block_permutation({1, 0}, {2, 3});
    CHECK(bp == perm{3, 4, 0, 1, 2});
    // block permutations compose like the underlying permutations when the
    // sizes are transported along
    std::mt19937_64 rng(13);
    for (int t = 0; t < 20; ++t) {
        perm tau = random_perm(4, rng), sig = random_perm(4, rng);
        std::vector<int> sizes{1, 3, 2, 2};
        std::vector<int> sizes_tau(4);  // sizes after tau is applied
        for (int k = 0; k < 4; ++k) sizes_tau[tau[k]] = sizes[k];
        perm lhs = block_permutation(perm_compose(sig, tau), sizes);
        perm rhs = perm_compose(block_permutation(sig, sizes_tau), block_permutation(tau, sizes));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("surjection counts") {
    CHECK(epi_set(3, 2).size() == 6);
    CHECK(orbit_reps(3, 2).size() == 3);  // Stirling S(3,2)
    CHECK(epi_set(4, 4).size() == 24);
    CHECK(orbit_reps(4, 4).size() == 1);
    for (int n = 1; n <= 5; ++n)
        for (int r = 1; r <= n; ++r) {
            CHECK(static_cast<long>(orbit_reps(n, r).size()) == stirling2(n, r));
            CHECK(static_cast<long>(epi_set(n, r).size()) == stirling2(n, r) * factorial(r));
        }
    CHECK(epi_set(2, 3).empty());
    CHECK(epi_set(0, 0).size() == 1);
}

TEST_CASE("canonicalize splits phi = tau o rep") {
    for (const auto& phi : epi_set(5, 3)) {
        canonical_form c = canonicalize(phi);
        // rep is first-occurrence ordered
        int seen = 0;
        for (int v : c.rep.vals) {
            CHECK(v <= seen);
            if (v == seen) ++seen;
        }
        for (int i = 0; i < 5; ++i) CHECK(phi.vals[i] == c.tau[c.rep.vals[i]]);
        CHECK(orbit_reps(5, 3)[orbit_rep_index(c.rep)] == c.rep);
    }
    // distinct orbits stay distinct
    std::set<std::vector<int>> reps;
    for (const auto& phi : epi_set(4, 2)) reps.insert(canonicalize(phi).rep.vals);
    CHECK(reps.size() == orbit_reps(4, 2).size());
}

TEST_CASE("fibers and composition") {
    surjection phi{5, 2, {0, 1, 0, 1, 0}};
    CHECK(fiber_sizes(phi) == std::vector<int>{3, 2});
    auto fb = fibers(phi);
    CHECK(fb[0] == std::vector<int>{0, 2, 4});
    CHECK(fb[1] == std::vector<int>{1, 3});

    surjection psi{4, 3, {2, 0, 1, 0}};
    surjection rho{3, 2, {1, 0, 1}};
    surjection comp = compose_surjection(rho, psi);
    CHECK(comp.n == 4);
    CHECK(comp.r == 2);
    for (int i = 0; i < 4; ++i) CHECK(comp.vals[i] == rho.vals[psi.vals[i]]);
}

TEST_CASE("epi-mono factorization") {
    std::vector<int> f{3, 1, 3, 0};
    epi_mono em = epi_mono_factorize(f, 5);
    CHECK(em.mono == std::vector<int>{3, 1, 0});
    CHECK(em.epi.vals == std::vector<int>{0, 1, 0, 2});
    for (size_t i = 0; i < f.size(); ++i) CHECK(em.mono[em.epi.vals[i]] == f[i]);
    CHECK(is_surjective(em.epi));

    CHECK(mono_set(2, 3).size() == 6);
    CHECK(mono_set(3, 2).empty());
    CHECK(mono_set(0, 4).size() == 1);
}

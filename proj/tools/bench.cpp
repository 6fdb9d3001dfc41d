// Benchmark of the batch-parallel kernels against the serial reference.
// The parallel path distributes per-degree homology computations; the serial
// path is the one the tests validate against.

#include <chrono>
#include <cstdio>

#include "operadforge/filtration.hpp"
#include "operadforge/parallel.hpp"

using namespace opf;

namespace {

double time_ms(void (*f)(const chain_complex&), const chain_complex& c, int reps) {
    auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) f(c);
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void run_homology(const chain_complex& c) { homology_dims(c); }

void bench_complex(const char* name, const chain_complex& c, int reps) {
    set_serial(true);
    std::map<int, int> ref = homology_dims(c);
    double ts = time_ms(run_homology, c, reps);
    set_serial(false);
    std::map<int, int> par = homology_dims(c);
    double tp = time_ms(run_homology, c, reps);
    if (par != ref) {
        printf("%-28s MISMATCH between serial and parallel results\n", name);
        return;
    }
    printf("%-28s dim %5d  serial %8.2f ms  parallel %8.2f ms  speedup %.2fx\n", name,
           c.total_dim(), ts, tp, ts / tp);
}

}  // namespace

int main(int argc, char** argv) {
    int cap = argc > 1 ? atoi(argv[1]) : 4;
    field qq = field::rationals();
    field f2 = field::prime(2);

    chain_complex x(qq);
    x.set_basis(0, {basis_label{"x", 1}});
    algebra fr = free_algebra(x, cap);
    bench_complex("bar(Com, Com, free) over Q", bar_alg(com_module(qq, cap), fr).rl.total, 3);

    chain_complex x2(f2);
    x2.set_basis(1, {basis_label{"x", 1}});
    algebra fr2 = free_algebra(x2, cap);
    bench_complex("bar(Com, Com, free) over F2", bar_alg(com_module(f2, cap), fr2).rl.total, 3);

    sset s1 = delta_quotient(1);
    bench_complex("chains((S^1)^3) over F2", reduced_chains(smash_power(s1, 3).space, f2), 3);

    bench_complex("bar(S(1), Com, Com) level 4 over Q",
                  bar_com(s1_module(qq, cap)).mod.carrier.level(cap).complex(), 3);
    return 0;
}

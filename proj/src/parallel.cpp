#include "operadforge/parallel.hpp"

#include <atomic>
#include <cstdlib>

namespace opf {

static std::atomic<int> serial_flag{-1};  // -1 = read env on first use

bool serial_mode() {
    int v = serial_flag.load();
    if (v < 0) {
        const char* e = std::getenv("OPERADFORGE_SERIAL");
        v = (e != nullptr && e[0] != '\0' && e[0] != '0') ? 1 : 0;
        serial_flag.store(v);
    }
    return v != 0;
}

void set_serial(bool s) { serial_flag.store(s ? 1 : 0); }

void parallel_for_impl(int n, void* ctx, void (*body)(void*, int)) {
    if (serial_mode()) {
        for (int i = 0; i < n; ++i) body(ctx, i);
        return;
    }
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) body(ctx, i);
#else
    for (int i = 0; i < n; ++i) body(ctx, i);
#endif
}

}  // namespace opf

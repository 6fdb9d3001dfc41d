#pragma once

#include <utility>

namespace opf {

// Batch-level data parallelism (per-degree, per-arity loops).  The serial
// path is the reference; OPERADFORGE_SERIAL=1 or set_serial(true) forces it.
bool serial_mode();
void set_serial(bool s);

void parallel_for_impl(int n, void* ctx, void (*body)(void*, int));

template <typename F>
void parallel_for(int n, F&& f) {
    auto call = [](void* ctx, int i) { (*static_cast<F*>(ctx))(i); };
    parallel_for_impl(n, &f, call);
}

}  // namespace opf

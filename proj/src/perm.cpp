#include "operadforge/perm.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

namespace opf {

perm perm_identity(int n) {
    perm p(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) p[i] = i;
    return p;
}

perm perm_compose(const perm& a, const perm& b) {
    perm out(b.size());
    for (size_t i = 0; i < b.size(); ++i) out[i] = a[b[i]];
    return out;
}

perm perm_inverse(const perm& p) {
    perm out(p.size());
    for (size_t i = 0; i < p.size(); ++i) out[p[i]] = static_cast<int>(i);
    return out;
}

int perm_parity_sign(const perm& p) {
    int inv = 0;
    for (size_t i = 0; i < p.size(); ++i)
        for (size_t j = i + 1; j < p.size(); ++j)
            if (p[i] > p[j]) ++inv;
    return inv % 2 == 0 ? 1 : -1;
}

std::vector<int> reduced_word(const perm& p) {
    std::vector<int> w;
    perm q = p;
    bool moved = true;
    while (moved) {
        moved = false;
        for (size_t i = 0; i + 1 < q.size(); ++i) {
            if (q[i] > q[i + 1]) {
                std::swap(q[i], q[i + 1]);  // q <- q * s_i
                w.push_back(static_cast<int>(i));
                moved = true;
            }
        }
    }
    // p * s_{w0} * s_{w1} * ... = id, each s is an involution
    std::reverse(w.begin(), w.end());
    return w;
}

int koszul_sign(const perm& sigma, const std::vector<int>& degrees) {
    if (sigma.size() != degrees.size()) throw std::invalid_argument("koszul_sign: size mismatch");
    int odd_inversions = 0;
    for (size_t i = 0; i < sigma.size(); ++i)
        for (size_t j = i + 1; j < sigma.size(); ++j)
            if (sigma[i] > sigma[j] && (degrees[i] % 2 != 0) && (degrees[j] % 2 != 0)) ++odd_inversions;
    return odd_inversions % 2 == 0 ? 1 : -1;
}

perm block_permutation(const perm& tau, const std::vector<int>& sizes) {
    int total = 0;
    for (int s : sizes) total += s;
    std::vector<int> src_off(sizes.size(), 0);
    for (size_t k = 1; k < sizes.size(); ++k) src_off[k] = src_off[k - 1] + sizes[k - 1];
    // target offsets: position j holds block tau^{-1}(j)
    perm tinv = perm_inverse(tau);
    std::vector<int> tgt_off(sizes.size(), 0);
    int acc = 0;
    std::vector<int> tgt_block_off(sizes.size(), 0);
    for (size_t j = 0; j < sizes.size(); ++j) {
        tgt_block_off[j] = acc;
        acc += sizes[tinv[j]];
    }
    perm out(static_cast<size_t>(total));
    for (size_t k = 0; k < sizes.size(); ++k)
        for (int t = 0; t < sizes[k]; ++t) out[src_off[k] + t] = tgt_block_off[tau[k]] + t;
    return out;
}

bool is_surjective(const surjection& s) {
    std::vector<bool> hit(static_cast<size_t>(s.r), false);
    for (int v : s.vals) {
        if (v < 0 || v >= s.r) return false;
        hit[v] = true;
    }
    for (bool h : hit)
        if (!h) return false;
    return static_cast<int>(s.vals.size()) == s.n;
}

std::vector<surjection> epi_set(int n, int r) {
    std::vector<surjection> out;
    if (r > n || r < 0) return out;
    if (r == 0) {
        if (n == 0) out.push_back(surjection{0, 0, {}});
        return out;
    }
    std::vector<int> vals(static_cast<size_t>(n), 0);
    for (;;) {
        surjection s{n, r, vals};
        if (is_surjective(s)) out.push_back(s);
        int i = n - 1;
        while (i >= 0 && vals[i] == r - 1) vals[i--] = 0;
        if (i < 0) break;
        ++vals[i];
    }
    return out;
}

static std::vector<surjection> enumerate_reps(int n, int r) {
    std::vector<surjection> out;
    if (r > n || r <= 0) {
        if (n == 0 && r == 0) out.push_back(surjection{0, 0, {}});
        return out;
    }
    std::vector<int> vals;
    vals.reserve(static_cast<size_t>(n));
    // first-occurrence ordered: vals[i] <= 1 + max(vals[0..i-1]); all of
    // 0..r-1 must appear
    auto rec = [&](auto&& self, int i, int used) -> void {
        if (i == n) {
            if (used == r) out.push_back(surjection{n, r, vals});
            return;
        }
        int hi = std::min(used, r - 1);
        // still need r - used new values among remaining n - i slots
        for (int v = 0; v <= hi; ++v) {
            int new_used = used + (v == used ? 1 : 0);
            if (r - new_used <= n - i - 1) {
                vals.push_back(v);
                self(self, i + 1, new_used);
                vals.pop_back();
            }
        }
    };
    rec(rec, 0, 0);
    std::sort(out.begin(), out.end());
    return out;
}

const std::vector<surjection>& orbit_reps(int n, int r) {
    static std::map<std::pair<int, int>, std::vector<surjection>> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_pair(n, r);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, enumerate_reps(n, r)).first;
    return it->second;
}

canonical_form canonicalize(const surjection& phi) {
    canonical_form out;
    std::vector<int> first(static_cast<size_t>(phi.r), -1);
    std::vector<int> order;  // targets in order of first occurrence
    for (int i = 0; i < phi.n; ++i) {
        int v = phi.vals[i];
        if (first[v] < 0) {
            first[v] = static_cast<int>(order.size());
            order.push_back(v);
        }
    }
    out.rep.n = phi.n;
    out.rep.r = phi.r;
    out.rep.vals.resize(static_cast<size_t>(phi.n));
    for (int i = 0; i < phi.n; ++i) out.rep.vals[i] = first[phi.vals[i]];
    out.tau.resize(static_cast<size_t>(phi.r));
    for (int j = 0; j < phi.r; ++j) out.tau[j] = order[j];  // phi = tau o rep
    return out;
}

int orbit_rep_index(const surjection& rep) {
    const auto& reps = orbit_reps(rep.n, rep.r);
    auto it = std::lower_bound(reps.begin(), reps.end(), rep);
    if (it == reps.end() || !(*it == rep)) throw std::logic_error("orbit_rep_index: not a representative");
    return static_cast<int>(it - reps.begin());
}

std::vector<int> fiber_sizes(const surjection& phi) {
    std::vector<int> out(static_cast<size_t>(phi.r), 0);
    for (int v : phi.vals) ++out[v];
    return out;
}

std::vector<std::vector<int>> fibers(const surjection& phi) {
    std::vector<std::vector<int>> out(static_cast<size_t>(phi.r));
    for (int i = 0; i < phi.n; ++i) out[phi.vals[i]].push_back(i);
    return out;
}

surjection compose_surjection(const surjection& phi, const surjection& psi) {
    if (psi.r != phi.n) throw std::invalid_argument("compose_surjection: size mismatch");
    surjection out{psi.n, phi.r, {}};
    out.vals.resize(static_cast<size_t>(psi.n));
    for (int i = 0; i < psi.n; ++i) out.vals[i] = phi.vals[psi.vals[i]];
    return out;
}

epi_mono epi_mono_factorize(const std::vector<int>& f, int m) {
    epi_mono out;
    std::vector<int> idx(static_cast<size_t>(m), -1);
    for (int v : f) {
        if (v < 0 || v >= m) throw std::invalid_argument("epi_mono_factorize: value out of range");
        if (idx[v] < 0) {
            idx[v] = static_cast<int>(out.mono.size());
            out.mono.push_back(v);
        }
    }
    out.epi.n = static_cast<int>(f.size());
    out.epi.r = static_cast<int>(out.mono.size());
    out.epi.vals.resize(f.size());
    for (size_t i = 0; i < f.size(); ++i) out.epi.vals[i] = idx[f[i]];
    return out;
}

std::vector<std::vector<int>> mono_set(int r, int m) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::vector<bool> used(static_cast<size_t>(m), false);
    auto rec = [&](auto&& self) -> void {
        if (static_cast<int>(cur.size()) == r) {
            out.push_back(cur);
            return;
        }
        for (int v = 0; v < m; ++v) {
            if (used[v]) continue;
            used[v] = true;
            cur.push_back(v);
            self(self);
            cur.pop_back();
            used[v] = false;
        }
    };
    if (r <= m) rec(rec);
    return out;
}

}  // namespace opf

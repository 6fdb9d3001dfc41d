#include "operadforge/sparse.hpp"

#include <algorithm>

namespace opf {

sparse_matrix::sparse_matrix(const field& f, int rows, int cols)
    : f_(f), rows_(rows), cols_(cols), row_(static_cast<size_t>(rows)) {}

sparse_matrix sparse_matrix::identity(const field& f, int n) {
    sparse_matrix m(f, n, n);
    for (int i = 0; i < n; ++i) m.set(i, i, scalar::one(f));
    return m;
}

int sparse_matrix::nnz() const {
    int c = 0;
    for (const auto& r : row_) c += static_cast<int>(r.size());
    return c;
}

bool sparse_matrix::is_zero() const {
    for (const auto& r : row_)
        if (!r.empty()) return false;
    return true;
}

void sparse_matrix::set(int i, int j, const scalar& v) {
    if (v.is_zero())
        row_[i].erase(j);
    else
        row_[i][j] = v;
}

void sparse_matrix::add_to(int i, int j, const scalar& v) {
    if (v.is_zero()) return;
    auto it = row_[i].find(j);
    if (it == row_[i].end()) {
        row_[i].emplace(j, v);
    } else {
        scalar s = it->second + v;
        if (s.is_zero())
            row_[i].erase(it);
        else
            it->second = s;
    }
}

scalar sparse_matrix::get(int i, int j) const {
    auto it = row_[i].find(j);
    return it == row_[i].end() ? scalar::zero(f_) : it->second;
}

sparse_matrix sparse_matrix::operator*(const sparse_matrix& o) const {
    sparse_matrix out(f_, rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (const auto& [k, v] : row_[i])
            for (const auto& [j, w] : o.row_[k]) out.add_to(i, j, v * w);
    return out;
}

sparse_matrix sparse_matrix::operator+(const sparse_matrix& o) const {
    sparse_matrix out = *this;
    for (int i = 0; i < rows_; ++i)
        for (const auto& [j, v] : o.row_[i]) out.add_to(i, j, v);
    return out;
}

sparse_matrix sparse_matrix::operator-(const sparse_matrix& o) const { return *this + (-o); }

sparse_matrix sparse_matrix::operator-() const {
    sparse_matrix out = *this;
    for (auto& r : out.row_)
        for (auto& [j, v] : r) v = -v;
    return out;
}

sparse_matrix sparse_matrix::scaled(const scalar& c) const {
    sparse_matrix out(f_, rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (const auto& [j, v] : row_[i]) out.set(i, j, v * c);
    return out;
}

sparse_matrix sparse_matrix::transpose() const {
    sparse_matrix out(f_, cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (const auto& [j, v] : row_[i]) out.set(j, i, v);
    return out;
}

bool sparse_matrix::operator==(const sparse_matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) return false;
    for (int i = 0; i < rows_; ++i) {
        if (row_[i].size() != o.row_[i].size()) return false;
        auto a = row_[i].begin();
        auto b = o.row_[i].begin();
        for (; a != row_[i].end(); ++a, ++b)
            if (a->first != b->first || a->second != b->second) return false;
    }
    return true;
}

sparse_matrix sparse_matrix::hcat(const sparse_matrix& o) const {
    sparse_matrix out(f_, rows_, cols_ + o.cols_);
    for (int i = 0; i < rows_; ++i) {
        out.row_[i] = row_[i];
        for (const auto& [j, v] : o.row_[i]) out.row_[i].emplace(j + cols_, v);
    }
    return out;
}

sparse_matrix sparse_matrix::vcat(const sparse_matrix& o) const {
    sparse_matrix out(f_, rows_ + o.rows_, cols_);
    for (int i = 0; i < rows_; ++i) out.row_[i] = row_[i];
    for (int i = 0; i < o.rows_; ++i) out.row_[rows_ + i] = o.row_[i];
    return out;
}

sparse_matrix sparse_matrix::select_rows(const std::vector<int>& idx) const {
    sparse_matrix out(f_, static_cast<int>(idx.size()), cols_);
    for (size_t i = 0; i < idx.size(); ++i) out.row_[i] = row_[idx[i]];
    return out;
}

sparse_matrix sparse_matrix::select_cols(const std::vector<int>& idx) const {
    std::map<int, int> pos;
    for (size_t k = 0; k < idx.size(); ++k) pos[idx[k]] = static_cast<int>(k);
    sparse_matrix out(f_, rows_, static_cast<int>(idx.size()));
    for (int i = 0; i < rows_; ++i)
        for (const auto& [j, v] : row_[i]) {
            auto it = pos.find(j);
            if (it != pos.end()) out.set(i, it->second, v);
        }
    return out;
}

std::vector<scalar> sparse_matrix::apply(const std::vector<scalar>& x) const {
    std::vector<scalar> out(rows_, scalar::zero(f_));
    for (int i = 0; i < rows_; ++i)
        for (const auto& [j, v] : row_[i]) out[i] = out[i] + v * x[j];
    return out;
}

namespace {

// Elimination engine shared by rref/solve.  Only columns < pivot_limit may
// carry pivots.
rref_result rref_limited(const sparse_matrix& m, int pivot_limit) {
    const field& f = m.fld();
    std::vector<std::map<int, scalar>> work(static_cast<size_t>(m.rows()));
    for (int i = 0; i < m.rows(); ++i)
        for (const auto& [j, v] : m.row(i)) work[i].emplace(j, v);

    std::vector<bool> done(work.size(), false);
    std::vector<std::pair<int, int>> finished;  // (pivot col, row index)

    for (;;) {
        // pick the sparsest remaining row with a pivotable entry
        int best = -1;
        size_t best_nnz = 0;
        for (size_t i = 0; i < work.size(); ++i) {
            if (done[i]) continue;
            auto lead = work[i].begin();
            if (lead == work[i].end() || lead->first >= pivot_limit) continue;
            if (best < 0 || work[i].size() < best_nnz) {
                best = static_cast<int>(i);
                best_nnz = work[i].size();
            }
        }
        if (best < 0) break;

        int pc = work[best].begin()->first;
        scalar inv = work[best].begin()->second.inverse();
        if (!inv.is_one()) {
            for (auto& [j, v] : work[best]) v = v * inv;
        }
        for (size_t i = 0; i < work.size(); ++i) {
            if (static_cast<int>(i) == best) continue;
            auto it = work[i].find(pc);
            if (it == work[i].end()) continue;
            scalar c = it->second;
            for (const auto& [j, v] : work[best]) {
                scalar delta = -(c * v);
                auto jt = work[i].find(j);
                if (jt == work[i].end()) {
                    if (!delta.is_zero()) work[i].emplace(j, delta);
                } else {
                    scalar s = jt->second + delta;
                    if (s.is_zero())
                        work[i].erase(jt);
                    else
                        jt->second = s;
                }
            }
        }
        done[best] = true;
        finished.emplace_back(pc, best);
    }

    std::sort(finished.begin(), finished.end());
    rref_result out;
    out.r = sparse_matrix(f, static_cast<int>(finished.size()), m.cols());
    for (size_t i = 0; i < finished.size(); ++i) {
        out.pivot_cols.push_back(finished[i].first);
        for (const auto& [j, v] : work[finished[i].second]) out.r.set(static_cast<int>(i), j, v);
    }
    // leftover rows supported on columns >= pivot_limit signal inconsistency
    // for solve(); append them so callers can detect this.
    for (size_t i = 0; i < work.size(); ++i) {
        if (done[i] || work[i].empty()) continue;
        sparse_matrix extra(f, 1, m.cols());
        for (const auto& [j, v] : work[i]) extra.set(0, j, v);
        out.r = out.r.vcat(extra);
    }
    return out;
}

}  // namespace

rref_result rref(const sparse_matrix& m) { return rref_limited(m, m.cols()); }

int rank(const sparse_matrix& m) { return static_cast<int>(rref(m).pivot_cols.size()); }

sparse_matrix kernel_basis(const sparse_matrix& m) {
    rref_result e = rref(m);
    const field& f = m.fld();
    std::vector<bool> is_pivot(static_cast<size_t>(m.cols()), false);
    for (int p : e.pivot_cols) is_pivot[p] = true;
    std::vector<int> free_cols;
    for (int j = 0; j < m.cols(); ++j)
        if (!is_pivot[j]) free_cols.push_back(j);

    sparse_matrix out(f, m.cols(), static_cast<int>(free_cols.size()));
    for (size_t k = 0; k < free_cols.size(); ++k) {
        int fc = free_cols[k];
        out.set(fc, static_cast<int>(k), scalar::one(f));
        for (size_t i = 0; i < e.pivot_cols.size(); ++i) {
            scalar v = e.r.get(static_cast<int>(i), fc);
            if (!v.is_zero()) out.set(e.pivot_cols[i], static_cast<int>(k), -v);
        }
    }
    return out;
}

coker_presentation cokernel_presentation(const sparse_matrix& m) {
    const field& f = m.fld();
    rref_result e = rref(m.transpose());  // rows of e.r span im(m)^T
    std::vector<bool> is_pivot(static_cast<size_t>(m.rows()), false);
    for (int p : e.pivot_cols) is_pivot[p] = true;
    std::vector<int> quot;
    for (int j = 0; j < m.rows(); ++j)
        if (!is_pivot[j]) quot.push_back(j);

    coker_presentation out;
    out.dim = static_cast<int>(quot.size());
    out.proj = sparse_matrix(f, out.dim, m.rows());
    out.section = sparse_matrix(f, m.rows(), out.dim);
    for (size_t k = 0; k < quot.size(); ++k) {
        int c = quot[k];
        out.proj.set(static_cast<int>(k), c, scalar::one(f));
        out.section.set(c, static_cast<int>(k), scalar::one(f));
        for (size_t i = 0; i < e.pivot_cols.size(); ++i) {
            scalar v = e.r.get(static_cast<int>(i), c);
            if (!v.is_zero()) out.proj.set(static_cast<int>(k), e.pivot_cols[i], -v);
        }
    }
    return out;
}

std::optional<sparse_matrix> solve(const sparse_matrix& a, const sparse_matrix& b) {
    sparse_matrix aug = a.hcat(b);
    rref_result e = rref_limited(aug, a.cols());
    // any surviving row supported only on the b-part means no solution
    for (int i = static_cast<int>(e.pivot_cols.size()); i < e.r.rows(); ++i)
        if (!e.r.row(i).empty()) return std::nullopt;

    sparse_matrix x(a.fld(), a.cols(), b.cols());
    for (size_t i = 0; i < e.pivot_cols.size(); ++i)
        for (const auto& [j, v] : e.r.row(static_cast<int>(i)))
            if (j >= a.cols()) x.set(e.pivot_cols[i], j - a.cols(), v);
    return x;
}

}  // namespace opf

#pragma once

#include <map>
#include <optional>
#include <vector>

#include "operadforge/field.hpp"

namespace opf {

// Sparse matrix over an exact field.  Rows are ordered maps col -> value;
// zero entries are never stored.
class sparse_matrix {
  public:
    sparse_matrix() = default;
    sparse_matrix(const field& f, int rows, int cols);

    static sparse_matrix identity(const field& f, int n);

    const field& fld() const { return f_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int nnz() const;
    bool is_zero() const;

    void set(int i, int j, const scalar& v);
    void add_to(int i, int j, const scalar& v);
    scalar get(int i, int j) const;
    const std::map<int, scalar>& row(int i) const { return row_[i]; }

    sparse_matrix operator*(const sparse_matrix& o) const;
    sparse_matrix operator+(const sparse_matrix& o) const;
    sparse_matrix operator-(const sparse_matrix& o) const;
    sparse_matrix operator-() const;
    sparse_matrix scaled(const scalar& c) const;
    sparse_matrix transpose() const;

    bool operator==(const sparse_matrix& o) const;
    bool operator!=(const sparse_matrix& o) const { return !(*this == o); }

    // stack o to the right / below
    sparse_matrix hcat(const sparse_matrix& o) const;
    sparse_matrix vcat(const sparse_matrix& o) const;

    // rows (resp. columns) restricted to an index subset, in the given order
    sparse_matrix select_rows(const std::vector<int>& idx) const;
    sparse_matrix select_cols(const std::vector<int>& idx) const;

    std::vector<scalar> apply(const std::vector<scalar>& x) const;

  private:
    field f_;
    int rows_ = 0, cols_ = 0;
    std::vector<std::map<int, scalar>> row_;
};

struct rref_result {
    sparse_matrix r;              // reduced row echelon form
    std::vector<int> pivot_cols;  // one per nonzero row of r
};

// Deterministic exact Gaussian elimination.  Pivot rows are chosen sparsest
// first so the bar/smash complexes stay sparse during reduction.
rref_result rref(const sparse_matrix& m);

int rank(const sparse_matrix& m);

// Columns form a basis of ker(m); column count = cols - rank.
sparse_matrix kernel_basis(const sparse_matrix& m);

// Presentation of coker(m): proj * m = 0, proj surjective with kernel im(m),
// proj * section = identity on the quotient.
struct coker_presentation {
    sparse_matrix proj;     // target dim x rows
    sparse_matrix section;  // rows x target dim
    int dim = 0;
};
coker_presentation cokernel_presentation(const sparse_matrix& m);

// X with a * x = b, if solvable (columnwise).
std::optional<sparse_matrix> solve(const sparse_matrix& a, const sparse_matrix& b);

}  // namespace opf

#ifndef STOKESLAB_QMATRIX_HPP
#define STOKESLAB_QMATRIX_HPP

#include <optional>
#include <vector>

#include "stokeslab/exact.hpp"

namespace stokeslab {

// Dense rational matrix, row-major. All elimination uses the deterministic
// pivot rule "first nonzero entry in column order" so every derived basis is
// bit-reproducible.
struct QMatrix {
    int rows = 0, cols = 0;
    std::vector<Rat> a;

    QMatrix() = default;
    QMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {}

    Rat& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    const Rat& at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

    static QMatrix identity(int n);
    static QMatrix zero(int r, int c);

    QMatrix operator*(const QMatrix& o) const;
    QMatrix operator+(const QMatrix& o) const;
    QMatrix operator-(const QMatrix& o) const;
    QMatrix operator-() const;
    bool operator==(const QMatrix& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
    bool operator!=(const QMatrix& o) const { return !(*this == o); }

    bool is_zero() const;
    QMatrix transposed() const;
    QMatrix col(int j) const;
    QMatrix cols_slice(const std::vector<int>& idx) const;
    QMatrix rows_slice(const std::vector<int>& idx) const;
    void set_block(int i0, int j0, const QMatrix& b);
    QMatrix block(int i0, int j0, int r, int c) const;
};

QMatrix hstack(const QMatrix& a, const QMatrix& b);
QMatrix vstack(const QMatrix& a, const QMatrix& b);

struct RankKernel {
    int rank = 0;
    QMatrix kernel;  // cols = nullity; exact right-kernel basis
};
RankKernel rank_and_kernel(const QMatrix& m);
int rank_of(const QMatrix& m);

// Exact solve A X = B; std::nullopt when inconsistent. Free variables are
// set to zero (particular solution).
std::optional<QMatrix> solve(const QMatrix& A, const QMatrix& B);
// Throws SemanticError("singular") on non-invertible square input.
QMatrix inverse(const QMatrix& A);
bool is_invertible(const QMatrix& A);
Rat det(const QMatrix& A);

// Basis of the column space: the original columns at pivot positions.
QMatrix colspace_basis(const QMatrix& A);
// Intersection of column spans, as a basis.
QMatrix intersect_subspaces(const QMatrix& A, const QMatrix& B);
// Does span(A) lie inside span(B)?
bool subspace_contained(const QMatrix& A, const QMatrix& B);
bool subspaces_equal(const QMatrix& A, const QMatrix& B);

// Standard basis columns extending span(B) to the ambient space, chosen
// greedily in coordinate order.
QMatrix complement_extend(const QMatrix& B, int ambient);

// Presentation of ambient/span(B): proj maps a vector to its coordinates in
// the chosen complement basis (lift), modulo span(B).
struct Quotient {
    int dim = 0;
    QMatrix proj;  // dim x ambient
    QMatrix lift;  // ambient x dim
};
Quotient quotient_of(const QMatrix& B, int ambient);

// {v : A v in span(B)} as a basis.
QMatrix preimage_of_span(const QMatrix& A, const QMatrix& B);

std::string matrix_to_string(const QMatrix& m);

}  // namespace stokeslab

#endif

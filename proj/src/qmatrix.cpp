#include "stokeslab/qmatrix.hpp"

#include <algorithm>

namespace stokeslab {

QMatrix QMatrix::identity(int n) {
    QMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

QMatrix QMatrix::zero(int r, int c) { return QMatrix(r, c); }

QMatrix QMatrix::operator*(const QMatrix& o) const {
    if (cols != o.rows) throw InternalError("matrix shape mismatch in multiply");
    QMatrix out(rows, o.cols);
    for (int i = 0; i < rows; ++i)
        for (int k = 0; k < cols; ++k) {
            const Rat& v = at(i, k);
            if (sign(v) == 0) continue;
            for (int j = 0; j < o.cols; ++j) {
                const Rat& w = o.at(k, j);
                if (sign(w) == 0) continue;
                out.at(i, j) += v * w;
            }
        }
    return out;
}

QMatrix QMatrix::operator+(const QMatrix& o) const {
    if (rows != o.rows || cols != o.cols) throw InternalError("matrix shape mismatch in add");
    QMatrix out(rows, cols);
    for (std::size_t i = 0; i < a.size(); ++i) out.a[i] = a[i] + o.a[i];
    return out;
}

QMatrix QMatrix::operator-(const QMatrix& o) const {
    if (rows != o.rows || cols != o.cols) throw InternalError("matrix shape mismatch in sub");
    QMatrix out(rows, cols);
    for (std::size_t i = 0; i < a.size(); ++i) out.a[i] = a[i] - o.a[i];
    return out;
}

QMatrix QMatrix::operator-() const {
    QMatrix out(rows, cols);
    for (std::size_t i = 0; i < a.size(); ++i) out.a[i] = -a[i];
    return out;
}

bool QMatrix::is_zero() const {
    for (const auto& v : a)
        if (sign(v) != 0) return false;
    return true;
}

QMatrix QMatrix::transposed() const {
    QMatrix out(cols, rows);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) out.at(j, i) = at(i, j);
    return out;
}

QMatrix QMatrix::col(int j) const {
    QMatrix out(rows, 1);
    for (int i = 0; i < rows; ++i) out.at(i, 0) = at(i, j);
    return out;
}

QMatrix QMatrix::cols_slice(const std::vector<int>& idx) const {
    QMatrix out(rows, static_cast<int>(idx.size()));
    for (int j = 0; j < out.cols; ++j)
        for (int i = 0; i < rows; ++i) out.at(i, j) = at(i, idx[j]);
    return out;
}

QMatrix QMatrix::rows_slice(const std::vector<int>& idx) const {
    QMatrix out(static_cast<int>(idx.size()), cols);
    for (int i = 0; i < out.rows; ++i)
        for (int j = 0; j < cols; ++j) out.at(i, j) = at(idx[i], j);
    return out;
}

void QMatrix::set_block(int i0, int j0, const QMatrix& b) {
    for (int i = 0; i < b.rows; ++i)
        for (int j = 0; j < b.cols; ++j) at(i0 + i, j0 + j) = b.at(i, j);
}

QMatrix QMatrix::block(int i0, int j0, int r, int c) const {
    QMatrix out(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) out.at(i, j) = at(i0 + i, j0 + j);
    return out;
}

QMatrix hstack(const QMatrix& a, const QMatrix& b) {
    if (a.rows != b.rows) throw InternalError("hstack shape mismatch");
    QMatrix out(a.rows, a.cols + b.cols);
    out.set_block(0, 0, a);
    out.set_block(0, a.cols, b);
    return out;
}

QMatrix vstack(const QMatrix& a, const QMatrix& b) {
    if (a.cols != b.cols) throw InternalError("vstack shape mismatch");
    QMatrix out(a.rows + b.rows, a.cols);
    out.set_block(0, 0, a);
    out.set_block(a.rows, 0, b);
    return out;
}

namespace {

struct Rref {
    QMatrix R;
    std::vector<int> pivot_col;  // one per pivot row
};

// Gauss-Jordan with the first-nonzero pivot rule, skipping zero work.
Rref rref(QMatrix m) {
    Rref out;
    int r = 0;
    for (int c = 0; c < m.cols && r < m.rows; ++c) {
        int p = -1;
        for (int i = r; i < m.rows; ++i)
            if (sign(m.at(i, c)) != 0) {
                p = i;
                break;
            }
        if (p < 0) continue;
        if (p != r)
            for (int j = 0; j < m.cols; ++j) std::swap(m.at(p, j), m.at(r, j));
        Rat inv = 1 / m.at(r, c);
        if (inv != 1)
            for (int j = c; j < m.cols; ++j)
                if (sign(m.at(r, j)) != 0) m.at(r, j) *= inv;
        for (int i = 0; i < m.rows; ++i) {
            if (i == r) continue;
            Rat f = m.at(i, c);
            if (sign(f) == 0) continue;
            for (int j = c; j < m.cols; ++j) {
                if (sign(m.at(r, j)) == 0) continue;
                m.at(i, j) -= f * m.at(r, j);
            }
        }
        out.pivot_col.push_back(c);
        ++r;
    }
    out.R = std::move(m);
    return out;
}

}  // namespace

RankKernel rank_and_kernel(const QMatrix& m) {
    Rref rr = rref(m);
    RankKernel out;
    out.rank = static_cast<int>(rr.pivot_col.size());
    std::vector<bool> is_pivot(m.cols, false);
    for (int c : rr.pivot_col) is_pivot[c] = true;
    int nul = m.cols - out.rank;
    out.kernel = QMatrix(m.cols, nul);
    int k = 0;
    for (int c = 0; c < m.cols; ++c) {
        if (is_pivot[c]) continue;
        out.kernel.at(c, k) = 1;
        for (int pr = 0; pr < out.rank; ++pr)
            out.kernel.at(rr.pivot_col[pr], k) = -rr.R.at(pr, c);
        ++k;
    }
    return out;
}

int rank_of(const QMatrix& m) { return static_cast<int>(rref(m).pivot_col.size()); }

std::optional<QMatrix> solve(const QMatrix& A, const QMatrix& B) {
    if (A.rows != B.rows) throw InternalError("solve shape mismatch");
    Rref rr = rref(hstack(A, B));
    // Inconsistent iff some pivot falls in the B block.
    for (int c : rr.pivot_col)
        if (c >= A.cols) return std::nullopt;
    QMatrix X(A.cols, B.cols);
    for (std::size_t pr = 0; pr < rr.pivot_col.size(); ++pr)
        for (int j = 0; j < B.cols; ++j)
            X.at(rr.pivot_col[pr], j) = rr.R.at(static_cast<int>(pr), A.cols + j);
    return X;
}

QMatrix inverse(const QMatrix& A) {
    if (A.rows != A.cols) throw SemanticError("singular");
    auto X = solve(A, QMatrix::identity(A.rows));
    if (!X) throw SemanticError("singular");
    return *X;
}

bool is_invertible(const QMatrix& A) {
    return A.rows == A.cols && rank_of(A) == A.rows;
}

Rat det(const QMatrix& A) {
    if (A.rows != A.cols) throw InternalError("det of non-square");
    QMatrix m = A;
    Rat d = 1;
    for (int c = 0; c < m.cols; ++c) {
        int p = -1;
        for (int i = c; i < m.rows; ++i)
            if (sign(m.at(i, c)) != 0) {
                p = i;
                break;
            }
        if (p < 0) return Rat(0);
        if (p != c) {
            for (int j = 0; j < m.cols; ++j) std::swap(m.at(p, j), m.at(c, j));
            d = -d;
        }
        d *= m.at(c, c);
        Rat inv = 1 / m.at(c, c);
        for (int i = c + 1; i < m.rows; ++i) {
            Rat f = m.at(i, c) * inv;
            if (sign(f) == 0) continue;
            for (int j = c; j < m.cols; ++j)
                if (sign(m.at(c, j)) != 0) m.at(i, j) -= f * m.at(c, j);
        }
    }
    return d;
}

QMatrix colspace_basis(const QMatrix& A) {
    Rref rr = rref(A);
    return A.cols_slice(rr.pivot_col);
}

QMatrix intersect_subspaces(const QMatrix& A, const QMatrix& B) {
    if (A.cols == 0 || B.cols == 0) return QMatrix(A.rows, 0);
    RankKernel k = rank_and_kernel(hstack(A, -B));
    QMatrix top = k.kernel.block(0, 0, A.cols, k.kernel.cols);
    return colspace_basis(A * top);
}

bool subspace_contained(const QMatrix& A, const QMatrix& B) {
    if (A.cols == 0) return true;
    return solve(B, A).has_value();
}

bool subspaces_equal(const QMatrix& A, const QMatrix& B) {
    return subspace_contained(A, B) && subspace_contained(B, A);
}

QMatrix complement_extend(const QMatrix& B, int ambient) {
    QMatrix cur = B.cols == 0 ? QMatrix(ambient, 0) : B;
    int r = rank_of(cur);
    QMatrix ext(ambient, 0);
    for (int e = 0; e < ambient && r + ext.cols < ambient; ++e) {
        QMatrix cand(ambient, 1);
        cand.at(e, 0) = 1;
        QMatrix trial = hstack(hstack(cur, ext), cand);
        if (rank_of(trial) == r + ext.cols + 1) ext = hstack(ext, cand);
    }
    return ext;
}

Quotient quotient_of(const QMatrix& B, int ambient) {
    QMatrix bb = B.cols == 0 ? QMatrix(ambient, 0) : colspace_basis(B);
    QMatrix ext = complement_extend(bb, ambient);
    Quotient q;
    q.dim = ext.cols;
    q.lift = ext;
    QMatrix full = hstack(bb, ext);
    QMatrix inv = inverse(full);
    q.proj = inv.block(bb.cols, 0, ext.cols, ambient);
    return q;
}

QMatrix preimage_of_span(const QMatrix& A, const QMatrix& B) {
    // v with A v = B w for some w: kernel of [A | -B], top block, pushed
    // through nothing (we want v itself).
    RankKernel k = rank_and_kernel(hstack(A, B.cols == 0 ? QMatrix(A.rows, 0) : -B));
    QMatrix top = k.kernel.block(0, 0, A.cols, k.kernel.cols);
    return colspace_basis(top);
}

std::string matrix_to_string(const QMatrix& m) {
    std::string s = "[";
    for (int i = 0; i < m.rows; ++i) {
        s += "[";
        for (int j = 0; j < m.cols; ++j) {
            s += rat_to_string(m.at(i, j));
            if (j + 1 < m.cols) s += ",";
        }
        s += "]";
        if (i + 1 < m.rows) s += ",";
    }
    return s + "]";
}

}  // namespace stokeslab

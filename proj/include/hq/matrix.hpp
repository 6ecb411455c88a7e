#pragma once

// Dense matrices over K with exact linear algebra: Gaussian elimination,
// solving, inversion, kernels, and Hermitian congruence diagonalization
// (the workhorse behind inertia and rank-one decompositions).

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "hq/field.hpp"

namespace hq {

class MatrixK {
  public:
    MatrixK() = default;
    MatrixK(int rows, int cols) : rows_(rows), cols_(cols), e_(size_t(rows) * cols) {}

    static MatrixK identity(int n) {
        MatrixK m(n, n);
        for (int k = 0; k < n; ++k) m(k, k) = FieldElement(1);
        return m;
    }
    static MatrixK diagonal(const std::vector<FieldElement>& d) {
        MatrixK m(int(d.size()), int(d.size()));
        for (size_t k = 0; k < d.size(); ++k) m(int(k), int(k)) = d[k];
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    FieldElement& operator()(int i, int j) { return e_[size_t(i) * cols_ + j]; }
    const FieldElement& operator()(int i, int j) const { return e_[size_t(i) * cols_ + j]; }

    bool operator==(const MatrixK& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
    }
    bool operator!=(const MatrixK& o) const { return !(*this == o); }

    bool is_zero() const {
        for (const auto& x : e_)
            if (!x.is_zero()) return false;
        return true;
    }
    bool is_hermitian() const {
        if (rows_ != cols_) return false;
        for (int i = 0; i < rows_; ++i)
            for (int j = i; j < cols_; ++j)
                if ((*this)(i, j) != (*this)(j, i).conj()) return false;
        return true;
    }
    bool is_diagonal() const {
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j)
                if (i != j && !(*this)(i, j).is_zero()) return false;
        return true;
    }

    MatrixK conj_transpose() const {
        MatrixK m(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j).conj();
        return m;
    }
    MatrixK transpose() const {
        MatrixK m(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
        return m;
    }

    friend MatrixK operator+(const MatrixK& a, const MatrixK& b) {
        check(a.rows_ == b.rows_ && a.cols_ == b.cols_, Errc::dimension_mismatch, "matrix add");
        MatrixK r(a.rows_, a.cols_);
        for (size_t k = 0; k < a.e_.size(); ++k) r.e_[k] = a.e_[k] + b.e_[k];
        return r;
    }
    friend MatrixK operator-(const MatrixK& a, const MatrixK& b) {
        check(a.rows_ == b.rows_ && a.cols_ == b.cols_, Errc::dimension_mismatch, "matrix sub");
        MatrixK r(a.rows_, a.cols_);
        for (size_t k = 0; k < a.e_.size(); ++k) r.e_[k] = a.e_[k] - b.e_[k];
        return r;
    }
    friend MatrixK operator*(const MatrixK& a, const MatrixK& b) {
        check(a.cols_ == b.rows_, Errc::dimension_mismatch, "matrix mul");
        MatrixK r(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                if (a(i, k).is_zero()) continue;
                for (int j = 0; j < b.cols_; ++j) {
                    if (b(k, j).is_zero()) continue;
                    r(i, j) += a(i, k) * b(k, j);
                }
            }
        return r;
    }
    friend MatrixK operator*(const FieldElement& s, const MatrixK& a) {
        MatrixK r(a.rows_, a.cols_);
        for (size_t k = 0; k < a.e_.size(); ++k) r.e_[k] = s * a.e_[k];
        return r;
    }
    MatrixK operator-() const { return FieldElement(-1) * (*this); }

    MatrixK columns(const std::vector<int>& idx) const {
        MatrixK r(rows_, int(idx.size()));
        for (int i = 0; i < rows_; ++i)
            for (size_t j = 0; j < idx.size(); ++j) r(i, int(j)) = (*this)(i, idx[j]);
        return r;
    }
    std::vector<FieldElement> column(int j) const {
        std::vector<FieldElement> v(rows_);
        for (int i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }
    void set_column(int j, const std::vector<FieldElement>& v) {
        for (int i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
    }
    static MatrixK from_columns(const std::vector<std::vector<FieldElement>>& cols) {
        check(!cols.empty(), Errc::internal, "from_columns: empty");
        MatrixK r(int(cols[0].size()), int(cols.size()));
        for (size_t j = 0; j < cols.size(); ++j) r.set_column(int(j), cols[j]);
        return r;
    }

    // Row echelon reduction in place; returns pivot column indices.
    std::vector<int> rref() {
        std::vector<int> pivots;
        int r = 0;
        for (int c = 0; c < cols_ && r < rows_; ++c) {
            int p = -1;
            for (int i = r; i < rows_; ++i)
                if (!(*this)(i, c).is_zero()) {
                    p = i;
                    break;
                }
            if (p < 0) continue;
            swap_rows(p, r);
            FieldElement inv = (*this)(r, c).inverse();
            for (int j = c; j < cols_; ++j) (*this)(r, j) *= inv;
            for (int i = 0; i < rows_; ++i) {
                if (i == r || (*this)(i, c).is_zero()) continue;
                FieldElement f = (*this)(i, c);
                for (int j = c; j < cols_; ++j) (*this)(i, j) -= f * (*this)(r, j);
            }
            pivots.push_back(c);
            ++r;
        }
        return pivots;
    }

    int rank() const {
        MatrixK m = *this;
        return int(m.rref().size());
    }

    // Solve A X = B exactly; nullopt if inconsistent.  Free variables are set
    // to zero.
    static std::optional<MatrixK> solve(const MatrixK& a, const MatrixK& b) {
        check(a.rows_ == b.rows_, Errc::dimension_mismatch, "solve");
        MatrixK aug(a.rows_, a.cols_ + b.cols_);
        for (int i = 0; i < a.rows_; ++i) {
            for (int j = 0; j < a.cols_; ++j) aug(i, j) = a(i, j);
            for (int j = 0; j < b.cols_; ++j) aug(i, a.cols_ + j) = b(i, j);
        }
        auto pivots = aug.rref();
        for (int p : pivots)
            if (p >= a.cols_) return std::nullopt;  // pivot in the RHS block
        MatrixK x(a.cols_, b.cols_);
        for (size_t r = 0; r < pivots.size(); ++r)
            for (int j = 0; j < b.cols_; ++j) x(pivots[r], j) = aug(int(r), a.cols_ + j);
        return x;
    }

    std::optional<MatrixK> inverse() const {
        check(rows_ == cols_, Errc::dimension_mismatch, "inverse of non-square");
        auto x = solve(*this, identity(rows_));
        if (!x) return std::nullopt;
        // Singular matrices with consistent-looking systems are ruled out by a
        // rank check via the pivot count inside solve; verify anyway.
        if (!((*this) * (*x) == identity(rows_))) return std::nullopt;
        return x;
    }

    // Basis of the right kernel, as columns.
    MatrixK kernel() const {
        MatrixK m = *this;
        auto pivots = m.rref();
        std::vector<bool> is_pivot(cols_, false);
        for (int p : pivots) is_pivot[p] = true;
        std::vector<std::vector<FieldElement>> basis;
        for (int c = 0; c < cols_; ++c) {
            if (is_pivot[c]) continue;
            std::vector<FieldElement> v(cols_);
            v[c] = FieldElement(1);
            for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m(int(r), c);
            basis.push_back(std::move(v));
        }
        if (basis.empty()) return MatrixK(cols_, 0);
        return from_columns(basis);
    }

    FieldElement determinant() const {
        check(rows_ == cols_, Errc::dimension_mismatch, "determinant");
        MatrixK m = *this;
        FieldElement det(1);
        for (int c = 0; c < cols_; ++c) {
            int p = -1;
            for (int i = c; i < rows_; ++i)
                if (!m(i, c).is_zero()) {
                    p = i;
                    break;
                }
            if (p < 0) return FieldElement(0);
            if (p != c) {
                m.swap_rows(p, c);
                det = -det;
            }
            det *= m(c, c);
            FieldElement inv = m(c, c).inverse();
            for (int i = c + 1; i < rows_; ++i) {
                if (m(i, c).is_zero()) continue;
                FieldElement f = m(i, c) * inv;
                for (int j = c; j < cols_; ++j) m(i, j) -= f * m(c, j);
            }
        }
        return det;
    }

    void swap_rows(int i, int j) {
        if (i == j) return;
        for (int c = 0; c < cols_; ++c) std::swap((*this)(i, c), (*this)(j, c));
    }
    void swap_cols(int i, int j) {
        if (i == j) return;
        for (int r = 0; r < rows_; ++r) std::swap((*this)(r, i), (*this)(r, j));
    }

  private:
    int rows_ = 0, cols_ = 0;
    std::vector<FieldElement> e_;
};

// Result of diagonalizing a Hermitian matrix by *-congruence: X invertible
// with X* M X = diag(d), all over K.
struct CongruenceDiag {
    MatrixK x;
    std::vector<FieldElement> diag;  // real entries, possibly zero
};

// Hermitian congruence elimination.  Pivots on nonzero (real) diagonal
// entries; when the trailing block has an all-zero diagonal but a nonzero
// off-diagonal entry b, the column operation v_p += conj(b) v_q manufactures
// the positive diagonal entry 2|b|^2 and the loop continues, which realizes
// the hyperbolic step's (+1,-1) contribution.
inline CongruenceDiag congruence_diagonalize(const MatrixK& m) {
    check(m.is_hermitian(), Errc::not_hermitian, "congruence_diagonalize: not Hermitian");
    int n = m.rows();
    MatrixK a = m, x = MatrixK::identity(n);
    auto col_op = [&](int dst, int src, const FieldElement& f) {
        // v_dst += f * v_src  (columns of the congruence witness)
        for (int r = 0; r < n; ++r) x(r, dst) += f * x(r, src);
        for (int r = 0; r < n; ++r) a(r, dst) += f * a(r, src);          // A := A E
        for (int c = 0; c < n; ++c) a(dst, c) += f.conj() * a(src, c);   // A := E* A
    };
    auto col_swap = [&](int i, int j) {
        x.swap_cols(i, j);
        a.swap_cols(i, j);
        a.swap_rows(i, j);
    };
    for (int k = 0; k < n; ++k) {
        if (a(k, k).is_zero()) {
            int p = -1;
            for (int i = k + 1; i < n; ++i)
                if (!a(i, i).is_zero()) {
                    p = i;
                    break;
                }
            if (p >= 0) {
                col_swap(k, p);
            } else {
                // all-zero trailing diagonal: look for an off-diagonal entry
                int pi = -1, pj = -1;
                for (int i = k; i < n && pi < 0; ++i)
                    for (int j = i + 1; j < n; ++j)
                        if (!a(i, j).is_zero()) {
                            pi = i;
                            pj = j;
                            break;
                        }
                if (pi < 0) break;  // trailing block is zero
                col_op(pi, pj, a(pi, pj).conj());
                col_swap(k, pi);
            }
        }
        FieldElement d = a(k, k);
        FieldElement dinv = d.inverse();
        for (int j = k + 1; j < n; ++j) {
            if (a(k, j).is_zero()) continue;
            col_op(j, k, -(a(k, j) * dinv));
        }
    }
    CongruenceDiag out;
    out.x = x;
    out.diag.resize(n);
    for (int k = 0; k < n; ++k) out.diag[k] = a(k, k);
    return out;
}

}  // namespace hq

#pragma once

// Veronese maps Z_d and the induced action of linear maps on degree-d
// monomials.  The basis order fixed here (graded lex, z_0 heaviest) is the
// index convention for every form matrix in the library.

#include <map>
#include <vector>

#include "hq/matrix.hpp"
#include "hq/polynomial.hpp"

namespace hq {

// All C(n+d, d) multi-indices of degree d in n+1 variables, lex descending
// with z_0 heaviest.  (n=2, d=2) -> (200),(110),(101),(020),(011),(002).
inline std::vector<MultiIndex> veronese_basis(int n, int d) {
    check(n >= 0 && d >= 0, Errc::bad_input, "veronese_basis: n, d must be nonnegative");
    std::vector<MultiIndex> out;
    std::vector<int> cur(n + 1, 0);
    auto rec = [&](auto&& self, int var, int rem) -> void {
        if (var == n) {
            cur[var] = rem;
            out.push_back(MultiIndex(cur));
            return;
        }
        for (int e = rem; e >= 0; --e) {
            cur[var] = e;
            self(self, var + 1, rem - e);
        }
    };
    rec(rec, 0, d);
    return out;
}

inline long binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    long r = 1;
    for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
    return r;
}

// Index lookup into veronese_basis(n, d).
class VeroneseIndex {
  public:
    VeroneseIndex(int n, int d) : basis_(veronese_basis(n, d)) {
        for (size_t k = 0; k < basis_.size(); ++k) pos_[basis_[k].e] = int(k);
    }
    int size() const { return int(basis_.size()); }
    const MultiIndex& at(int k) const { return basis_[k]; }
    const std::vector<MultiIndex>& all() const { return basis_; }
    int index_of(const MultiIndex& m) const {
        auto it = pos_.find(m.e);
        check(it != pos_.end(), Errc::internal, "VeroneseIndex: multi-index out of range");
        return it->second;
    }

  private:
    std::vector<MultiIndex> basis_;
    std::map<std::vector<int>, int> pos_;
};

// The matrix Xhat with Z_d(Xz) = Xhat Z_d(z).  Row alpha holds the
// coefficients of prod_i (Xz)_i^(alpha_i) over the degree-d basis.
// Functorial: induced(XY, d) = induced(X, d) * induced(Y, d).
inline MatrixK induced_matrix(const MatrixK& x, int d) {
    check(x.rows() == x.cols(), Errc::dimension_mismatch, "induced_matrix: X must be square");
    int n = x.rows() - 1;
    VeroneseIndex vi(n, d);
    MatrixK out(vi.size(), vi.size());
    // linear forms (Xz)_i
    std::vector<Polynomial> lin;
    for (int i = 0; i <= n; ++i) {
        Polynomial p(n + 1);
        for (int j = 0; j <= n; ++j) p.add_term(MultiIndex::unit(n + 1, j), x(i, j));
        lin.push_back(std::move(p));
    }
    for (int row = 0; row < vi.size(); ++row) {
        const MultiIndex& alpha = vi.at(row);
        Polynomial prod = Polynomial::constant(n + 1, FieldElement(1));
        for (int i = 0; i <= n; ++i)
            if (alpha.e[i] > 0) prod = prod * lin[i].pow(alpha.e[i]);
        for (const auto& [m, c] : prod.terms()) out(row, vi.index_of(MultiIndex(m))) = c;
    }
    return out;
}

}  // namespace hq

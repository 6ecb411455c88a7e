#pragma once

// Bihomogeneous Hermitian polynomials p(z, zbar) = <M Z_d, Z_d> stored as
// Hermitian coefficient matrices indexed by veronese_basis(n, d).
// Row index = conjugated multi-index, column index = holomorphic one, so
// M[delta][gamma] multiplies z^gamma * conj(z)^delta; this reproduces the
// matrix displays the canonical pairs multiply out to.

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hq/matrix.hpp"
#include "hq/veronese.hpp"

namespace hq {

struct Inertia {
    int n_plus = 0, n_minus = 0, n_zero = 0;
    bool operator==(const Inertia& o) const {
        return n_plus == o.n_plus && n_minus == o.n_minus && n_zero == o.n_zero;
    }
    bool operator!=(const Inertia& o) const { return !(*this == o); }
    int rank() const { return n_plus + n_minus; }
    std::string str() const {
        return "(" + std::to_string(n_plus) + ", " + std::to_string(n_minus) + ", " +
               std::to_string(n_zero) + ")";
    }
};

class HermitianForm {
  public:
    HermitianForm() = default;
    HermitianForm(int n, int d, MatrixK m) : n_(n), d_(d), m_(std::move(m)) {
        VeroneseIndex vi(n_, d_);
        check(m_.rows() == vi.size() && m_.cols() == vi.size(), Errc::dimension_mismatch,
              "form matrix size does not match C(n+d, d)");
        check(m_.is_hermitian(), Errc::not_hermitian, "form matrix is not Hermitian");
    }

    static HermitianForm zero(int n, int d) {
        return HermitianForm(n, d, MatrixK(VeroneseIndex(n, d).size(), VeroneseIndex(n, d).size()));
    }
    static HermitianForm constant_one(int n) {
        MatrixK m(1, 1);
        m(0, 0) = FieldElement(1);
        return HermitianForm(n, 0, m);
    }
    // <diag(d) z, z> of bidegree (1,1)
    static HermitianForm diagonal_deg1(int n, const std::vector<FieldElement>& diag) {
        check(int(diag.size()) == n + 1, Errc::dimension_mismatch, "diagonal_deg1");
        return HermitianForm(n, 1, MatrixK::diagonal(diag));
    }

    int n() const { return n_; }
    int d() const { return d_; }
    const MatrixK& matrix() const { return m_; }
    int size() const { return m_.rows(); }

    bool operator==(const HermitianForm& o) const {
        return n_ == o.n_ && d_ == o.d_ && m_ == o.m_;
    }
    bool operator!=(const HermitianForm& o) const { return !(*this == o); }
    bool is_zero() const { return m_.is_zero(); }

    FieldElement eval(const std::vector<FieldElement>& z) const {
        check(int(z.size()) == n_ + 1, Errc::dimension_mismatch, "form eval");
        VeroneseIndex vi(n_, d_);
        std::vector<FieldElement> zv(vi.size());
        for (int k = 0; k < vi.size(); ++k) {
            FieldElement t(1);
            for (int j = 0; j <= n_; ++j)
                if (vi.at(k).e[j] > 0) t *= z[j].pow(vi.at(k).e[j]);
            zv[k] = t;
        }
        FieldElement acc(0);
        for (int i = 0; i < vi.size(); ++i)
            for (int j = 0; j < vi.size(); ++j)
                if (!m_(i, j).is_zero()) acc += m_(i, j) * zv[j] * zv[i].conj();
        return acc;
    }

    // The underlying real polynomial written as a polynomial in the n+1
    // squared moduli x_j = |z_j|^2 -- only valid for diagonal matrices.
    Polynomial diagonal_as_modulus_poly() const {
        check(m_.is_diagonal(), Errc::bad_input, "form is not diagonal");
        VeroneseIndex vi(n_, d_);
        Polynomial p(n_ + 1);
        for (int k = 0; k < vi.size(); ++k) p.add_term(vi.at(k), m_(k, k));
        return p;
    }

    std::string str() const {
        std::ostringstream os;
        os << "form n=" << n_ << " d=" << d_ << "\n";
        for (int i = 0; i < m_.rows(); ++i) {
            for (int j = 0; j < m_.cols(); ++j) {
                if (j) os << ", ";
                os << m_(i, j).str();
            }
            os << "\n";
        }
        return os.str();
    }
    static HermitianForm parse(const std::string& text);

  private:
    int n_ = 0, d_ = 0;
    MatrixK m_;
};

// Coefficient matrix of the polynomial product.  Bilinear, Hermitian by
// construction.
inline HermitianForm multiply_forms(const HermitianForm& p, const HermitianForm& q) {
    check(p.n() == q.n(), Errc::dimension_mismatch, "multiply_forms: variable counts differ");
    int n = p.n(), d = p.d() + q.d();
    VeroneseIndex vp(n, p.d()), vq(n, q.d()), vr(n, d);
    MatrixK r(vr.size(), vr.size());
    for (int ip = 0; ip < vp.size(); ++ip)
        for (int jp = 0; jp < vp.size(); ++jp) {
            const FieldElement& a = p.matrix()(ip, jp);
            if (a.is_zero()) continue;
            for (int iq = 0; iq < vq.size(); ++iq)
                for (int jq = 0; jq < vq.size(); ++jq) {
                    const FieldElement& b = q.matrix()(iq, jq);
                    if (b.is_zero()) continue;
                    int row = vr.index_of(vp.at(ip) + vq.at(iq));
                    int col = vr.index_of(vp.at(jp) + vq.at(jq));
                    r(row, col) += a * b;
                }
        }
    return HermitianForm(n, d, std::move(r));
}

// The unique A with multiply_forms(A, J) = B, when it exists.  Implemented as
// an exact dense linear solve on matrix entries; a nonzero residual signals
// NotDivisible (nullopt).
inline std::optional<HermitianForm> divide_by_form(const HermitianForm& b,
                                                   const HermitianForm& j) {
    check(b.n() == j.n(), Errc::dimension_mismatch, "divide_by_form: variable counts differ");
    check(!j.is_zero(), Errc::bad_input, "divide_by_form: zero divisor");
    check(b.d() >= j.d(), Errc::bad_input, "divide_by_form: degree of B below degree of J");
    int n = b.n(), da = b.d() - j.d();
    VeroneseIndex va(n, da), vj(n, j.d()), vb(n, b.d());
    int sa = va.size(), sj = vj.size(), sb = vb.size();
    // system: for each (row,col) of B, sum over J entries hitting it
    MatrixK sys(sb * sb, sa * sa), rhs(sb * sb, 1);
    for (int ib = 0; ib < sb; ++ib)
        for (int jb = 0; jb < sb; ++jb) rhs(ib * sb + jb, 0) = b.matrix()(ib, jb);
    for (int ia = 0; ia < sa; ++ia)
        for (int ja = 0; ja < sa; ++ja)
            for (int ij = 0; ij < sj; ++ij)
                for (int jj = 0; jj < sj; ++jj) {
                    const FieldElement& c = j.matrix()(ij, jj);
                    if (c.is_zero()) continue;
                    int row = vb.index_of(va.at(ia) + vj.at(ij));
                    int col = vb.index_of(va.at(ja) + vj.at(jj));
                    sys(row * sb + col, ia * sa + ja) += c;
                }
    auto sol = MatrixK::solve(sys, rhs);
    if (!sol) return std::nullopt;
    MatrixK am(sa, sa);
    for (int ia = 0; ia < sa; ++ia)
        for (int ja = 0; ja < sa; ++ja) am(ia, ja) = (*sol)(ia * sa + ja, 0);
    // A is Hermitian automatically (uniqueness of the quotient); validate.
    HermitianForm a(n, da, std::move(am));
    if (multiply_forms(a, j) != b) return std::nullopt;
    return a;
}

// Sylvester inertia by exact Hermitian congruence elimination; invariant
// under *-congruence over K.
inline Inertia inertia_of(const MatrixK& m) {
    auto cd = congruence_diagonalize(m);
    Inertia in;
    for (const auto& dk : cd.diag) {
        int s = dk.sign();
        if (s > 0) ++in.n_plus;
        else if (s < 0) ++in.n_minus;
        else ++in.n_zero;
    }
    return in;
}

inline Inertia inertia(const HermitianForm& p) { return inertia_of(p.matrix()); }

// The form <V F Z, F Z> = <F* V F Z, Z> for V = diag(+1 x c, -1 x d_neg).
inline HermitianForm from_map(const MatrixK& f, int c, int d_neg, int n, int d) {
    VeroneseIndex vi(n, d);
    check(f.cols() == vi.size(), Errc::dimension_mismatch,
          "from_map: F column count does not match C(n+d, d)");
    check(f.rows() == c + d_neg, Errc::dimension_mismatch,
          "from_map: F row count does not match the signature");
    MatrixK vf = f;
    for (int r = c; r < c + d_neg; ++r)
        for (int j = 0; j < f.cols(); ++j) vf(r, j) = -vf(r, j);
    return HermitianForm(n, d, f.conj_transpose() * vf);
}

inline HermitianForm HermitianForm::parse(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    check(bool(std::getline(is, line)), Errc::parse_error, "empty form text");
    int n = -1, d = -1;
    {
        std::istringstream hs(line);
        std::string tag, kn, kd;
        hs >> tag >> kn >> kd;
        check(tag == "form" && kn.rfind("n=", 0) == 0 && kd.rfind("d=", 0) == 0,
              Errc::parse_error, "form header must be 'form n=<n> d=<d>'");
        n = std::stoi(kn.substr(2));
        d = std::stoi(kd.substr(2));
    }
    VeroneseIndex vi(n, d);
    MatrixK m(vi.size(), vi.size());
    for (int i = 0; i < vi.size(); ++i) {
        check(bool(std::getline(is, line)), Errc::parse_error,
              "form matrix: expected " + std::to_string(vi.size()) + " rows");
        size_t start = 0;
        for (int j = 0; j < vi.size(); ++j) {
            size_t comma = line.find(',', start);
            std::string cell = comma == std::string::npos ? line.substr(start)
                                                          : line.substr(start, comma - start);
            check(j == vi.size() - 1 || comma != std::string::npos, Errc::parse_error,
                  "form matrix row " + std::to_string(i + 1) + ": expected " +
                      std::to_string(vi.size()) + " entries");
            m(i, j) = FieldElement::parse(cell);
            start = comma == std::string::npos ? line.size() : comma + 1;
        }
    }
    return HermitianForm(n, d, std::move(m));
}

}  // namespace hq

#pragma once

// Canonical forms of pairs of Hermitian matrices under simultaneous
// *-congruence, pencil eigenstructure, simultaneous diagonalization, and
// pair-equivalence decisions.  Sizes are capped at 4; spectra must factor
// into linear factors with roots in K or irreducible quadratics over K
// (anything beyond raises unsupported_spectrum -- a desk-scale limit, not a
// math error).

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hq/forms.hpp"

namespace hq {

// ---------------------------------------------------------------------------
// univariate polynomials over K (dense, coeff[k] * t^k)
// ---------------------------------------------------------------------------
namespace upoly {

using Poly = std::vector<FieldElement>;

inline void trim(Poly& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}
inline int deg(const Poly& p) { return int(p.size()) - 1; }
inline bool is_zero(const Poly& p) { return p.empty(); }

inline Poly add(const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()));
    for (size_t k = 0; k < r.size(); ++k) {
        if (k < a.size()) r[k] += a[k];
        if (k < b.size()) r[k] += b[k];
    }
    trim(r);
    return r;
}
inline Poly scale(const Poly& a, const FieldElement& s) {
    if (s.is_zero()) return {};
    Poly r = a;
    for (auto& c : r) c *= s;
    return r;
}
inline Poly mul(const Poly& a, const Poly& b) {
    if (is_zero(a) || is_zero(b)) return {};
    Poly r(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    trim(r);
    return r;
}
inline Poly monic(const Poly& a) {
    if (is_zero(a)) return a;
    return scale(a, a.back().inverse());
}
// a = q * b + r
inline std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    check(!is_zero(b), Errc::singular, "polynomial division by zero");
    Poly r = a, q;
    int db = deg(b);
    FieldElement lead_inv = b.back().inverse();
    while (deg(r) >= db) {
        int shift = deg(r) - db;
        FieldElement f = r.back() * lead_inv;
        if (int(q.size()) < shift + 1) q.resize(shift + 1);
        q[shift] += f;
        for (int k = 0; k <= db; ++k) r[shift + k] -= f * b[k];
        trim(r);
        if (is_zero(r)) break;
    }
    trim(q);
    return {q, r};
}
inline Poly gcd(Poly a, Poly b) {
    while (!is_zero(b)) {
        auto [q, r] = divmod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a);
}
inline Poly derivative(const Poly& a) {
    if (a.size() <= 1) return {};
    Poly r(a.size() - 1);
    for (size_t k = 1; k < a.size(); ++k) r[k - 1] = FieldElement(long(k)) * a[k];
    return r;
}
inline bool coeffs_real(const Poly& a) {
    for (const auto& c : a)
        if (!c.is_real()) return false;
    return true;
}
inline bool coeffs_rational(const Poly& a) {
    for (const auto& c : a)
        if (!c.is_rational()) return false;
    return true;
}
inline MatrixK eval_at(const Poly& p, const MatrixK& h) {
    int n = h.rows();
    MatrixK acc(n, n);
    for (int k = deg(p); k >= 0; --k) {
        acc = acc * h;
        for (int i = 0; i < n; ++i) acc(i, i) += p[k];
    }
    return acc;
}

}  // namespace upoly

// monic characteristic polynomial of H by the Faddeev-LeVerrier recursion
inline upoly::Poly char_poly(const MatrixK& h) {
    int m = h.rows();
    upoly::Poly chi(m + 1);
    chi[m] = FieldElement(1);
    MatrixK mk = MatrixK::identity(m);
    for (int k = 1; k <= m; ++k) {
        MatrixK hm = h * mk;
        FieldElement tr(0);
        for (int i = 0; i < m; ++i) tr += hm(i, i);
        FieldElement c = -(tr / FieldElement(long(k)));
        chi[m - k] = c;
        mk = hm;
        for (int i = 0; i < m; ++i) mk(i, i) += c;
    }
    return chi;
}

// lambda^2 + p lambda + q, irreducible over K, real coefficients.
struct QuadraticTag {
    FieldElement p, q;
    bool operator==(const QuadraticTag& o) const { return p == o.p && q == o.q; }
};

struct EigenClass {
    std::variant<FieldElement, QuadraticTag> value;
    int multiplicity = 0;             // per root
    std::vector<int> jordan;          // block sizes, descending (per root for tags)

    bool is_linear() const { return std::holds_alternative<FieldElement>(value); }
    const FieldElement& root() const { return std::get<FieldElement>(value); }
    const QuadraticTag& tag() const { return std::get<QuadraticTag>(value); }
};

namespace detail {

// squarefree decomposition (Yun): returns {squarefree factor, multiplicity}
inline std::vector<std::pair<upoly::Poly, int>> squarefree(const upoly::Poly& f0) {
    using namespace upoly;
    std::vector<std::pair<Poly, int>> out;
    Poly f = monic(f0);
    Poly g = gcd(f, derivative(f));
    Poly w = divmod(f, g).first;
    int mult = 1;
    while (deg(w) > 0) {
        Poly y = gcd(w, g);
        Poly fac = divmod(w, y).first;
        if (deg(fac) > 0) out.push_back({monic(fac), mult});
        w = y;
        g = divmod(g, y).first;
        ++mult;
    }
    return out;
}

// rational roots of a monic polynomial with rational coefficients
inline std::vector<Rational> rational_roots(const upoly::Poly& f) {
    using namespace upoly;
    std::vector<Rational> roots;
    // clear denominators: integer coefficients a_k, leading a_n
    Int lcm = 1;
    for (const auto& c : f) {
        Rational q = *c.as_rational();
        lcm = lcm / gcd(lcm, q.get_den()) * q.get_den();
    }
    std::vector<Int> a(f.size());
    for (size_t k = 0; k < f.size(); ++k) {
        Rational q = *f[k].as_rational() * Rational(lcm);
        a[k] = q.get_num();
    }
    Int a0 = a[0], an = a.back();
    if (a0 == 0) {
        roots.push_back(Rational(0));
        return roots;  // caller deflates and retries
    }
    auto divisors = [](Int v) {
        std::vector<Int> ds;
        v = abs(v);
        for (Int d = 1; d * d <= v; ++d)
            if (v % d == 0) {
                ds.push_back(d);
                ds.push_back(v / d);
            }
        return ds;
    };
    // desk-scale cap on divisor enumeration
    if (abs(a0) > Int("1000000000000") || abs(an) > Int("1000000000000"))
        fail(Errc::unsupported_spectrum, "characteristic polynomial coefficients too large");
    for (const Int& p : divisors(a0))
        for (const Int& q : divisors(an))
            for (int s : {1, -1}) {
                Rational cand(s * p, q);
                cand.canonicalize();
                FieldElement v(0);
                for (int k = deg(f); k >= 0; --k) v = v * FieldElement(cand) + f[k];
                if (v.is_zero() &&
                    std::find(roots.begin(), roots.end(), cand) == roots.end())
                    roots.push_back(cand);
            }
    return roots;
}

// split a monic quadratic with coefficients in K_real: roots in K, or an
// irreducible tag
inline std::variant<std::pair<FieldElement, FieldElement>, QuadraticTag> split_quadratic(
    const FieldElement& p, const FieldElement& q) {
    FieldElement disc = p * p - FieldElement(4) * q;
    auto d = disc.sqrt();
    if (!d) return QuadraticTag{p, q};
    FieldElement half(Rational(1, 2));
    return std::make_pair((-p + *d) * half, (-p - *d) * half);
}

// factor a monic squarefree polynomial with coefficients in K_real into
// linear roots in K plus irreducible quadratic tags; unsupported otherwise
inline void split_squarefree(const upoly::Poly& g, std::vector<FieldElement>& roots,
                             std::vector<QuadraticTag>& tags) {
    using namespace upoly;
    int e = deg(g);
    if (e <= 0) return;
    if (e == 1) {
        roots.push_back(-g[0]);
        return;
    }
    if (e == 2) {
        auto s = split_quadratic(g[1], g[0]);
        if (std::holds_alternative<QuadraticTag>(s)) {
            tags.push_back(std::get<QuadraticTag>(s));
        } else {
            auto [r1, r2] = std::get<std::pair<FieldElement, FieldElement>>(s);
            roots.push_back(r1);
            roots.push_back(r2);
        }
        return;
    }
    if (!coeffs_rational(g))
        fail(Errc::unsupported_spectrum,
             "cannot factor a degree-" + std::to_string(e) +
                 " characteristic factor with irrational coefficients");
    // peel rational roots
    Poly rem = g;
    bool progress = true;
    while (progress && deg(rem) > 2) {
        progress = false;
        for (const Rational& r : rational_roots(rem)) {
            Poly lin{FieldElement(-Rational(r)), FieldElement(1)};
            auto [quo, res] = divmod(rem, lin);
            check(is_zero(res), Errc::internal, "rational root does not divide");
            roots.push_back(FieldElement(r));
            rem = quo;
            progress = true;
            break;
        }
    }
    if (deg(rem) <= 2) {
        split_squarefree(rem, roots, tags);
        return;
    }
    if (deg(rem) == 3)
        fail(Errc::unsupported_spectrum,
             "irreducible cubic factor: roots have odd degree, outside K");
    // quartic with rational coefficients and no rational root: try a split
    // into two K-real quadratics via a rational root of the resolvent cubic
    // of the depressed quartic t^4 + p t^2 + q t + r.
    {
        FieldElement four(4), shift = rem[3] / four;
        // depress: lambda = t - shift kills the cubic coefficient
        Poly dep{};
        {
            Poly t_minus{-shift, FieldElement(1)};
            Poly power{FieldElement(1)};
            for (int k = 0; k <= 4; ++k) {
                dep = add(dep, scale(power, rem[k]));
                power = mul(power, t_minus);
            }
        }
        check(deg(dep) == 4 && dep[3].is_zero(), Errc::internal, "quartic depression failed");
        FieldElement p = dep[2], q = dep[1], r = dep[0];
        // resolvent: y^3 + 2p y^2 + (p^2 - 4r) y - q^2, rational coefficients
        Poly resolvent{-(q * q), p * p - four * r, FieldElement(2) * p, FieldElement(1)};
        for (const Rational& rr : rational_roots(resolvent)) {
            if (rr <= 0) continue;  // need y = s^2 with s real nonzero
            auto s = FieldElement(Rational(rr)).sqrt();
            if (!s || !s->is_real()) continue;
            // t^4 + p t^2 + q t + r = (t^2 + s t + u)(t^2 - s t + v)
            FieldElement half(Rational(1, 2));
            FieldElement u = (p + *s * *s - q / *s) * half;
            FieldElement v = (p + *s * *s + q / *s) * half;
            Poly f1{u, *s, FieldElement(1)}, f2{v, -*s, FieldElement(1)};
            if (mul(f1, f2) == dep) {
                // undo the shift: roots of rem are roots of dep minus shift
                std::vector<FieldElement> sub;
                std::vector<QuadraticTag> subtags;
                split_squarefree(f1, sub, subtags);
                split_squarefree(f2, sub, subtags);
                for (auto& root : sub) roots.push_back(root - shift);
                for (auto& tg : subtags) {
                    // (x+shift)^2 + p(x+shift) + q recentered
                    FieldElement np = tg.p + FieldElement(2) * shift;
                    FieldElement nq = tg.q + tg.p * shift + shift * shift;
                    tags.push_back(QuadraticTag{np, nq});
                }
                return;
            }
        }
    }
    fail(Errc::unsupported_spectrum, "irreducible quartic factor outside the supported ladder");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// pairs and spectra
// ---------------------------------------------------------------------------

struct HermitianPair {
    MatrixK j, a;

    HermitianPair(MatrixK J, MatrixK A) : j(std::move(J)), a(std::move(A)) {
        check(j.rows() == a.rows() && j.cols() == a.cols(), Errc::dimension_mismatch,
              "pair matrices differ in size");
        check(j.is_hermitian() && a.is_hermitian(), Errc::not_hermitian,
              "pair matrices must be Hermitian");
        check(!j.determinant().is_zero(), Errc::singular, "J must be nonsingular");
    }
    int size() const { return j.rows(); }
};

inline std::vector<EigenClass> pencil_eigenstructure(const HermitianPair& pair) {
    int m = pair.size();
    check(m <= 8, Errc::unsupported_spectrum, "pencil size above the desk-scale cap");
    MatrixK h = *pair.j.inverse() * pair.a;
    upoly::Poly chi = char_poly(h);
    check(upoly::coeffs_real(chi), Errc::internal, "characteristic polynomial is not real");
    std::vector<EigenClass> out;
    for (const auto& [fac, mult] : detail::squarefree(chi)) {
        std::vector<FieldElement> roots;
        std::vector<QuadraticTag> tags;
        detail::split_squarefree(fac, roots, tags);
        for (const auto& lam : roots) {
            EigenClass ec;
            ec.value = lam;
            ec.multiplicity = mult;
            // jordan sizes from kernel dimensions of (H - lam)^k
            MatrixK shifted = h;
            for (int i = 0; i < m; ++i) shifted(i, i) -= lam;
            std::vector<int> kdim{0};
            MatrixK pw = MatrixK::identity(m);
            for (int k = 1; k <= mult; ++k) {
                pw = pw * shifted;
                kdim.push_back(m - pw.rank());
            }
            for (int k = 1; k <= mult; ++k) {
                int blocks_ge_k = kdim[k] - kdim[k - 1];
                for (int b = int(ec.jordan.size()); b < blocks_ge_k; ++b) ec.jordan.push_back(0);
                for (int b = 0; b < blocks_ge_k; ++b) ++ec.jordan[b];
            }
            std::sort(ec.jordan.rbegin(), ec.jordan.rend());
            out.push_back(std::move(ec));
        }
        for (const auto& tg : tags) {
            EigenClass ec;
            ec.value = tg;
            ec.multiplicity = mult;
            MatrixK s = upoly::eval_at(upoly::Poly{tg.q, tg.p, FieldElement(1)}, h);
            std::vector<int> kdim{0};
            MatrixK pw = MatrixK::identity(m);
            for (int k = 1; k <= mult; ++k) {
                pw = pw * s;
                kdim.push_back(m - pw.rank());
            }
            for (int k = 1; k <= mult; ++k) {
                int blocks_ge_k = (kdim[k] - kdim[k - 1]) / 2;  // conjugate roots pair up
                for (int b = int(ec.jordan.size()); b < blocks_ge_k; ++b) ec.jordan.push_back(0);
                for (int b = 0; b < blocks_ge_k; ++b) ++ec.jordan[b];
            }
            std::sort(ec.jordan.rbegin(), ec.jordan.rend());
            out.push_back(std::move(ec));
        }
    }
    // deterministic order: linear roots first (by total order), then tags
    std::sort(out.begin(), out.end(), [](const EigenClass& x, const EigenClass& y) {
        if (x.is_linear() != y.is_linear()) return x.is_linear();
        if (x.is_linear()) return FieldElement::total_less(x.root(), y.root());
        if (x.tag().p != y.tag().p) return FieldElement::total_less(x.tag().p, y.tag().p);
        return FieldElement::total_less(x.tag().q, y.tag().q);
    });
    return out;
}

// ---------------------------------------------------------------------------
// canonical blocks
// ---------------------------------------------------------------------------

struct CanonicalBlock {
    enum class Kind { diag, delta, delta_alt, mn, complex_pair };
    Kind kind = Kind::diag;
    int size = 1;     // total block size (complex_pair: 2*jordan size)
    int sign = 1;     // for diag/delta/delta_alt
    FieldElement alpha, beta;  // diag: a-value; delta: alpha; complex: alpha + i beta

    static CanonicalBlock diag_block(int sign, FieldElement a) {
        return {Kind::diag, 1, sign, std::move(a), FieldElement(0)};
    }
    static CanonicalBlock delta_block(int sign, int size, FieldElement a) {
        return {Kind::delta, size, sign, std::move(a), FieldElement(0)};
    }
    static CanonicalBlock complex_block(int half, FieldElement a, FieldElement b) {
        return {Kind::complex_pair, 2 * half, 1, std::move(a), std::move(b)};
    }

    MatrixK j_part() const {
        switch (kind) {
            case Kind::diag: {
                MatrixK m(1, 1);
                m(0, 0) = FieldElement(sign);
                return m;
            }
            case Kind::delta: {
                MatrixK m(size, size);
                for (int p = 0; p < size; ++p) m(p, size - 1 - p) = FieldElement(sign);
                return m;
            }
            case Kind::delta_alt: {
                MatrixK m(size, size);
                for (int p = 1; p < size; ++p) m(p, size - p) = FieldElement(sign);
                return m;
            }
            case Kind::mn: {
                MatrixK m(size, size);
                for (int p = 0; p + 1 < size; ++p) m(p, p + 1) = m(p + 1, p) = FieldElement(1);
                return m;
            }
            case Kind::complex_pair: {
                int h = size / 2;
                MatrixK m(size, size);
                for (int p = 0; p < h; ++p) m(p, h + p) = m(h + p, p) = FieldElement(1);
                return m;
            }
        }
        fail(Errc::internal, "unreachable");
    }
    MatrixK a_part() const {
        switch (kind) {
            case Kind::diag: {
                MatrixK m(1, 1);
                m(0, 0) = FieldElement(sign) * alpha;
                return m;
            }
            case Kind::delta: {
                MatrixK m(size, size);
                for (int p = 0; p < size; ++p) m(p, size - 1 - p) = FieldElement(sign) * alpha;
                for (int p = 1; p < size; ++p) m(p, size - p) = FieldElement(sign);
                return m;
            }
            case Kind::delta_alt: {
                MatrixK m(size, size);
                for (int p = 0; p < size; ++p) m(p, size - 1 - p) = FieldElement(sign);
                return m;
            }
            case Kind::mn: {
                MatrixK m(size, size);
                for (int p = 0; p + 1 < size; ++p) {
                    m(p, p + 1) = FieldElement::i();
                    m(p + 1, p) = -FieldElement::i();
                }
                return m;
            }
            case Kind::complex_pair: {
                int h = size / 2;
                FieldElement lam = alpha + FieldElement::i() * beta;
                MatrixK m(size, size);
                for (int p = 0; p < h; ++p) {
                    m(h + p, p) = lam;            // J_h(lam) block at (2,1)
                    m(p, h + p) = lam.conj();     // J_h(lam)^* block at (1,2)
                }
                for (int p = 0; p + 1 < h; ++p) {
                    m(h + p, p + 1) = FieldElement(1);      // superdiagonal of J_h
                    m(p + 1, h + p) = FieldElement(1);      // its conjugate transpose
                }
                return m;
            }
        }
        fail(Errc::internal, "unreachable");
    }

    bool operator==(const CanonicalBlock& o) const {
        return kind == o.kind && size == o.size && sign == o.sign && alpha == o.alpha &&
               beta == o.beta;
    }

    std::string str() const {
        switch (kind) {
            case Kind::diag:
                return std::string("diag ") + (sign > 0 ? "+1" : "-1") + " a=" + alpha.str();
            case Kind::delta:
                return "delta" + std::to_string(size) + (sign > 0 ? " +" : " -") +
                       " alpha=" + alpha.str();
            case Kind::delta_alt:
                return "deltaalt" + std::to_string(size) + (sign > 0 ? " +" : " -");
            case Kind::mn:
                return "mn n=" + std::to_string(size);
            case Kind::complex_pair:
                return "complex n=" + std::to_string(size / 2) + " alpha=" + alpha.str() +
                       " beta=" + beta.str();
        }
        return "?";
    }
};

inline bool block_order(const CanonicalBlock& x, const CanonicalBlock& y) {
    auto rank = [](CanonicalBlock::Kind k) { return int(k); };
    if (x.kind != y.kind) return rank(x.kind) < rank(y.kind);
    if (x.size != y.size) return x.size < y.size;
    if (x.sign != y.sign) return x.sign > y.sign;
    if (x.alpha != y.alpha) return FieldElement::total_less(x.alpha, y.alpha);
    return FieldElement::total_less(x.beta, y.beta);
}

struct CanonicalPair {
    std::vector<CanonicalBlock> blocks;  // sorted by block_order
    MatrixK witness;                     // X with X*JX, X*AX = the block direct sums

    MatrixK j_sum() const {
        int m = 0;
        for (const auto& b : blocks) m += b.size;
        MatrixK r(m, m);
        int off = 0;
        for (const auto& b : blocks) {
            MatrixK part = b.j_part();
            for (int i = 0; i < b.size; ++i)
                for (int j = 0; j < b.size; ++j) r(off + i, off + j) = part(i, j);
            off += b.size;
        }
        return r;
    }
    MatrixK a_sum() const {
        int m = 0;
        for (const auto& b : blocks) m += b.size;
        MatrixK r(m, m);
        int off = 0;
        for (const auto& b : blocks) {
            MatrixK part = b.a_part();
            for (int i = 0; i < b.size; ++i)
                for (int j = 0; j < b.size; ++j) r(off + i, off + j) = part(i, j);
            off += b.size;
        }
        return r;
    }
    std::string str() const {
        std::string s;
        for (const auto& b : blocks) s += b.str() + "\n";
        return s;
    }
};

namespace detail {

// Gaussian integer g = a + bi with a^2 + b^2 = n, by prime factorization
// (primes == 3 mod 4 must appear to even powers); nullopt if impossible or
// if n resists desk-scale factoring.
inline std::optional<std::pair<Int, Int>> two_squares(Int n) {
    if (n <= 0) return std::nullopt;
    Int a = 1, b = 0;  // norm 1
    auto gmul = [&](const Int& c, const Int& d) {
        Int na = a * c - b * d, nb = a * d + b * c;
        a = na;
        b = nb;
    };
    for (Int p = 2; p * p <= n && p < 2000000; ++p) {
        if (n % p != 0) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (p == 2) {
            for (int k = 0; k < e; ++k) gmul(1, 1);
            continue;
        }
        if (p % 4 == 3) {
            if (e % 2 != 0) return std::nullopt;
            Int root = 1;
            for (int k = 0; k < e / 2; ++k) root *= p;
            gmul(root, 0);
            continue;
        }
        // p == 1 mod 4: find c^2 + d^2 = p by search
        Int c = 1, d = 0;
        bool found = false;
        for (Int cc = 1; cc * cc <= p; ++cc) {
            Int rest = p - cc * cc;
            Int dd;
            mpz_sqrt(dd.get_mpz_t(), rest.get_mpz_t());
            if (dd * dd == rest) {
                c = cc;
                d = dd;
                found = true;
                break;
            }
        }
        if (!found) return std::nullopt;
        for (int k = 0; k < e; ++k) gmul(c, d);
    }
    if (n > 1) {
        // unfactored tail: handle a prime tail directly when possible
        if (n % 4 == 3) return std::nullopt;
        bool found = false;
        for (Int cc = 1; cc * cc <= n && cc < 2000000; ++cc) {
            Int rest = n - cc * cc;
            Int dd;
            mpz_sqrt(dd.get_mpz_t(), rest.get_mpz_t());
            if (dd * dd == rest) {
                gmul(cc, dd);
                found = true;
                break;
            }
        }
        if (!found) return std::nullopt;
    }
    return std::make_pair(a, b);
}

// find c in K with c * conj(c) = t for real t > 0.  Ladder: a direct square
// root in K_real; an exact rational two-squares solve; the same after
// dividing out sqrt(2) (a norm via 2^(1/4)); a small irrational fallback.
inline std::optional<FieldElement> norm_equation(const FieldElement& t) {
    if (auto r = t.sqrt(); r && r->is_real()) return r->abs();
    auto rational_norm = [](const Rational& q) -> std::optional<FieldElement> {
        auto g = two_squares(q.get_num() * q.get_den());
        if (!g) return std::nullopt;
        Rational x(g->first, q.get_den()), y(g->second, q.get_den());
        x.canonicalize();
        y.canonicalize();
        return FieldElement(x) + FieldElement::i() * FieldElement(y);
    };
    // |sqrt(3) c|^2 = 3 |c|^2 covers the prime 3, which is not a Gaussian norm
    auto rational_norm_k = [&](const Rational& q) -> std::optional<FieldElement> {
        if (auto c = rational_norm(q)) return c;
        Rational q3 = q / 3;
        q3.canonicalize();
        if (auto c = rational_norm(q3)) return FieldElement::sqrt3() * *c;
        return std::nullopt;
    };
    if (auto q = t.as_rational()) return rational_norm_k(*q);
    // t = sqrt(2) * rational: |2^(1/4) c'|^2 = sqrt(2) |c'|^2
    FieldElement over_sqrt2 = t / FieldElement::sqrt2();
    if (auto q = over_sqrt2.as_rational()) {
        if (auto c = rational_norm_k(*q)) return FieldElement::root4_2() * *c;
        return std::nullopt;
    }
    // small irrational fallback: t = x^2 + y^2 with y on a short candidate list
    std::vector<FieldElement> candidates;
    for (int num = 1; num <= 12; ++num)
        for (int den = 1; den <= 4; ++den) {
            if (std::gcd(num, den) != 1) continue;
            Rational q(num, den);
            candidates.push_back(FieldElement(q));
            candidates.push_back(FieldElement(q) * FieldElement::sqrt2());
            candidates.push_back(FieldElement(q) * FieldElement::sqrt3());
            candidates.push_back(FieldElement(q) * FieldElement::sqrt6());
            candidates.push_back(FieldElement(q) * FieldElement::root4_2());
        }
    for (const auto& y : candidates) {
        FieldElement rest = t - y * y;
        if (rest.is_zero()) continue;
        if (auto x = rest.sqrt(); x && x->is_real())
            return *x + FieldElement::i() * y;
    }
    return std::nullopt;
}

// columns spanning ker((H - lam)^mult)
inline MatrixK generalized_eigenspace(const MatrixK& h, const FieldElement& lam, int mult) {
    int m = h.rows();
    MatrixK shifted = h;
    for (int i = 0; i < m; ++i) shifted(i, i) -= lam;
    MatrixK pw = MatrixK::identity(m);
    for (int k = 0; k < mult; ++k) pw = pw * shifted;
    return pw.kernel();
}

inline std::vector<FieldElement> mat_vec(const MatrixK& m, const std::vector<FieldElement>& v) {
    std::vector<FieldElement> r(m.rows());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            if (!m(i, j).is_zero() && !v[j].is_zero()) r[i] += m(i, j) * v[j];
    return r;
}
inline FieldElement dot_conj(const std::vector<FieldElement>& x,
                             const std::vector<FieldElement>& y) {
    // x^* y
    FieldElement r(0);
    for (size_t k = 0; k < x.size(); ++k) r += x[k].conj() * y[k];
    return r;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// canonical_pair
// ---------------------------------------------------------------------------

inline CanonicalPair canonical_pair(const HermitianPair& pair) {
    int m = pair.size();
    // the block construction is sized for pairs on C^3 plus headroom
    check(m <= 4, Errc::unsupported_spectrum,
          "canonical forms above size 4 are outside the desk-scale cap");
    auto spectrum = pencil_eigenstructure(pair);
    MatrixK h = *pair.j.inverse() * pair.a;
    const MatrixK& J = pair.j;

    struct Piece {
        CanonicalBlock block;
        std::vector<std::vector<FieldElement>> columns;
    };
    std::vector<Piece> pieces;

    auto apply_shifted = [&](const FieldElement& lam, const std::vector<FieldElement>& v) {
        std::vector<FieldElement> r = detail::mat_vec(h, v);
        for (size_t i = 0; i < r.size(); ++i) r[i] -= lam * v[i];
        return r;
    };
    auto j_pair = [&](const std::vector<FieldElement>& x, const std::vector<FieldElement>& y) {
        // x^* J y
        return detail::dot_conj(x, detail::mat_vec(J, y));
    };

    // --- real eigenvalues: Delta blocks with signs --------------------------
    for (const auto& ec : spectrum) {
        if (!ec.is_linear()) continue;
        const FieldElement& lam = ec.root();
        if (!lam.is_real()) continue;  // conjugate pairs handled below
        MatrixK space = detail::generalized_eigenspace(h, lam, ec.multiplicity);
        std::vector<std::vector<FieldElement>> basis;
        for (int c = 0; c < space.cols(); ++c) basis.push_back(space.column(c));
        while (!basis.empty()) {
            int r = int(basis.size());
            // nilpotency order k of (H - lam) on span(basis)
            std::vector<std::vector<std::vector<FieldElement>>> layers;  // layers[j][i] = N^j b_i
            layers.push_back(basis);
            for (;;) {
                const auto& prev = layers.back();
                bool all_zero = true;
                std::vector<std::vector<FieldElement>> next;
                for (const auto& v : prev) {
                    auto nv = apply_shifted(lam, v);
                    for (const auto& x : nv) all_zero &= x.is_zero();
                    next.push_back(std::move(nv));
                }
                if (all_zero) break;
                layers.push_back(std::move(next));
            }
            // N^(k-1) != 0 and N^k = 0 on the span
            int k = int(layers.size());
            // B(v, w) = <N^{k-1} v, w>_J on coordinates over basis
            MatrixK bmat(r, r);
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < r; ++j) bmat(i, j) = j_pair(basis[i], layers[k - 1][j]);
            // candidate seeds: e_i, e_i +/- e_j, e_i +/- i e_j
            std::vector<std::vector<FieldElement>> seeds;
            for (int i = 0; i < r; ++i) {
                std::vector<FieldElement> v(r);
                v[i] = FieldElement(1);
                seeds.push_back(v);
            }
            for (int i = 0; i < r; ++i)
                for (int j = i + 1; j < r; ++j)
                    for (const FieldElement& f :
                         {FieldElement(1), FieldElement(-1), FieldElement::i(),
                          -FieldElement::i()}) {
                        std::vector<FieldElement> v(r);
                        v[i] = FieldElement(1);
                        v[j] = f;
                        seeds.push_back(v);
                    }
            std::vector<FieldElement> chosen;
            FieldElement eps;
            std::optional<FieldElement> normalizer;
            for (const auto& s : seeds) {
                // value s^* Bmat s
                std::vector<FieldElement> bs = detail::mat_vec(bmat, s);
                FieldElement val = detail::dot_conj(s, bs);
                if (val.is_zero()) continue;
                if (chosen.empty()) {
                    chosen = s;
                    eps = val;
                }
                auto c = detail::norm_equation(val.abs().inverse());
                if (c) {
                    chosen = s;
                    eps = val;
                    normalizer = c;
                    break;
                }
            }
            check(!chosen.empty(), Errc::internal, "no chain seed found (B vanished)");
            check(normalizer.has_value(), Errc::unsupported_spectrum,
                  "chain pivot " + eps.str() + " has no K-rational normalizer");
            // ambient top vector
            std::vector<FieldElement> top(m, FieldElement(0));
            for (int i = 0; i < r; ++i)
                for (int row = 0; row < m; ++row) top[row] += chosen[i] * basis[i][row];
            // moment corrections: zero out g_{k-2}, ..., g_0 with real coefficients
            auto moments = [&](const std::vector<FieldElement>& v) {
                std::vector<FieldElement> g;
                std::vector<FieldElement> cur = v;
                for (int j = 0; j < 2 * k - 1; ++j) {
                    g.push_back(j_pair(v, cur));
                    cur = apply_shifted(lam, cur);
                }
                return g;  // g[j] = <v, N^j v>_J
            };
            for (int s = 1; s <= k - 1; ++s) {
                auto g = moments(top);
                if (g[k - 1 - s].is_zero()) continue;
                FieldElement c = -(g[k - 1 - s] / (FieldElement(2) * g[k - 1]));
                // top += c * N^s top
                std::vector<FieldElement> shift = top;
                for (int j = 0; j < s; ++j) shift = apply_shifted(lam, shift);
                for (int row = 0; row < m; ++row) top[row] += c * shift[row];
            }
            auto g = moments(top);
            for (int j = 0; j + 1 < k; ++j)
                check(g[j].is_zero(), Errc::internal, "moment correction failed");
            eps = g[k - 1];
            // rescale: |c|^2 |eps| = 1
            auto c = detail::norm_equation(eps.abs().inverse());
            check(c.has_value(), Errc::unsupported_spectrum, "pivot normalizer lost after correction");
            for (int row = 0; row < m; ++row) top[row] = *c * top[row];
            int sgn = eps.sign();
            // column p holds N^{k-1-p} v
            std::vector<std::vector<FieldElement>> ordered(k);
            for (int p = 0; p < k; ++p) {
                std::vector<FieldElement> v = top;
                for (int j = 0; j < k - 1 - p; ++j) v = apply_shifted(lam, v);
                ordered[p] = std::move(v);
            }
            Piece piece;
            piece.block = k == 1 ? CanonicalBlock::diag_block(sgn, lam)
                                 : CanonicalBlock::delta_block(sgn, k, lam);
            piece.columns = ordered;
            pieces.push_back(std::move(piece));
            // deflate: new basis spans the J-orthocomplement of the chain in span(basis)
            MatrixK cross(k, r);
            for (int p = 0; p < k; ++p)
                for (int i = 0; i < r; ++i) cross(p, i) = j_pair(ordered[p], basis[i]);
            MatrixK ker = cross.kernel();
            check(ker.cols() == r - k, Errc::internal, "deflation dimension mismatch");
            std::vector<std::vector<FieldElement>> nb;
            for (int c2 = 0; c2 < ker.cols(); ++c2) {
                std::vector<FieldElement> v(m, FieldElement(0));
                for (int i = 0; i < r; ++i)
                    for (int row = 0; row < m; ++row) v[row] += ker(i, c2) * basis[i][row];
                nb.push_back(std::move(v));
            }
            basis = std::move(nb);
        }
    }

    // --- nonreal conjugate pairs: complex blocks ----------------------------
    std::vector<bool> consumed(spectrum.size(), false);
    for (size_t idx = 0; idx < spectrum.size(); ++idx) {
        const auto& ec = spectrum[idx];
        if (!ec.is_linear() || consumed[idx]) continue;
        const FieldElement& lam = ec.root();
        if (lam.is_real()) continue;
        FieldElement alpha = lam.real_part(), beta = lam.imag_part();
        if (beta.sign() < 0) continue;  // processed with the conjugate partner
        // find and mark the conjugate class
        FieldElement lbar = lam.conj();
        for (size_t j2 = 0; j2 < spectrum.size(); ++j2)
            if (j2 != idx && spectrum[j2].is_linear() && spectrum[j2].root() == lbar)
                consumed[j2] = true;
        MatrixK g_space = detail::generalized_eigenspace(h, lam, ec.multiplicity);
        MatrixK gbar_space = detail::generalized_eigenspace(h, lbar, ec.multiplicity);
        int dim = g_space.cols();
        check(gbar_space.cols() == dim, Errc::internal, "conjugate spaces differ in dimension");
        check(dim <= 2, Errc::internal, "conjugate block dimension above cap");
        // Jordan chains of (H - lam) on G
        std::vector<std::vector<std::vector<FieldElement>>> chains;  // chain = u_1..u_k
        if (dim == 1) {
            chains.push_back({g_space.column(0)});
        } else {
            // dim == 2: either nilpotent order 1 (two chains) or 2 (one chain)
            std::vector<FieldElement> b0 = g_space.column(0), b1 = g_space.column(1);
            auto n0 = apply_shifted(lam, b0), n1 = apply_shifted(lam, b1);
            bool zero0 = true, zero1 = true;
            for (const auto& x : n0) zero0 &= x.is_zero();
            for (const auto& x : n1) zero1 &= x.is_zero();
            if (zero0 && zero1) {
                chains.push_back({b0});
                chains.push_back({b1});
            } else {
                std::vector<FieldElement> topv = zero0 ? b1 : b0;
                auto u1 = apply_shifted(lam, topv);
                chains.push_back({u1, topv});
            }
        }
        // dual chains in Gbar: for each chain, w_1 solves u_p^* J w_1 = delta_{p1}
        // (all chains stacked: cross conditions zero)
        int total = 0;
        for (const auto& ch : chains) total += int(ch.size());
        check(total == dim, Errc::internal, "chain total mismatch");
        // matrix of constraints: rows = all (chain r, index p), cols = Gbar basis
        MatrixK cons(total, dim), rhs_all(total, int(chains.size()));
        {
            int row = 0;
            for (size_t r2 = 0; r2 < chains.size(); ++r2) {
                for (size_t p = 0; p < chains[r2].size(); ++p) {
                    for (int c2 = 0; c2 < dim; ++c2)
                        cons(row, c2) = j_pair(chains[r2][p], gbar_space.column(c2));
                    rhs_all(row, int(r2)) = FieldElement(p == 0 ? 1 : 0);
                    ++row;
                }
            }
        }
        auto sol = MatrixK::solve(cons, rhs_all);
        check(sol.has_value(), Errc::internal, "dual chain system unsolvable");
        for (size_t r2 = 0; r2 < chains.size(); ++r2) {
            int k = int(chains[r2].size());
            std::vector<std::vector<FieldElement>> ws;
            std::vector<FieldElement> w1(m, FieldElement(0));
            for (int c2 = 0; c2 < dim; ++c2)
                for (int row = 0; row < m; ++row)
                    w1[row] += (*sol)(c2, int(r2)) * gbar_space(row, c2);
            ws.push_back(w1);
            for (int q = 1; q < k; ++q) ws.push_back(apply_shifted(lbar, ws.back()));
            Piece piece;
            piece.block = CanonicalBlock::complex_block(k, alpha, beta);
            piece.columns = chains[r2];
            for (auto& w : ws) piece.columns.push_back(std::move(w));
            pieces.push_back(std::move(piece));
        }
    }

    for (size_t idx = 0; idx < spectrum.size(); ++idx)
        if (!spectrum[idx].is_linear())
            fail(Errc::unsupported_spectrum,
                 "pencil eigenvalues outside K (irreducible quadratic factor)");

    // sort pieces by block order and assemble the witness
    std::sort(pieces.begin(), pieces.end(),
              [](const Piece& x, const Piece& y) { return block_order(x.block, y.block); });
    CanonicalPair out;
    MatrixK x(m, m);
    int off = 0;
    for (const auto& piece : pieces) {
        out.blocks.push_back(piece.block);
        for (const auto& col : piece.columns) {
            for (int row = 0; row < m; ++row) x(row, off) = col[row];
            ++off;
        }
    }
    check(off == m, Errc::internal, "canonical basis does not span");
    out.witness = x;
    // exact reconstruction check, every call
    check(x.conj_transpose() * pair.j * x == out.j_sum(), Errc::internal,
          "canonical J reconstruction failed");
    check(x.conj_transpose() * pair.a * x == out.a_sum(), Errc::internal,
          "canonical A reconstruction failed");
    return out;
}

// ---------------------------------------------------------------------------
// simultaneous diagonalization
// ---------------------------------------------------------------------------

struct DiagResult {
    bool diagonalizable = false;
    std::optional<MatrixK> witness;  // X with X*JX and X*AX diagonal
};

inline DiagResult is_simultaneously_diagonalizable(const HermitianPair& pair) {
    auto spectrum = pencil_eigenstructure(pair);
    for (const auto& ec : spectrum) {
        if (!ec.is_linear()) {
            // irreducible quadratic: nonreal roots answer "no"; real quadratic
            // irrationals are outside the supported ladder
            FieldElement disc = ec.tag().p * ec.tag().p - FieldElement(4) * ec.tag().q;
            if (disc.sign() < 0) return {false, std::nullopt};
            fail(Errc::unsupported_spectrum,
                 "real quadratic-irrational eigenvalues outside K");
        }
        if (!ec.root().is_real()) return {false, std::nullopt};
        if (ec.jordan.empty() || ec.jordan.front() > 1) return {false, std::nullopt};
    }
    // build the witness eigenspace by eigenspace
    int m = pair.size();
    MatrixK h = *pair.j.inverse() * pair.a;
    MatrixK x(m, m);
    int off = 0;
    for (const auto& ec : spectrum) {
        MatrixK space = detail::generalized_eigenspace(h, ec.root(), 1);
        MatrixK gram(space.cols(), space.cols());
        for (int i = 0; i < space.cols(); ++i)
            for (int j = 0; j < space.cols(); ++j)
                gram(i, j) = detail::dot_conj(space.column(i),
                                              detail::mat_vec(pair.j, space.column(j)));
        auto cd = congruence_diagonalize(gram);
        for (const auto& d : cd.diag)
            check(!d.is_zero(), Errc::internal, "J degenerate on an eigenspace");
        MatrixK cols = space * cd.x;
        for (int c = 0; c < cols.cols(); ++c)
            for (int row = 0; row < m; ++row) x(row, off + c) = cols(row, c);
        off += cols.cols();
    }
    check(off == m, Errc::internal, "eigenspaces do not span");
    check((x.conj_transpose() * pair.j * x).is_diagonal(), Errc::internal,
          "witness J not diagonal");
    check((x.conj_transpose() * pair.a * x).is_diagonal(), Errc::internal,
          "witness A not diagonal");
    return {true, x};
}

// ---------------------------------------------------------------------------
// pair congruence with the projective scaling freedom
// ---------------------------------------------------------------------------

inline bool pairs_congruent(const HermitianPair& p, const HermitianPair& q,
                            bool allow_negation) {
    if (p.size() != q.size()) return false;
    if (inertia_of(p.j) != inertia_of(q.j)) return false;
    auto sp = pencil_eigenstructure(p);
    auto sq = pencil_eigenstructure(q);
    // scale samples: any real lambda must map samples of p onto samples of q
    auto samples = [](const std::vector<EigenClass>& s) {
        std::vector<FieldElement> out;
        for (const auto& ec : s) {
            if (ec.is_linear()) {
                FieldElement re = ec.root().real_part(), im = ec.root().imag_part();
                if (!re.is_zero()) out.push_back(re);
                if (!im.is_zero()) out.push_back(im);
            } else {
                if (!ec.tag().p.is_zero()) out.push_back(ec.tag().p);
                if (auto r = ec.tag().q.abs().sqrt(); r && r->is_real()) out.push_back(*r);
            }
        }
        return out;
    };
    std::vector<FieldElement> cands{FieldElement(1)};
    for (const auto& a : samples(sp))
        for (const auto& b : samples(sq)) {
            FieldElement ratio = b / a;
            if (!ratio.is_real() || ratio.is_zero()) continue;
            cands.push_back(ratio);
        }
    {
        std::vector<FieldElement> with_neg = cands;
        for (const auto& c : cands) with_neg.push_back(-c);
        cands = std::move(with_neg);
    }
    // dedupe, filter sign
    std::vector<FieldElement> uniq;
    for (const auto& c : cands) {
        if (!allow_negation && c.sign() < 0) continue;
        bool seen = false;
        for (const auto& u : uniq) seen |= u == c;
        if (!seen) uniq.push_back(c);
    }
    CanonicalPair canon_q = canonical_pair(q);
    bool any_supported = false;
    for (const auto& lam : uniq) {
        MatrixK scaled = lam * p.a;
        try {
            CanonicalPair cp = canonical_pair(HermitianPair(p.j, scaled));
            any_supported = true;
            if (cp.blocks == canon_q.blocks) return true;
        } catch (const Error& e) {
            if (e.code() != Errc::unsupported_spectrum) throw;
        }
    }
    if (!any_supported)
        fail(Errc::unsupported_spectrum, "no scaling candidate had a supported spectrum");
    return false;
}

}  // namespace hq

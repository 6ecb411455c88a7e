#pragma once

// Exact arithmetic in the fixed number field K = Q(i, 2^(1/4), sqrt(3)),
// a 16-dimensional Q-algebra with basis
//
//     2^(a/4) * 3^(b/2) * i^c,   a in {0,1,2,3}, b in {0,1}, c in {0,1},
//
// stored as 16 arbitrary-precision rationals (coordinate index a + 4b + 8c).
// Every scalar constant used by the library (sqrt(2), sqrt(3), root4(2), i,
// rationals) lives here.  Elements are immutable values; all operations are
// exact.

#include <gmpxx.h>

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hq/error.hpp"

namespace hq {

using Rational = mpq_class;
using Int = mpz_class;

namespace detail {

// K is built as the tower Q < Q(sqrt3) < Q(sqrt3,sqrt2) < K_real < K where
// each step adjoins a square root of a lower-level element.  The tower view
// drives inversion and square-root extraction; the flat 16-coordinate view
// drives everything else.  Nested index bit layout: b | s2<<1 | s4<<2 | c<<3
// where a = s4 + 2*s2.
inline int nested_index(int a, int b, int c) {
    int s4 = a & 1, s2 = (a >> 1) & 1;
    return b | (s2 << 1) | (s4 << 2) | (c << 3);
}
inline int flat_index(int j) {
    int b = j & 1, s2 = (j >> 1) & 1, s4 = (j >> 2) & 1, c = (j >> 3) & 1;
    return (s4 + 2 * s2) + 4 * b + 8 * c;
}

using Tower = std::vector<Rational>;  // size 2^level

// Square of the generator adjoined at `level`, as a lower-level element.
inline Tower generator_square(int level) {
    switch (level) {
        case 1: return Tower{Rational(3)};                                      // sqrt(3)^2
        case 2: return Tower{Rational(2), Rational(0)};                         // sqrt(2)^2
        case 3: return Tower{Rational(0), Rational(0), Rational(1), Rational(0)};  // (2^(1/4))^2 = sqrt2
        case 4: {
            Tower t(8, Rational(0));
            t[0] = -1;  // i^2
            return t;
        }
        default: fail(Errc::internal, "generator_square: bad level");
    }
}

inline Tower tower_add(const Tower& x, const Tower& y) {
    Tower r(x.size());
    for (size_t k = 0; k < x.size(); ++k) r[k] = x[k] + y[k];
    return r;
}
inline Tower tower_sub(const Tower& x, const Tower& y) {
    Tower r(x.size());
    for (size_t k = 0; k < x.size(); ++k) r[k] = x[k] - y[k];
    return r;
}
inline Tower tower_neg(const Tower& x) {
    Tower r(x.size());
    for (size_t k = 0; k < x.size(); ++k) r[k] = -x[k];
    return r;
}
inline bool tower_is_zero(const Tower& x) {
    for (const auto& q : x)
        if (q != 0) return false;
    return true;
}
inline std::pair<Tower, Tower> tower_split(const Tower& x) {
    size_t h = x.size() / 2;
    return {Tower(x.begin(), x.begin() + h), Tower(x.begin() + h, x.end())};
}
inline Tower tower_join(const Tower& lo, const Tower& hi) {
    Tower r = lo;
    r.insert(r.end(), hi.begin(), hi.end());
    return r;
}

inline Tower tower_mul(int level, const Tower& x, const Tower& y) {
    if (level == 0) return Tower{x[0] * y[0]};
    auto [x0, x1] = tower_split(x);
    auto [y0, y1] = tower_split(y);
    Tower w2 = generator_square(level);
    Tower lo = tower_add(tower_mul(level - 1, x0, y0),
                         tower_mul(level - 1, w2, tower_mul(level - 1, x1, y1)));
    Tower hi = tower_add(tower_mul(level - 1, x0, y1), tower_mul(level - 1, x1, y0));
    return tower_join(lo, hi);
}

inline Tower tower_inv(int level, const Tower& x) {
    if (level == 0) {
        check(x[0] != 0, Errc::singular, "division by zero");
        return Tower{1 / x[0]};
    }
    auto [x0, x1] = tower_split(x);
    // (x0 + x1 w)^-1 = (x0 - x1 w) / (x0^2 - w^2 x1^2); the norm is nonzero
    // because w^2 is a nonsquare at every level of the tower.
    Tower w2 = generator_square(level);
    Tower norm = tower_sub(tower_mul(level - 1, x0, x0),
                           tower_mul(level - 1, w2, tower_mul(level - 1, x1, x1)));
    Tower ninv = tower_inv(level - 1, norm);
    return tower_join(tower_mul(level - 1, x0, ninv), tower_neg(tower_mul(level - 1, x1, ninv)));
}

inline std::optional<Rational> rational_sqrt(const Rational& q) {
    if (q < 0) return std::nullopt;
    if (q == 0) return Rational(0);
    Int num = q.get_num(), den = q.get_den();
    if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
        return std::nullopt;
    Int rn, rd;
    mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
    Rational r(rn, rd);
    r.canonicalize();
    return r;
}

inline std::optional<Tower> tower_sqrt(int level, const Tower& x);

inline std::optional<Tower> tower_sqrt_impl(int level, const Tower& x) {
    if (tower_is_zero(x)) return Tower(x.size(), Rational(0));
    if (level == 0) {
        auto r = rational_sqrt(x[0]);
        if (!r) return std::nullopt;
        return Tower{*r};
    }
    auto [x0, x1] = tower_split(x);
    Tower w2 = generator_square(level);
    Tower zero(x0.size(), Rational(0));
    if (tower_is_zero(x1)) {
        if (auto r = tower_sqrt(level - 1, x0)) return tower_join(*r, zero);
        // try y = r*w with r^2 = x0 / w^2
        Tower q = tower_mul(level - 1, x0, tower_inv(level - 1, w2));
        if (auto r = tower_sqrt(level - 1, q)) return tower_join(zero, *r);
        return std::nullopt;
    }
    // y = y0 + y1 w with y0^2 + w^2 y1^2 = x0 and 2 y0 y1 = x1.  Then
    // (y0^2 - w^2 y1^2)^2 = x0^2 - w^2 x1^2 must be a lower-level square.
    Tower disc = tower_sub(tower_mul(level - 1, x0, x0),
                           tower_mul(level - 1, w2, tower_mul(level - 1, x1, x1)));
    auto d = tower_sqrt(level - 1, disc);
    if (!d) return std::nullopt;
    Tower half(x0.size(), Rational(0));
    half[0] = Rational(1, 2);
    for (Tower s : {*d, tower_neg(*d)}) {
        Tower h = tower_mul(level - 1, tower_add(x0, s), half);
        auto y0 = tower_sqrt(level - 1, h);
        if (!y0 || tower_is_zero(*y0)) continue;
        Tower y1 = tower_mul(level - 1, tower_mul(level - 1, x1, half), tower_inv(level - 1, *y0));
        Tower y = tower_join(*y0, y1);
        if (tower_is_zero(tower_sub(tower_mul(level, y, y), x))) return y;
    }
    return std::nullopt;
}

inline std::optional<Tower> tower_sqrt(int level, const Tower& x) {
    return tower_sqrt_impl(level, x);
}

inline int rational_sign(const Rational& q) { return sgn(q); }

}  // namespace detail

class FieldElement {
  public:
    static constexpr int kDim = 16;

    FieldElement() = default;
    FieldElement(long v) { c_[0] = v; }         // NOLINT: implicit by design
    FieldElement(const Rational& v) { c_[0] = v; }  // NOLINT
    FieldElement(const Int& v) { c_[0] = Rational(v); }  // NOLINT

    static FieldElement basis_element(int a, int b, int c, const Rational& coef = Rational(1)) {
        FieldElement x;
        x.c_[a + 4 * b + 8 * c] = coef;
        return x;
    }
    static FieldElement i() { return basis_element(0, 0, 1); }
    static FieldElement sqrt2() { return basis_element(2, 0, 0); }
    static FieldElement sqrt3() { return basis_element(0, 1, 0); }
    static FieldElement sqrt6() { return basis_element(2, 1, 0); }
    static FieldElement root4_2() { return basis_element(1, 0, 0); }

    const Rational& coord(int idx) const { return c_[idx]; }

    bool is_zero() const {
        for (const auto& q : c_)
            if (q != 0) return false;
        return true;
    }
    bool is_real() const {
        for (int idx = 8; idx < 16; ++idx)
            if (c_[idx] != 0) return false;
        return true;
    }
    bool is_rational() const {
        for (int idx = 1; idx < 16; ++idx)
            if (c_[idx] != 0) return false;
        return true;
    }
    std::optional<Rational> as_rational() const {
        if (!is_rational()) return std::nullopt;
        return c_[0];
    }

    FieldElement conj() const {
        FieldElement r = *this;
        for (int idx = 8; idx < 16; ++idx) r.c_[idx] = -r.c_[idx];
        return r;
    }
    FieldElement real_part() const {
        FieldElement r;
        for (int idx = 0; idx < 8; ++idx) r.c_[idx] = c_[idx];
        return r;
    }
    // The imaginary part as a real element (x = re + i*im).
    FieldElement imag_part() const {
        FieldElement r;
        for (int idx = 0; idx < 8; ++idx) r.c_[idx] = c_[idx + 8];
        return r;
    }

    FieldElement& operator+=(const FieldElement& o) {
        for (int k = 0; k < kDim; ++k) c_[k] += o.c_[k];
        return *this;
    }
    FieldElement& operator-=(const FieldElement& o) {
        for (int k = 0; k < kDim; ++k) c_[k] -= o.c_[k];
        return *this;
    }
    friend FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
    friend FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
    FieldElement operator-() const {
        FieldElement r;
        for (int k = 0; k < kDim; ++k) r.c_[k] = -c_[k];
        return r;
    }

    friend FieldElement operator*(const FieldElement& x, const FieldElement& y) {
        FieldElement r;
        for (int j = 0; j < kDim; ++j) {
            if (x.c_[j] == 0) continue;
            int aj = j & 3, bj = (j >> 2) & 1, cj = (j >> 3) & 1;
            for (int k = 0; k < kDim; ++k) {
                if (y.c_[k] == 0) continue;
                int ak = k & 3, bk = (k >> 2) & 1, ck = (k >> 3) & 1;
                int a = aj + ak, b = bj + bk, c = cj + ck;
                // 2^(a/4): carry 2 for each full power of four; 3^(b/2) carry 3;
                // i^c carry -1.
                Rational f = x.c_[j] * y.c_[k];
                if (a >= 4) { f *= 2; a -= 4; }
                if (b >= 2) { f *= 3; b -= 2; }
                if (c >= 2) { f = -f; c -= 2; }
                r.c_[a + 4 * b + 8 * c] += f;
            }
        }
        return r;
    }
    FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }

    FieldElement inverse() const {
        check(!is_zero(), Errc::singular, "inverse of zero");
        return from_tower(detail::tower_inv(4, to_tower()));
    }
    friend FieldElement operator/(const FieldElement& a, const FieldElement& b) {
        return a * b.inverse();
    }
    FieldElement& operator/=(const FieldElement& o) { return *this = *this / o; }

    bool operator==(const FieldElement& o) const { return c_ == o.c_; }
    bool operator!=(const FieldElement& o) const { return !(*this == o); }

    FieldElement pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        FieldElement r(1), base = *this;
        while (e > 0) {
            if (e & 1) r *= base;
            base *= base;
            e >>= 1;
        }
        return r;
    }

    // Exact sign of a real element.  Exact zero test first; otherwise rational
    // interval evaluation of 2^(1/4) and sqrt(3), doubling the precision until
    // the interval excludes zero.
    int sign() const {
        check(is_real(), Errc::not_real, "sign of a non-real element");
        if (is_zero()) return 0;
        if (is_rational()) return detail::rational_sign(c_[0]);
        for (long prec = 32; prec <= 4096; prec *= 2) {
            auto [lo, hi] = interval_eval(prec);
            if (lo > 0) return 1;
            if (hi < 0) return -1;
        }
        fail(Errc::internal, "sign(): interval refinement exceeded 4096 bits on a nonzero element");
    }
    bool is_positive() const { return sign() > 0; }
    bool is_negative() const { return sign() < 0; }
    FieldElement abs() const { return sign() < 0 ? -*this : *this; }

    // A square root in K, if one exists; deterministic choice of branch
    // (positive real / positive imaginary / first nonzero coordinate positive).
    std::optional<FieldElement> sqrt() const {
        auto t = detail::tower_sqrt(4, to_tower());
        if (!t) return std::nullopt;
        FieldElement r = from_tower(*t);
        if (r.is_zero()) return r;
        if (r.is_real()) {
            if (r.sign() < 0) r = -r;
        } else if (r.real_part().is_zero()) {
            if (r.imag_part().sign() < 0) r = -r;
        } else {
            for (int k = 0; k < kDim; ++k) {
                if (r.c_[k] != 0) {
                    if (r.c_[k] < 0) r = -r;
                    break;
                }
            }
        }
        return r;
    }

    // Total order used for deterministic sorting only (real-lex on the
    // coordinate vector); agrees with < on rationals but is not the order of R.
    static bool total_less(const FieldElement& x, const FieldElement& y) {
        for (int k = 0; k < kDim; ++k) {
            int c = cmp(x.c_[k], y.c_[k]);
            if (c != 0) return c < 0;
        }
        return false;
    }
    // Order of R on real elements, exact.
    static bool real_less(const FieldElement& x, const FieldElement& y) {
        return (x - y).sign() < 0;
    }

    double approx_real() const {
        static const double b2[4] = {1.0, 1.189207115002721, 1.4142135623730951,
                                     1.6817928305074290};
        double s = 0;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 2; ++b)
                s += c_[a + 4 * b].get_d() * b2[a] * (b ? 1.7320508075688772 : 1.0);
        return s;
    }
    std::complex<double> approx() const {
        return {real_part().approx_real(), imag_part().approx_real()};
    }

    std::string str() const;
    static FieldElement parse(std::string_view text);

  private:
    std::array<Rational, kDim> c_{};

    detail::Tower to_tower() const {
        detail::Tower t(16);
        for (int j = 0; j < 16; ++j) t[j] = c_[detail::flat_index(j)];
        return t;
    }
    static FieldElement from_tower(const detail::Tower& t) {
        FieldElement x;
        for (int j = 0; j < 16; ++j) x.c_[detail::flat_index(j)] = t[j];
        return x;
    }

    std::pair<Rational, Rational> interval_eval(long prec) const {
        // floor(2^(1/4) * 2^prec) and floor(sqrt(3) * 2^prec), exactly.
        Int pw4 = Int(1) << (4 * prec), pw2 = Int(1) << (2 * prec), pw = Int(1) << prec;
        Int r4, s3;
        Int two_pw4 = 2 * pw4, three_pw2 = 3 * pw2;
        mpz_root(r4.get_mpz_t(), two_pw4.get_mpz_t(), 4);
        mpz_sqrt(s3.get_mpz_t(), three_pw2.get_mpz_t());
        Rational r4_lo(r4, pw), r4_hi(r4 + 1, pw), s3_lo(s3, pw), s3_hi(s3 + 1, pw);
        r4_lo.canonicalize(); r4_hi.canonicalize(); s3_lo.canonicalize(); s3_hi.canonicalize();
        Rational lo = 0, hi = 0;
        for (int a = 0; a < 4; ++a) {
            for (int b = 0; b < 2; ++b) {
                const Rational& q = c_[a + 4 * b];
                if (q == 0) continue;
                // basis value interval (all endpoints positive)
                Rational blo = 1, bhi = 1;
                for (int k = 0; k < a; ++k) { blo *= r4_lo; bhi *= r4_hi; }
                if (b) { blo *= s3_lo; bhi *= s3_hi; }
                if (q > 0) { lo += q * blo; hi += q * bhi; }
                else       { lo += q * bhi; hi += q * blo; }
            }
        }
        return {lo, hi};
    }
};

// ---------------------------------------------------------------------------
// Scalar grammar (shared by every parser downstream):
//   scalar   := ['-'] term (('+'|'-') term)*
//   term     := factor ('*' factor)*
//   factor   := rational | 'i' | 'sqrt(' uint ')' | 'root4(' uint ')' | '(' scalar ')'
//   rational := int ('/' uint)?
// ---------------------------------------------------------------------------

namespace detail {

struct Cursor {
    std::string_view s;
    size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= s.size();
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    bool accept(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c))
            fail(Errc::parse_error,
                 "expected '" + std::string(1, c) + "' at column " + std::to_string(pos + 1));
    }
    bool accept_word(std::string_view w) {
        skip_ws();
        if (s.substr(pos, w.size()) == w) {
            pos += w.size();
            return true;
        }
        return false;
    }
    Int parse_uint() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        check(pos > start, Errc::parse_error,
              "expected a number at column " + std::to_string(start + 1));
        return Int(std::string(s.substr(start, pos - start)));
    }
};

// sqrt(n) lies in K iff after removing all factors of 2 and 3 the rest of n
// is a perfect square.
inline std::optional<FieldElement> sqrt_uint_in_K(Int n) {
    if (n == 0) return FieldElement(0);
    int e2 = 0, e3 = 0;
    while (mpz_even_p(n.get_mpz_t())) { n /= 2; ++e2; }
    while (mpz_divisible_ui_p(n.get_mpz_t(), 3)) { n /= 3; ++e3; }
    if (!mpz_perfect_square_p(n.get_mpz_t())) return std::nullopt;
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    // value = 2^(e2/2) * 3^(e3/2) * r
    Rational coef(r);
    coef *= Rational(Int(1) << (e2 / 2));
    if (e3 / 2 > 0) {
        Int p3 = 1;
        for (int k = 0; k < e3 / 2; ++k) p3 *= 3;
        coef *= Rational(p3);
    }
    return FieldElement::basis_element((e2 % 2) * 2, e3 % 2, 0, coef);
}

// root4(n) in K iff stripping 2s and an even number of 3s leaves a fourth power.
inline std::optional<FieldElement> root4_uint_in_K(Int n) {
    if (n == 0) return FieldElement(0);
    int e2 = 0, e3 = 0;
    while (mpz_even_p(n.get_mpz_t())) { n /= 2; ++e2; }
    while (mpz_divisible_ui_p(n.get_mpz_t(), 3)) { n /= 3; ++e3; }
    if (e3 % 2 != 0) return std::nullopt;
    Int r;
    if (!mpz_root(r.get_mpz_t(), n.get_mpz_t(), 4)) return std::nullopt;
    Rational coef(r);
    coef *= Rational(Int(1) << (e2 / 4));
    Int p3 = 1;
    for (int k = 0; k < e3 / 4; ++k) p3 *= 3;
    coef *= Rational(p3);
    return FieldElement::basis_element(e2 % 4, (e3 / 2) % 2, 0, coef);
}

FieldElement parse_scalar_expr(Cursor& cur);

inline FieldElement parse_scalar_factor(Cursor& cur) {
    if (cur.accept('(')) {
        FieldElement x = parse_scalar_expr(cur);
        cur.expect(')');
        return x;
    }
    if (cur.accept_word("sqrt")) {
        cur.expect('(');
        Int n = cur.parse_uint();
        cur.expect(')');
        auto v = sqrt_uint_in_K(n);
        check(v.has_value(), Errc::not_in_field, "sqrt(" + n.get_str() + ") is not in K");
        return *v;
    }
    if (cur.accept_word("root4")) {
        cur.expect('(');
        Int n = cur.parse_uint();
        cur.expect(')');
        auto v = root4_uint_in_K(n);
        check(v.has_value(), Errc::not_in_field, "root4(" + n.get_str() + ") is not in K");
        return *v;
    }
    if (cur.accept_word("i")) return FieldElement::i();
    if (isdigit(static_cast<unsigned char>(cur.peek()))) {
        Int num = cur.parse_uint();
        if (cur.accept('/')) {
            Int den = cur.parse_uint();
            check(den != 0, Errc::parse_error, "zero denominator");
            Rational q(num, den);
            q.canonicalize();
            return FieldElement(q);
        }
        return FieldElement(Rational(num));
    }
    fail(Errc::parse_error,
         "unexpected character at column " + std::to_string(cur.pos + 1));
}

inline FieldElement parse_scalar_term(Cursor& cur) {
    FieldElement x = parse_scalar_factor(cur);
    while (cur.accept('*')) x *= parse_scalar_factor(cur);
    return x;
}

inline FieldElement parse_scalar_expr(Cursor& cur) {
    bool neg = cur.accept('-');
    FieldElement x = parse_scalar_term(cur);
    if (neg) x = -x;
    for (;;) {
        if (cur.accept('+')) x += parse_scalar_term(cur);
        else if (cur.accept('-')) x -= parse_scalar_term(cur);
        else break;
    }
    return x;
}

}  // namespace detail

inline FieldElement FieldElement::parse(std::string_view text) {
    detail::Cursor cur{text};
    FieldElement x = detail::parse_scalar_expr(cur);
    check(cur.eof(), Errc::parse_error,
          "trailing input at column " + std::to_string(cur.pos + 1));
    return x;
}

inline std::string FieldElement::str() const {
    if (is_zero()) return "0";
    std::string out;
    for (int idx = 0; idx < kDim; ++idx) {
        const Rational& q = c_[idx];
        if (q == 0) continue;
        Rational aq = q > 0 ? q : Rational(-q);
        if (out.empty()) {
            if (q < 0) out += "-";
        } else {
            out += q < 0 ? " - " : " + ";
        }
        int a = idx & 3, b = (idx >> 2) & 1, c = (idx >> 3) & 1;
        std::vector<std::string> atoms;
        if (a == 1) atoms.push_back("root4(2)");
        if (a == 2) atoms.push_back("sqrt(2)");
        if (a == 3) { atoms.push_back("sqrt(2)"); atoms.push_back("root4(2)"); }
        if (b) atoms.push_back("sqrt(3)");
        if (c) atoms.push_back("i");
        std::string coef = aq.get_str();
        if (atoms.empty()) {
            out += coef;
        } else {
            std::string prod;
            for (const auto& at : atoms) {
                if (!prod.empty()) prod += "*";
                prod += at;
            }
            out += (coef == "1") ? prod : coef + "*" + prod;
        }
    }
    return out;
}

}  // namespace hq

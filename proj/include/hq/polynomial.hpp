#pragma once

// Sparse multivariate polynomials over K and multi-index bookkeeping.
// Term order everywhere is graded lex with the first variable heaviest,
// matching the Veronese basis order used for all matrix indexing.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "hq/field.hpp"

namespace hq {

struct MultiIndex {
    std::vector<int> e;

    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> exps) : e(std::move(exps)) {}
    static MultiIndex zeros(int n) { return MultiIndex(std::vector<int>(n, 0)); }
    static MultiIndex unit(int n, int k, int deg = 1) {
        MultiIndex m = zeros(n);
        m.e[k] = deg;
        return m;
    }

    int nvars() const { return int(e.size()); }
    int degree() const { return std::accumulate(e.begin(), e.end(), 0); }

    MultiIndex operator+(const MultiIndex& o) const {
        MultiIndex r = *this;
        for (size_t k = 0; k < e.size(); ++k) r.e[k] += o.e[k];
        return r;
    }
    bool divides(const MultiIndex& o) const {
        for (size_t k = 0; k < e.size(); ++k)
            if (e[k] > o.e[k]) return false;
        return true;
    }
    MultiIndex quotient(const MultiIndex& o) const {  // o / this
        MultiIndex r = o;
        for (size_t k = 0; k < e.size(); ++k) r.e[k] -= e[k];
        return r;
    }

    bool operator==(const MultiIndex& o) const { return e == o.e; }
    bool operator!=(const MultiIndex& o) const { return e != o.e; }
};

// Display/leading-term order: higher degree first, then graded lex with z_0
// heaviest.  Compatible with monomial multiplication.
inline bool display_before(const MultiIndex& a, const MultiIndex& b) {
    int da = a.degree(), db = b.degree();
    if (da != db) return da > db;
    return a.e > b.e;
}

class Polynomial {
  public:
    using Terms = std::map<std::vector<int>, FieldElement>;

    Polynomial() = default;
    explicit Polynomial(int nvars) : nvars_(nvars) {}
    static Polynomial constant(int nvars, const FieldElement& c) {
        Polynomial p(nvars);
        p.add_term(MultiIndex::zeros(nvars), c);
        return p;
    }
    static Polynomial variable(int nvars, int k) {
        Polynomial p(nvars);
        p.add_term(MultiIndex::unit(nvars, k), FieldElement(1));
        return p;
    }
    static Polynomial monomial(const MultiIndex& m, const FieldElement& c) {
        Polynomial p(m.nvars());
        p.add_term(m, c);
        return p;
    }

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }
    const Terms& terms() const { return terms_; }

    void add_term(const MultiIndex& m, const FieldElement& c) {
        if (c.is_zero()) return;
        auto it = terms_.find(m.e);
        if (it == terms_.end()) {
            terms_.emplace(m.e, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }
    FieldElement coeff(const MultiIndex& m) const {
        auto it = terms_.find(m.e);
        return it == terms_.end() ? FieldElement(0) : it->second;
    }

    int degree() const {
        int d = -1;
        for (const auto& [m, c] : terms_) d = std::max(d, MultiIndex(m).degree());
        return d;  // -1 for the zero polynomial
    }
    bool is_homogeneous() const {
        int d = -2;
        for (const auto& [m, c] : terms_) {
            int dm = MultiIndex(m).degree();
            if (d == -2) d = dm;
            else if (d != dm) return false;
        }
        return true;
    }

    Polynomial operator+(const Polynomial& o) const {
        check(nvars_ == o.nvars_, Errc::dimension_mismatch, "poly add: variable count");
        Polynomial r = *this;
        for (const auto& [m, c] : o.terms_) r.add_term(MultiIndex(m), c);
        return r;
    }
    Polynomial operator-(const Polynomial& o) const {
        check(nvars_ == o.nvars_, Errc::dimension_mismatch, "poly sub: variable count");
        Polynomial r = *this;
        for (const auto& [m, c] : o.terms_) r.add_term(MultiIndex(m), -c);
        return r;
    }
    Polynomial operator-() const {
        Polynomial r(nvars_);
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
        return r;
    }
    Polynomial operator*(const Polynomial& o) const {
        check(nvars_ == o.nvars_, Errc::dimension_mismatch, "poly mul: variable count");
        Polynomial r(nvars_);
        for (const auto& [ma, ca] : terms_)
            for (const auto& [mb, cb] : o.terms_)
                r.add_term(MultiIndex(ma) + MultiIndex(mb), ca * cb);
        return r;
    }
    Polynomial operator*(const FieldElement& s) const {
        Polynomial r(nvars_);
        if (s.is_zero()) return r;
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, c * s);
        return r;
    }
    bool operator==(const Polynomial& o) const {
        return nvars_ == o.nvars_ && terms_ == o.terms_;
    }
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    Polynomial pow(int k) const {
        Polynomial r = constant(nvars_, FieldElement(1));
        for (int j = 0; j < k; ++j) r = r * (*this);
        return r;
    }

    Polynomial conj_coeffs() const {
        Polynomial r(nvars_);
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, c.conj());
        return r;
    }

    // Substitute variable k by polynomial q (same variable count).
    Polynomial substitute(int k, const Polynomial& q) const {
        Polynomial r(nvars_);
        for (const auto& [m, c] : terms_) {
            MultiIndex rest(m);
            int e = rest.e[k];
            rest.e[k] = 0;
            r = r + Polynomial::monomial(rest, c) * q.pow(e);
        }
        return r;
    }

    // Set variable k to 1 (dehomogenization chart), dropping the variable's
    // exponent but keeping the variable slot.
    Polynomial set_var_one(int k) const {
        Polynomial r(nvars_);
        for (const auto& [m, c] : terms_) {
            MultiIndex rest(m);
            rest.e[k] = 0;
            r.add_term(rest, c);
        }
        return r;
    }

    FieldElement eval(const std::vector<FieldElement>& at) const {
        check(int(at.size()) == nvars_, Errc::dimension_mismatch, "poly eval");
        FieldElement acc(0);
        for (const auto& [m, c] : terms_) {
            FieldElement t = c;
            for (int k = 0; k < nvars_; ++k)
                if (m[k] > 0) t *= at[k].pow(m[k]);
            acc += t;
        }
        return acc;
    }

    // Append one variable slot (exponent 0 everywhere).
    Polynomial extended(int extra = 1) const {
        Polynomial r(nvars_ + extra);
        for (const auto& [m, c] : terms_) {
            std::vector<int> e = m;
            e.resize(nvars_ + extra, 0);
            r.terms_.emplace(std::move(e), c);
        }
        return r;
    }

    // Homogenize to total degree d using variable k as the homogenizer.
    Polynomial homogenized(int d, int k) const {
        Polynomial r(nvars_);
        for (const auto& [m, c] : terms_) {
            MultiIndex mi(m);
            int def = d - mi.degree();
            check(def >= 0, Errc::bad_input, "homogenize: degree too small");
            mi.e[k] += def;
            r.terms_.emplace(mi.e, c);
        }
        return r;
    }

    // Componentwise minimum of exponents over all terms (the common monomial
    // factor).  Zero polynomial yields all-zero.
    MultiIndex content_monomial() const {
        MultiIndex m = MultiIndex::zeros(nvars_);
        bool first = true;
        for (const auto& [t, c] : terms_) {
            if (first) {
                m.e = t;
                first = false;
            } else {
                for (int k = 0; k < nvars_; ++k) m.e[k] = std::min(m.e[k], t[k]);
            }
        }
        return m;
    }
    Polynomial divide_by_monomial(const MultiIndex& m) const {
        Polynomial r(nvars_);
        for (const auto& [t, c] : terms_) {
            check(m.divides(MultiIndex(t)), Errc::bad_input, "monomial does not divide");
            r.terms_.emplace(m.quotient(MultiIndex(t)).e, c);
        }
        return r;
    }

    // Exact division by a divisor with an invertible leading term; nullopt if
    // not divisible.  Single-divisor reduction is exact for the linear
    // divisors this library uses.
    std::optional<Polynomial> divide_exact(const Polynomial& div) const {
        check(nvars_ == div.nvars_ && !div.is_zero(), Errc::bad_input, "divide_exact");
        auto leading = [](const Polynomial& p) {
            const auto* best = (const std::pair<const std::vector<int>, FieldElement>*)nullptr;
            for (const auto& t : p.terms_) {
                if (!best || display_before(MultiIndex(t.first), MultiIndex(best->first)))
                    best = &t;
            }
            return best;
        };
        Polynomial rem = *this, q(nvars_);
        const auto* dl = leading(div);
        MultiIndex dm(dl->first);
        FieldElement dcinv = dl->second.inverse();
        while (!rem.is_zero()) {
            const auto* rl = leading(rem);
            MultiIndex rm(rl->first);
            if (!dm.divides(rm)) return std::nullopt;
            FieldElement f = rl->second * dcinv;
            MultiIndex sh = dm.quotient(rm);
            q.add_term(sh, f);
            rem = rem - div * Polynomial::monomial(sh, f);
        }
        return q;
    }

    // Deterministic rendering; variables are named z1..zn by default.
    std::string str(const std::vector<std::string>& names = {}) const;

    // Parse over variables z1..zn with scalar-grammar coefficients:
    //   poly   := ['-'] term (('+'|'-') term)*
    //   term   := factor ('*' factor)*
    //   factor := scalar-atom | z<k> ('^' uint)? | '(' poly ')'
    static Polynomial parse(std::string_view text, int nvars);

  private:
    int nvars_ = 0;
    Terms terms_;
};

namespace detail {

Polynomial parse_poly_expr(Cursor& cur, int nvars);

inline Polynomial parse_poly_factor(Cursor& cur, int nvars) {
    if (cur.accept('(')) {
        Polynomial p = parse_poly_expr(cur, nvars);
        cur.expect(')');
        return p;
    }
    cur.skip_ws();
    // variable z<k>; 'i' and function atoms fall through to the scalar parser
    if (cur.peek() == 'z' && cur.pos + 1 < cur.s.size() &&
        isdigit(static_cast<unsigned char>(cur.s[cur.pos + 1]))) {
        ++cur.pos;
        Int kz = cur.parse_uint();
        long k = kz.get_si();
        check(k >= 1 && k <= nvars, Errc::parse_error,
              "variable z" + std::to_string(k) + " out of range (n=" + std::to_string(nvars) +
                  ")");
        int e = 1;
        if (cur.accept('^')) e = int(cur.parse_uint().get_si());
        return Polynomial::monomial(MultiIndex::unit(nvars, int(k - 1), e), FieldElement(1));
    }
    return Polynomial::constant(nvars, parse_scalar_factor(cur));
}

inline Polynomial parse_poly_term(Cursor& cur, int nvars) {
    Polynomial p = parse_poly_factor(cur, nvars);
    while (cur.accept('*')) p = p * parse_poly_factor(cur, nvars);
    return p;
}

inline Polynomial parse_poly_expr(Cursor& cur, int nvars) {
    bool neg = cur.accept('-');
    Polynomial p = parse_poly_term(cur, nvars);
    if (neg) p = -p;
    for (;;) {
        if (cur.accept('+')) p = p + parse_poly_term(cur, nvars);
        else if (cur.accept('-')) p = p - parse_poly_term(cur, nvars);
        else break;
    }
    return p;
}

}  // namespace detail

inline Polynomial Polynomial::parse(std::string_view text, int nvars) {
    detail::Cursor cur{text};
    Polynomial p = detail::parse_poly_expr(cur, nvars);
    check(cur.eof(), Errc::parse_error,
          "trailing input at column " + std::to_string(cur.pos + 1));
    return p;
}

inline std::string Polynomial::str(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    auto var_name = [&](int k) {
        if (k < int(names.size())) return names[k];
        return "z" + std::to_string(k + 1);
    };
    // print in display order (degree desc, then graded lex desc)
    std::vector<const std::pair<const std::vector<int>, FieldElement>*> ts;
    for (const auto& t : terms_) ts.push_back(&t);
    std::sort(ts.begin(), ts.end(), [&](auto* a, auto* b) {
        return display_before(MultiIndex(a->first), MultiIndex(b->first));
    });
    std::string out;
    bool first = true;
    for (const auto* t : ts) {
        MultiIndex m(t->first);
        const FieldElement& c = t->second;
        std::string mon;
        for (int k = 0; k < nvars_; ++k) {
            if (m.e[k] == 0) continue;
            if (!mon.empty()) mon += "*";
            mon += var_name(k);
            if (m.e[k] > 1) mon += "^" + std::to_string(m.e[k]);
        }
        bool negated = false;
        std::string body;
        if (mon.empty()) {
            std::string raw = c.str();
            bool sum = raw.find(" + ") != std::string::npos || raw.find(" - ") != std::string::npos;
            if (!sum && raw.size() > 1 && raw[0] == '-') {
                negated = true;
                raw = raw.substr(1);
            }
            body = sum ? "(" + raw + ")" : raw;
        } else if (c == FieldElement(1)) {
            body = mon;
        } else if (c == FieldElement(-1)) {
            body = mon;
            negated = true;
        } else {
            std::string raw = c.str();
            bool sum = raw.find(" + ") != std::string::npos || raw.find(" - ") != std::string::npos;
            if (!sum && raw.size() > 1 && raw[0] == '-') {
                negated = true;
                raw = raw.substr(1);
            }
            body = (sum ? "(" + raw + ")" : raw) + "*" + mon;
        }
        if (first) {
            out += negated ? "-" : "";
            first = false;
        } else {
            out += negated ? " - " : " + ";
        }
        out += body;
    }
    return out;
}

}  // namespace hq

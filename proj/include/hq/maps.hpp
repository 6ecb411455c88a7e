#pragma once

// Rational maps between hyperquadrics: homogeneous coefficient matrices,
// verification against the source form, rank-one decompositions of Hermitian
// forms into maps, and recovery of target automorphisms.

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hq/forms.hpp"

namespace hq {

// Q(a,b) in C^(a+b) (nonhomogeneous convention); the homogeneous defining
// matrix is diag(+1 x a, -1 x b, -1) with the homogenizing variable last.
struct Hyperquadric {
    int a = 0, b = 0;

    int ambient() const { return a + b; }
    bool is_sphere() const { return b == 0; }

    HermitianForm form() const {
        std::vector<FieldElement> d(a + b + 1, FieldElement(1));
        for (int k = a; k <= a + b; ++k) d[k] = FieldElement(-1);
        return HermitianForm::diagonal_deg1(a + b, d);
    }

    bool operator==(const Hyperquadric& o) const { return a == o.a && b == o.b; }
    bool operator!=(const Hyperquadric& o) const { return !(*this == o); }

    std::string str() const {
        return "Q(" + std::to_string(a) + "," + std::to_string(b) + ")";
    }
    static Hyperquadric parse(detail::Cursor& cur) {
        check(cur.accept('Q'), Errc::parse_error, "expected 'Q'");
        cur.expect('(');
        int a = int(cur.parse_uint().get_si());
        cur.expect(',');
        int b = int(cur.parse_uint().get_si());
        cur.expect(')');
        check(a >= 0 && b >= 0 && a + b >= 1, Errc::bad_input, "invalid hyperquadric signature");
        return Hyperquadric{a, b};
    }
};

class RationalMap {
  public:
    // f: coefficient rows over veronese_basis(source.ambient(), degree);
    // rows 0..c-1 positive components, c..c+d-1 negative, last row the
    // homogenized denominator.
    RationalMap(Hyperquadric source, Hyperquadric target, int degree, MatrixK f,
                bool check_lowest_terms = true)
        : source_(source), target_(target), degree_(degree), f_(std::move(f)) {
        VeroneseIndex vi(source_.ambient(), degree_);
        check(f_.cols() == vi.size(), Errc::dimension_mismatch,
              "map coefficient matrix has wrong column count");
        check(f_.rows() == target_.ambient() + 1, Errc::dimension_mismatch,
              "map coefficient matrix has wrong row count");
        bool den_zero = true;
        for (int j = 0; j < f_.cols(); ++j)
            if (!f_(f_.rows() - 1, j).is_zero()) den_zero = false;
        check(!den_zero, Errc::bad_input, "zero denominator component");
        if (check_lowest_terms) validate_lowest_terms();
    }

    // Build from nonhomogeneous numerators over z1..zn plus a denominator.
    static RationalMap from_components(Hyperquadric source, Hyperquadric target,
                                       std::vector<Polynomial> numerators, Polynomial den) {
        int n = source.ambient();
        check(int(numerators.size()) == target.ambient(), Errc::dimension_mismatch,
              "component count does not match the target");
        check(!den.is_zero(), Errc::bad_input, "zero denominator");
        int d = den.degree();
        for (const auto& p : numerators) d = std::max(d, p.degree());
        check(d >= 1, Errc::bad_input, "constant map");
        VeroneseIndex vi(n, d);
        MatrixK f(target.ambient() + 1, vi.size());
        auto fill = [&](int row, const Polynomial& p) {
            if (p.is_zero()) return;
            Polynomial h = p.extended(1).homogenized(d, n);
            for (const auto& [m, c] : h.terms()) f(row, vi.index_of(MultiIndex(m))) = c;
        };
        for (size_t k = 0; k < numerators.size(); ++k) {
            check(numerators[k].nvars() == n, Errc::dimension_mismatch,
                  "component variable count");
            fill(int(k), numerators[k]);
        }
        check(den.nvars() == n, Errc::dimension_mismatch, "denominator variable count");
        fill(target.ambient(), den);
        return RationalMap(source, target, d, std::move(f));
    }

    const Hyperquadric& source() const { return source_; }
    const Hyperquadric& target() const { return target_; }
    int degree() const { return degree_; }
    const MatrixK& coeff_matrix() const { return f_; }
    int rows() const { return f_.rows(); }

    // component k as a homogeneous polynomial in n+1 variables (the last row
    // is the homogenized denominator)
    Polynomial component(int k) const {
        VeroneseIndex vi(source_.ambient(), degree_);
        Polynomial p(source_.ambient() + 1);
        for (int j = 0; j < vi.size(); ++j) p.add_term(vi.at(j), f_(k, j));
        return p;
    }
    Polynomial denominator() const { return component(f_.rows() - 1); }

    // <V f, f> with V = diag(+1 x c, -1 x (d+1)).
    HermitianForm pullback_form() const {
        return from_map(f_, target_.a, target_.b + 1, source_.ambient(), degree_);
    }

    bool operator==(const RationalMap& o) const {
        return source_ == o.source_ && target_ == o.target_ && degree_ == o.degree_ &&
               f_ == o.f_;
    }

    std::string str() const;
    static RationalMap parse(const std::string& text);

  private:
    Hyperquadric source_, target_;
    int degree_ = 0;
    MatrixK f_;

    void validate_lowest_terms() const;
};

// --- verification ----------------------------------------------------------

// Certifies exactly that f carries the source hyperquadric into the target:
// <V f, f> = q <J z, z> for a (returned) Hermitian q.  Throws map_invalid if
// the division leaves a residual.
inline HermitianForm verify_map(const RationalMap& f) {
    auto q = divide_by_form(f.pullback_form(), f.source().form());
    if (!q)
        fail(Errc::map_invalid, "map does not carry " + f.source().str() + " into " +
                                    f.target().str() + " (form not divisible)");
    return *q;
}

inline bool map_is_valid(const RationalMap& f) {
    return divide_by_form(f.pullback_form(), f.source().form()).has_value();
}

// --- rank-one decomposition --------------------------------------------------

struct WeightedTerm {
    FieldElement weight;              // strictly positive real element of K
    int sign = 1;                     // +1 or -1
    std::vector<FieldElement> v;      // column vector
};

struct WeightedDecomposition {
    int n = 0, d = 0;
    std::vector<WeightedTerm> terms;  // positives first, then negatives

    int positives() const {
        int k = 0;
        for (const auto& t : terms) k += t.sign > 0;
        return k;
    }
    int negatives() const { return int(terms.size()) - positives(); }

    MatrixK reconstruct(int size) const {
        MatrixK b(size, size);
        for (const auto& t : terms)
            for (int i = 0; i < size; ++i)
                for (int j = 0; j < size; ++j) {
                    FieldElement add = t.weight * t.v[i] * t.v[j].conj();
                    b(i, j) += t.sign > 0 ? add : -add;
                }
        return b;
    }

    // Rows of the induced homogeneous map f_j = sqrt(weight_j) v_j^* Z, when
    // every weight has a square root in K.
    std::optional<MatrixK> map_rows() const {
        MatrixK f(int(terms.size()), n >= 0 ? VeroneseIndex(n, d).size() : 0);
        for (size_t r = 0; r < terms.size(); ++r) {
            auto s = terms[r].weight.sqrt();
            if (!s) return std::nullopt;
            for (int j = 0; j < f.cols(); ++j) f(int(r), j) = *s * terms[r].v[j].conj();
        }
        return f;
    }
};

// Exact decomposition B = sum_j sign_j weight_j v_j v_j^* via congruence
// elimination; the number of positive (negative) terms equals n_plus (n_minus)
// of B.  Reconstruction is verified before returning.
inline WeightedDecomposition decompose_form(const HermitianForm& b) {
    auto cd = congruence_diagonalize(b.matrix());
    auto y = cd.x.inverse();
    check(y.has_value(), Errc::internal, "congruence witness not invertible");
    WeightedDecomposition out;
    out.n = b.n();
    out.d = b.d();
    for (int pass = 0; pass < 2; ++pass) {
        for (int k = 0; k < int(cd.diag.size()); ++k) {
            int s = cd.diag[k].sign();
            if (s == 0 || (pass == 0) != (s > 0)) continue;
            WeightedTerm t;
            t.sign = s;
            t.weight = cd.diag[k].abs();
            t.v.resize(y->cols());
            for (int j = 0; j < y->cols(); ++j) t.v[j] = (*y)(k, j).conj();
            out.terms.push_back(std::move(t));
        }
    }
    check(out.reconstruct(b.size()) == b.matrix(), Errc::internal,
          "rank-one reconstruction mismatch");
    return out;
}

// --- Lemma: g = C f recovery -------------------------------------------------

// Given f, g with equal pullback forms and f of full row rank, produce the
// invertible C with C* V C = V and G = C F, built from an invertible column
// selection F1 via C = G1 F1^{-1}.
inline MatrixK recover_target_equivalence(const RationalMap& f, const RationalMap& g) {
    check(f.source() == g.source() && f.target() == g.target(), Errc::dimension_mismatch,
          "recover_target_equivalence: mismatched hyperquadrics");
    check(f.degree() == g.degree(), Errc::dimension_mismatch,
          "recover_target_equivalence: mismatched degrees");
    const MatrixK& F = f.coeff_matrix();
    const MatrixK& G = g.coeff_matrix();
    if (f.pullback_form() != g.pullback_form())
        fail(Errc::forms_differ, "the two maps induce different Hermitian forms");
    MatrixK Fr = F;
    auto pivots = Fr.rref();
    if (int(pivots.size()) < F.rows())
        fail(Errc::dependent_components, "components of f are linearly dependent");
    MatrixK F1 = F.columns(pivots), G1 = G.columns(pivots);
    auto F1inv = F1.inverse();
    check(F1inv.has_value(), Errc::internal, "pivot columns not invertible");
    MatrixK C = G1 * (*F1inv);
    // verify C F = G and C* V C = V exactly
    check(C * F == G, Errc::internal, "recovered C does not satisfy G = C F");
    int c = f.target().a, dneg = f.target().b + 1;
    MatrixK V(c + dneg, c + dneg);
    for (int k = 0; k < c + dneg; ++k) V(k, k) = FieldElement(k < c ? 1 : -1);
    check(C.conj_transpose() * V * C == V, Errc::internal, "recovered C is not V-unitary");
    return C;
}

// --- dehomogenization ---------------------------------------------------------

struct DehomogenizedMap {
    std::vector<Polynomial> components;  // numerators, chart variable set to 1
    Polynomial den;
    int chart = 0;
};

inline DehomogenizedMap dehomogenize(const RationalMap& f, int chart) {
    check(chart >= 0 && chart <= f.source().ambient(), Errc::bad_input,
          "dehomogenize: chart out of range");
    DehomogenizedMap out;
    out.chart = chart;
    for (int k = 0; k + 1 < f.rows(); ++k)
        out.components.push_back(f.component(k).set_var_one(chart));
    out.den = f.denominator().set_var_one(chart);
    return out;
}

// --- lowest-terms checks -------------------------------------------------------

inline void RationalMap::validate_lowest_terms() const {
    int n = source_.ambient();
    // common monomial factor across all nonzero rows
    std::optional<MultiIndex> content;
    std::vector<Polynomial> comps;
    for (int k = 0; k < f_.rows(); ++k) {
        Polynomial p = component(k);
        if (p.is_zero()) continue;
        MultiIndex c = p.content_monomial();
        if (!content) {
            content = c;
        } else {
            for (int j = 0; j <= n; ++j) content->e[j] = std::min(content->e[j], c.e[j]);
        }
        comps.push_back(std::move(p));
    }
    check(content.has_value(), Errc::bad_input, "map has no nonzero components");
    check(content->degree() == 0, Errc::not_lowest_terms,
          "components share the monomial factor " +
              Polynomial::monomial(*content, FieldElement(1)).str());
    if (degree_ > 3) return;
    // Partial common-linear-factor check: candidate linear forms are fitted
    // through common zeros of all components found on a small rational grid,
    // then confirmed by trial division.  Inputs sharing a linear factor that
    // avoids the grid are the caller's responsibility.
    std::vector<std::vector<FieldElement>> common_zeros;
    std::vector<int> point(n + 1, -2);
    for (;;) {
        bool nonzero_pt = false;
        for (int v : point) nonzero_pt |= v != 0;
        if (nonzero_pt) {
            std::vector<FieldElement> z(n + 1);
            for (int j = 0; j <= n; ++j) z[j] = FieldElement(point[j]);
            bool all_vanish = true;
            for (const auto& p : comps)
                if (!p.eval(z).is_zero()) {
                    all_vanish = false;
                    break;
                }
            if (all_vanish) common_zeros.push_back(std::move(z));
        }
        int k = 0;
        while (k <= n && point[k] == 2) point[k++] = -2;
        if (k > n) break;
        ++point[k];
    }
    if (int(common_zeros.size()) < n) return;  // not enough points to pin a hyperplane
    MatrixK pts(int(common_zeros.size()), n + 1);
    for (size_t i = 0; i < common_zeros.size(); ++i)
        for (int j = 0; j <= n; ++j) pts(int(i), j) = common_zeros[i][j];
    MatrixK ker = pts.kernel();
    for (int cnd = 0; cnd < ker.cols(); ++cnd) {
        Polynomial ell(n + 1);
        for (int j = 0; j <= n; ++j) ell.add_term(MultiIndex::unit(n + 1, j), ker(j, cnd));
        if (ell.is_zero()) continue;
        bool divides_all = true;
        for (const auto& p : comps)
            if (!p.divide_exact(ell).has_value()) {
                divides_all = false;
                break;
            }
        if (divides_all)
            fail(Errc::not_lowest_terms, "components share the linear factor " + ell.str());
    }
}

// --- map file format ------------------------------------------------------------
//   map Q(a,b) -> Q(c,d)
//   f1 = <polynomial over z1..zn>
//   ...
//   den = <polynomial>          (optional, defaults to 1)

inline std::string RationalMap::str() const {
    std::ostringstream os;
    os << "map " << source_.str() << " -> " << target_.str() << "\n";
    DehomogenizedMap dh = dehomogenize(*this, source_.ambient());
    auto squeeze = [&](const Polynomial& p) {
        // re-render over z1..zn (the chart slot is unused after set_var_one)
        Polynomial q(source_.ambient());
        for (const auto& [m, c] : p.terms()) {
            std::vector<int> e(m.begin(), m.end() - 1);
            q.add_term(MultiIndex(e), c);
        }
        return q.str();
    };
    for (size_t k = 0; k < dh.components.size(); ++k)
        os << "f" << (k + 1) << " = " << squeeze(dh.components[k]) << "\n";
    os << "den = " << squeeze(dh.den) << "\n";
    return os.str();
}

inline RationalMap RationalMap::parse(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    Hyperquadric src{}, tgt{};
    bool have_header = false;
    std::vector<std::optional<Polynomial>> numerators;
    std::optional<Polynomial> den;
    auto syntax = [&](const std::string& msg) {
        fail(Errc::parse_error, "line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(is, line)) {
        ++lineno;
        std::string_view sv(line);
        detail::Cursor cur{sv};
        if (cur.eof() || cur.peek() == '#') continue;
        if (!have_header) {
            if (!cur.accept_word("map")) syntax("expected 'map Q(a,b) -> Q(c,d)'");
            try {
                src = Hyperquadric::parse(cur);
                if (!cur.accept_word("->")) syntax("expected '->'");
                tgt = Hyperquadric::parse(cur);
            } catch (const Error& e) {
                syntax(e.what());
            }
            if (!cur.eof()) syntax("trailing input after header");
            have_header = true;
            continue;
        }
        if (cur.accept_word("den")) {
            if (!cur.accept('=')) syntax("expected '=' after 'den'");
            try {
                den = detail::parse_poly_expr(cur, src.ambient());
            } catch (const Error& e) {
                syntax(e.what());
            }
            if (!cur.eof()) syntax("trailing input after polynomial");
            continue;
        }
        if (cur.accept('f')) {
            long k = 0;
            try {
                k = cur.parse_uint().get_si();
            } catch (const Error&) {
                syntax("expected component index after 'f'");
            }
            if (k < 1 || k > tgt.ambient()) syntax("component index out of range");
            if (!cur.accept('=')) syntax("expected '='");
            if (numerators.size() < size_t(tgt.ambient())) numerators.resize(tgt.ambient());
            try {
                numerators[k - 1] = detail::parse_poly_expr(cur, src.ambient());
            } catch (const Error& e) {
                syntax(e.what());
            }
            if (!cur.eof()) syntax("trailing input after polynomial");
            continue;
        }
        syntax("unrecognized line");
    }
    check(have_header, Errc::parse_error, "missing 'map' header");
    check(int(numerators.size()) == tgt.ambient(), Errc::parse_error,
          "missing component definitions");
    std::vector<Polynomial> nums;
    for (int k = 0; k < tgt.ambient(); ++k) {
        check(numerators[k].has_value(), Errc::parse_error,
              "missing component f" + std::to_string(k + 1));
        nums.push_back(*numerators[k]);
    }
    if (!den) den = Polynomial::constant(src.ambient(), FieldElement(1));
    return from_components(src, tgt, std::move(nums), *den);
}

}  // namespace hq

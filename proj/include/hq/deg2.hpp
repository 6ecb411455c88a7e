#pragma once

// The degree-2 classification pipeline: sphere maps to the sorted-parameter
// monomial normal form, the family generator, monomial-map equivalence, and
// the four-class classifier for degree-2 maps of S^3 into Q(2,1).

#include <algorithm>
#include <string>
#include <vector>

#include "hq/congruence.hpp"
#include "hq/maps.hpp"

namespace hq {

// Sorted parameter vector (t_1, ..., t_n): 0 <= t_1 <= ... <= t_n <= 1 and
// t != (1, ..., 1).  Entries are real elements of K.
struct Deg2NormalForm {
    std::vector<FieldElement> t;

    explicit Deg2NormalForm(std::vector<FieldElement> vals) : t(std::move(vals)) {
        check(!t.empty(), Errc::invalid_parameters, "empty parameter vector");
        bool all_one = true;
        for (size_t k = 0; k < t.size(); ++k) {
            check(t[k].is_real(), Errc::invalid_parameters, "parameters must be real");
            check(t[k].sign() >= 0, Errc::invalid_parameters, "parameters must be >= 0");
            check((FieldElement(1) - t[k]).sign() >= 0, Errc::invalid_parameters,
                  "parameters must be <= 1");
            if (k + 1 < t.size())
                check((t[k + 1] - t[k]).sign() >= 0, Errc::invalid_parameters,
                      "parameters must be sorted ascending");
            all_one &= t[k] == FieldElement(1);
        }
        check(!all_one, Errc::invalid_parameters, "the all-ones parameter vector is excluded");
    }

    int n() const { return int(t.size()); }
    bool operator==(const Deg2NormalForm& o) const { return t == o.t; }
    bool operator!=(const Deg2NormalForm& o) const { return !(*this == o); }

    std::string str() const {
        std::string s = "t = (";
        for (size_t k = 0; k < t.size(); ++k) {
            if (k) s += ", ";
            s += t[k].str();
        }
        return s + ")";
    }
};

// The monomial sphere map with linear weights t_i, square weights 1 - t_i,
// and mixed weights 2 - t_i - t_j; zero-weight components are dropped.
// Every needed square root must lie in K.
inline RationalMap generate_deg2_map(const Deg2NormalForm& nf) {
    int n = nf.n();
    VeroneseIndex vi(n, 2);
    struct Comp {
        MultiIndex mono;
        FieldElement coef;
    };
    std::vector<Comp> comps;
    auto push = [&](const MultiIndex& mono, const FieldElement& weight) {
        if (weight.is_zero()) return;
        // a real square root when available, otherwise any K-coefficient of
        // the right modulus (the same monomial map up to a unit phase)
        std::optional<FieldElement> r = weight.sqrt();
        if (!r || !r->is_real()) r = detail::norm_equation(weight);
        check(r.has_value(), Errc::invalid_parameters,
              "component weight " + weight.str() + " is not a norm from K");
        comps.push_back({mono, *r});
    };
    for (int i = 0; i < n; ++i) {
        MultiIndex lin = MultiIndex::zeros(n + 1);
        lin.e[i] = 1;
        lin.e[n] = 1;
        push(lin, nf.t[i]);
    }
    for (int i = 0; i < n; ++i) push(MultiIndex::unit(n + 1, i, 2), FieldElement(1) - nf.t[i]);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            MultiIndex mix = MultiIndex::zeros(n + 1);
            mix.e[i] = 1;
            mix.e[j] = 1;
            push(mix, FieldElement(2) - nf.t[i] - nf.t[j]);
        }
    int N = int(comps.size());
    MatrixK f(N + 1, vi.size());
    for (int r = 0; r < N; ++r) f(r, vi.index_of(comps[r].mono)) = comps[r].coef;
    f(N, vi.index_of(MultiIndex::unit(n + 1, n, 2))) = FieldElement(1);
    RationalMap map(Hyperquadric{n, 0}, Hyperquadric{N, 0}, 2, std::move(f));
    check(map_is_valid(map), Errc::internal, "generated family member failed verification");
    return map;
}

// Classify a degree-2 rational CR map of spheres into the normal form.
// The quotient pair (J, A) must be simultaneously diagonalizable (guaranteed
// for valid inputs); writing the diagonalized pair as the model
// (diag(1,..,1,-1), diag(1-t_1,..,1-t_n, 1)) up to a positive scaling lambda,
// the parameters are read off from the pencil invariants: the eigenvalue
// carried by the J-negative direction fixes lambda (the constant-one
// normalization of the squared-norm identity), and each eigenvalue mu with p
// J-positive directions contributes p copies of t = 1 - lambda mu.  The
// matching of square and mixed coefficients then holds identically, and the
// range checks 0 <= t <= 1 reject non-sphere data exactly.
inline Deg2NormalForm classify_deg2_sphere_map(const RationalMap& f) {
    check(f.degree() == 2, Errc::not_degree2, "classify_deg2: map degree is not 2");
    check(f.source().is_sphere() && f.source().a >= 2, Errc::not_sphere_map,
          "classify_deg2: source must be a sphere S^(2n-1) with n >= 2");
    check(f.target().is_sphere(), Errc::not_sphere_map, "classify_deg2: target must be a sphere");
    int n = f.source().a;
    HermitianForm quotient = [&]() -> HermitianForm {
        try {
            return verify_map(f);
        } catch (const Error&) {
            fail(Errc::not_sphere_map, "classify_deg2: map does not carry sphere to sphere");
        }
    }();
    MatrixK J = f.source().form().matrix();
    HermitianPair pair(J, quotient.matrix());
    check(is_simultaneously_diagonalizable(pair).diagonalizable, Errc::internal,
          "degree-2 sphere pair unexpectedly not simultaneously diagonalizable");
    MatrixK h = *J.inverse() * quotient.matrix();
    auto spectrum = pencil_eigenstructure(pair);
    // J-inertia of each eigenspace; exactly one negative direction in total
    FieldElement chart_mu;
    bool chart_found = false;
    std::vector<std::pair<FieldElement, int>> positives;  // (eigenvalue, p_k)
    for (const auto& ec : spectrum) {
        check(ec.is_linear() && ec.root().is_real(), Errc::internal,
              "diagonalizable pair with non-real spectrum");
        MatrixK space = detail::generalized_eigenspace(h, ec.root(), 1);
        MatrixK gram(space.cols(), space.cols());
        for (int i = 0; i < space.cols(); ++i)
            for (int j = 0; j < space.cols(); ++j)
                gram(i, j) =
                    detail::dot_conj(space.column(i), detail::mat_vec(J, space.column(j)));
        Inertia in = inertia_of(gram);
        check(in.n_zero == 0, Errc::internal, "J degenerate on an eigenspace");
        if (in.n_minus > 0) {
            check(in.n_minus == 1 && !chart_found, Errc::internal,
                  "sphere J-form with more than one negative direction");
            chart_found = true;
            chart_mu = ec.root();
        }
        if (in.n_plus > 0) positives.push_back({ec.root(), in.n_plus});
    }
    check(chart_found, Errc::internal, "no J-negative eigenspace direction found");
    // lambda-normalization: scale A so the denominator slot carries exactly 1
    check(!chart_mu.is_zero() && chart_mu.sign() < 0, Errc::not_sphere_map,
          "the denominator direction carries a nonnegative pencil eigenvalue");
    FieldElement lam = -chart_mu.inverse();
    std::vector<FieldElement> t;
    for (const auto& [mu, count] : positives) {
        FieldElement v = FieldElement(1) - lam * mu;
        check(v.sign() >= 0 && (FieldElement(1) - v).sign() >= 0, Errc::not_sphere_map,
              "matched parameter outside [0, 1]");
        for (int c = 0; c < count; ++c) t.push_back(v);
    }
    check(int(t.size()) == n, Errc::internal, "parameter count mismatch");
    bool all_one = true;
    for (const auto& v : t) all_one &= v == FieldElement(1);
    check(!all_one, Errc::not_sphere_map, "degenerate (degree-one) parameter vector");
    std::sort(t.begin(), t.end(), FieldElement::real_less);
    return Deg2NormalForm(std::move(t));
}

// Complete invariant: two degree-2 sphere maps are spherically equivalent iff
// their normal forms agree.  Targets of different dimensions compare via the
// zero-padding convention, which the classification is insensitive to; maps
// with different source dimensions are never equivalent.
inline bool equivalent_deg2(const RationalMap& f, const RationalMap& g) {
    if (f.source() != g.source()) return false;
    return classify_deg2_sphere_map(f) == classify_deg2_sphere_map(g);
}

// ---------------------------------------------------------------------------
// degree-2 maps of S^3 into Q(2,1)
// ---------------------------------------------------------------------------

enum class Q21Class { monomial_i, monomial_ii, nondiag_iii, nondiag_iv };

inline std::string q21_class_name(Q21Class c) {
    switch (c) {
        case Q21Class::monomial_i: return "6.1(i)";
        case Q21Class::monomial_ii: return "6.1(ii)";
        case Q21Class::nondiag_iii: return "6.1(iii)";
        case Q21Class::nondiag_iv: return "6.1(iv)";
    }
    return "?";
}

// The stored reference pairs of the four classes (quotient A against the
// canonical source J of each derivation).
inline HermitianPair q21_reference(Q21Class c) {
    FieldElement one(1), zero(0);
    switch (c) {
        case Q21Class::monomial_i:
            // (z^2, sqrt2 wt, w^2, t^2): quotient x + t - y
            return HermitianPair(MatrixK::diagonal({one, one, -one}),
                                 MatrixK::diagonal({one, -one, one}));
        case Q21Class::monomial_ii:
            // (tz, w^2, wt, z^2): quotient y - x
            return HermitianPair(MatrixK::diagonal({one, one, -one}),
                                 MatrixK::diagonal({-one, one, zero}));
        case Q21Class::nondiag_iii: {
            // anti-diagonal family at alpha = 0
            MatrixK j(3, 3), a(3, 3);
            j(0, 2) = j(1, 1) = j(2, 0) = one;
            a(1, 2) = a(2, 1) = one;
            return HermitianPair(std::move(j), std::move(a));
        }
        case Q21Class::nondiag_iv: {
            // complex-parameter family at alpha = beta = 0, gamma = 1
            MatrixK j(3, 3), a(3, 3);
            j(0, 0) = j(1, 2) = j(2, 1) = one;
            a(1, 2) = -FieldElement::i();
            a(2, 1) = FieldElement::i();
            return HermitianPair(std::move(j), std::move(a));
        }
    }
    fail(Errc::internal, "unreachable");
}

// Decide which of the four classes a degree-2 map S^3 -> Q(2,1) belongs to.
// Negation of A (with J fixed) is tested alongside, since the target form has
// two positive and two negative eigenvalues.
inline Q21Class classify_deg2_s3_to_q21(const RationalMap& f) {
    check(f.degree() == 2, Errc::not_degree2, "classify_q21: map degree is not 2");
    check(f.source() == Hyperquadric{2, 0} && f.target() == Hyperquadric{2, 1},
          Errc::bad_input, "classify_q21: expected a map Q(2,0) -> Q(2,1)");
    HermitianForm quotient = verify_map(f);
    Inertia bi = inertia(f.pullback_form());
    check(bi.n_plus == 2 && bi.n_minus == 2, Errc::bad_input,
          "classify_q21: product form must have signature (2,2)");
    MatrixK J = f.source().form().matrix();
    HermitianPair pair(J, quotient.matrix());
    HermitianPair negated(J, -quotient.matrix());
    bool diag = is_simultaneously_diagonalizable(pair).diagonalizable;
    std::vector<Q21Class> order =
        diag ? std::vector<Q21Class>{Q21Class::monomial_i, Q21Class::monomial_ii}
             : std::vector<Q21Class>{Q21Class::nondiag_iii, Q21Class::nondiag_iv};
    for (Q21Class c : order) {
        HermitianPair ref = q21_reference(c);
        if (pairs_congruent(pair, ref, false) || pairs_congruent(negated, ref, false)) return c;
    }
    fail(Errc::not_in_any_class,
         "map did not match any of the four classes (invalid input or a bug)");
}

}  // namespace hq

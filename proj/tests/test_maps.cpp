#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "hq/maps.hpp"

using namespace hq;

namespace {

FieldElement fe(long v) { return FieldElement(v); }

Polynomial pp(const std::string& s, int n) { return Polynomial::parse(s, n); }

RationalMap whitney() {
    return RationalMap::from_components(
        Hyperquadric{2, 0}, Hyperquadric{3, 0},
        {pp("z1^2", 2), pp("sqrt(2)*z1*z2", 2), pp("z2^2", 2)}, pp("1", 2));
}

bool errc_is(const Error& e, Errc c) { return e.code() == c; }

}  // namespace

TEST_CASE("verify the Whitney-type sphere map") {
    auto q = verify_map(whitney());
    CHECK(q == HermitianForm(2, 1, MatrixK::identity(3)));
}

TEST_CASE("verify the degree-3 hyperquadric map") {
    RationalMap f = RationalMap::from_components(
        Hyperquadric{2, 0}, Hyperquadric{2, 1},
        {pp("2*z2^3", 2), pp("z1^3 + 3*z1", 2), pp("sqrt(3)*(z1^2*z2 - z2)", 2)},
        pp("3*z1^2 + 1", 2));
    CHECK(f.degree() == 3);
    CHECK_NOTHROW(verify_map(f));
}

TEST_CASE("degenerate family (1, g, g) verifies with zero quotient") {
    RationalMap f = RationalMap::from_components(Hyperquadric{2, 0}, Hyperquadric{2, 1},
                                                 {pp("1", 2), pp("z2", 2), pp("z2", 2)},
                                                 pp("1", 2));
    auto q = verify_map(f);
    CHECK(q.is_zero());
}

TEST_CASE("constant-offset map into the sphere is invalid") {
    RationalMap f = RationalMap::from_components(Hyperquadric{2, 0}, Hyperquadric{3, 0},
                                                 {pp("z1", 2), pp("z2", 2), pp("1", 2)},
                                                 pp("1", 2));
    CHECK_THROWS_MATCHES(verify_map(f), Error, Catch::Matchers::Predicate<Error>([](
                             const Error& e) { return errc_is(e, Errc::map_invalid); }));
    CHECK_FALSE(map_is_valid(f));
}

TEST_CASE("perturbing the Whitney coefficient breaks verification") {
    RationalMap f = RationalMap::from_components(
        Hyperquadric{2, 0}, Hyperquadric{3, 0},
        {pp("z1^2", 2), pp("z1*z2", 2), pp("z2^2", 2)}, pp("1", 2));
    CHECK_FALSE(map_is_valid(f));
}

TEST_CASE("rank-one decomposition of the disc counterexample form") {
    MatrixK b(3, 3);
    b(0, 2) = FieldElement::i();
    b(2, 0) = -FieldElement::i();
    HermitianForm B(1, 2, b);
    WeightedDecomposition dec = decompose_form(B);
    CHECK(dec.positives() == 1);
    CHECK(dec.negatives() == 1);
    CHECK(dec.reconstruct(3) == b);
    auto rows = dec.map_rows();
    REQUIRE(rows.has_value());
    // components proportional to z0^2 + i z1^2 and z0^2 - i z1^2: every row
    // has entries only on the two pure-square monomials, in i-ratio
    VeroneseIndex vi(1, 2);
    int i20 = vi.index_of(MultiIndex({2, 0})), i02 = vi.index_of(MultiIndex({0, 2}));
    int i11 = vi.index_of(MultiIndex({1, 1}));
    for (int r = 0; r < 2; ++r) {
        CHECK((*rows)(r, i11).is_zero());
        FieldElement ratio = (*rows)(r, i02) / (*rows)(r, i20);
        CHECK((ratio == FieldElement::i() || ratio == -FieldElement::i()));
    }
}

TEST_CASE("decomposition of a diagonal form and of zero") {
    HermitianForm d = HermitianForm::diagonal_deg1(2, {fe(1), fe(1), fe(-1)});
    auto dec = decompose_form(d);
    CHECK(dec.terms.size() == 3);
    CHECK(dec.positives() == 2);
    for (const auto& t : dec.terms) CHECK(t.weight == fe(1));
    auto zero = decompose_form(HermitianForm::zero(2, 1));
    CHECK(zero.terms.empty());
}

TEST_CASE("decomposition reconstructs random Hermitian forms") {
    std::mt19937 rng(77);
    std::uniform_int_distribution<int> num(-3, 3);
    for (int trial = 0; trial < 10; ++trial) {
        MatrixK m(4, 4);
        for (int i = 0; i < 4; ++i) {
            m(i, i) = fe(num(rng));
            for (int j = i + 1; j < 4; ++j) {
                FieldElement v = fe(num(rng)) + fe(num(rng)) * FieldElement::i();
                m(i, j) = v;
                m(j, i) = v.conj();
            }
        }
        HermitianForm B(3, 1, m);
        WeightedDecomposition dec = decompose_form(B);
        CHECK(dec.reconstruct(4) == m);
        Inertia in = inertia(B);
        CHECK(dec.positives() == in.n_plus);
        CHECK(dec.negatives() == in.n_minus);
    }
}

TEST_CASE("recover target equivalence: identity and a hyperbolic twist") {
    // disc map, target Q(1,0), V = diag(1, -1)
    RationalMap f = RationalMap::from_components(
        Hyperquadric{1, 0}, Hyperquadric{1, 0},
        {pp("z1^2 + 2*i*z1 + 1", 1)}, pp("z1^2 - 2*i*z1 + 1", 1));
    CHECK(recover_target_equivalence(f, f) == MatrixK::identity(2));

    MatrixK c(2, 2);
    c(0, 0) = FieldElement(Rational(5, 4));
    c(0, 1) = FieldElement(Rational(3, 4));
    c(1, 0) = FieldElement(Rational(3, 4));
    c(1, 1) = FieldElement(Rational(5, 4));
    RationalMap g(f.source(), f.target(), f.degree(), c * f.coeff_matrix());
    MatrixK got = recover_target_equivalence(f, g);
    CHECK(got == c);
}

TEST_CASE("recover target equivalence rejects dependent components") {
    RationalMap f = RationalMap::from_components(Hyperquadric{2, 0}, Hyperquadric{2, 1},
                                                 {pp("1", 2), pp("z2", 2), pp("z2", 2)},
                                                 pp("1", 2));
    CHECK_THROWS_MATCHES(recover_target_equivalence(f, f), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return errc_is(e, Errc::dependent_components);
                         }));
}

TEST_CASE("recover target equivalence detects differing forms") {
    RationalMap f = whitney();
    RationalMap g = RationalMap::from_components(
        Hyperquadric{2, 0}, Hyperquadric{3, 0},
        {pp("z1", 2), pp("z1*z2", 2), pp("z2^2", 2)}, pp("1", 2));
    CHECK_THROWS_MATCHES(recover_target_equivalence(f, g), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return errc_is(e, Errc::forms_differ);
                         }));
}

TEST_CASE("dehomogenization charts") {
    // Whitney at the homogenizing chart
    DehomogenizedMap dh = dehomogenize(whitney(), 2);
    CHECK(dh.components[0] == pp("z1^2", 3));
    CHECK(dh.components[1] == pp("sqrt(2)*z1*z2", 3));
    CHECK(dh.components[2] == pp("z2^2", 3));
    CHECK(dh.den == pp("1", 3));

    // (z^2, sqrt2 wt, w^2, t^2) dehomogenizes to (z^2, sqrt2 w, w^2) over 1
    RationalMap t12ii = RationalMap::from_components(
        Hyperquadric{2, 0}, Hyperquadric{2, 1},
        {pp("z1^2", 2), pp("sqrt(2)*z2", 2), pp("z2^2", 2)}, pp("1", 2));
    CHECK(t12ii.component(1) == pp("sqrt(2)*z2*z3", 3));  // homogenized wt
    DehomogenizedMap dh2 = dehomogenize(t12ii, 2);
    CHECK(dh2.components[1] == pp("sqrt(2)*z2", 3));

    // (tz, w^2, wt, z^2) at the z chart becomes (t, w^2, wt) over 1
    RationalMap second = RationalMap::from_components(
        Hyperquadric{2, 0}, Hyperquadric{2, 1},
        {pp("z1", 2), pp("z2^2", 2), pp("z2", 2)}, pp("z1^2", 2));
    DehomogenizedMap dh3 = dehomogenize(second, 0);
    CHECK(dh3.components[0] == pp("z3", 3));
    CHECK(dh3.components[1] == pp("z2^2", 3));
    CHECK(dh3.components[2] == pp("z2*z3", 3));
    CHECK(dh3.den == pp("1", 3));
}

TEST_CASE("map text round trip") {
    for (const RationalMap& f :
         {whitney(),
          RationalMap::from_components(Hyperquadric{2, 0}, Hyperquadric{2, 1},
                                       {pp("z1", 2), pp("z2^2", 2), pp("z2", 2)},
                                       pp("z1^2", 2)),
          RationalMap::from_components(
              Hyperquadric{1, 0}, Hyperquadric{1, 0},
              {pp("z1^2 + 2*i*z1 + 1", 1)}, pp("z1^2 - 2*i*z1 + 1", 1))}) {
        RationalMap back = RationalMap::parse(f.str());
        CHECK(back == f);
    }
}

TEST_CASE("map file parsing errors carry line information") {
    try {
        RationalMap::parse("map Q(2,0) -> Q(3,0)\nf1 = z1^\n");
        FAIL("expected parse error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::parse_error);
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("lowest terms validation") {
    // shared monomial factor
    CHECK_THROWS_MATCHES(
        RationalMap::from_components(Hyperquadric{2, 0}, Hyperquadric{1, 0},
                                     {pp("z1^2", 2)}, pp("z1*z2", 2)),
        Error, Catch::Matchers::Predicate<Error>(
                   [](const Error& e) { return errc_is(e, Errc::not_lowest_terms); }));
    // shared linear factor, found via grid + trial division
    CHECK_THROWS_MATCHES(
        RationalMap::from_components(Hyperquadric{2, 0}, Hyperquadric{1, 0},
                                     {pp("z1^2 - z2^2", 2)}, pp("z1^2 + z1*z2", 2)),
        Error, Catch::Matchers::Predicate<Error>(
                   [](const Error& e) { return errc_is(e, Errc::not_lowest_terms); }));
}

TEST_CASE("polynomial parsing and printing") {
    Polynomial p = pp("z1^2 - sqrt(2)*z1*z2 + (1 + i)*z2 - 3/4", 2);
    CHECK(p.coeff(MultiIndex({2, 0})) == fe(1));
    CHECK(p.coeff(MultiIndex({1, 1})) == -FieldElement::sqrt2());
    CHECK(p.coeff(MultiIndex({0, 1})) == fe(1) + FieldElement::i());
    CHECK(p.coeff(MultiIndex({0, 0})) == FieldElement(Rational(-3, 4)));
    CHECK(Polynomial::parse(p.str(), 2) == p);
    CHECK(pp("0", 2).is_zero());
    CHECK(pp("z1*z1", 2) == pp("z1^2", 2));
    CHECK_THROWS_AS(pp("z3", 2), Error);
}

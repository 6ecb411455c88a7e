#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "hq/forms.hpp"
#include "pairs_data.hpp"

using namespace hq;


namespace {

FieldElement fe(long v) { return FieldElement(v); }
FieldElement fq(long n, long d) {
    Rational q(n, d);
    q.canonicalize();
    return FieldElement(q);
}

HermitianForm random_deg1_form(std::mt19937& rng, int n, bool invertible = false) {
    std::uniform_int_distribution<int> num(-4, 4);
    for (;;) {
        MatrixK m(n + 1, n + 1);
        for (int i = 0; i <= n; ++i) {
            m(i, i) = fe(num(rng));
            for (int j = i + 1; j <= n; ++j) {
                FieldElement v = fe(num(rng)) + fe(num(rng)) * FieldElement::i();
                m(i, j) = v;
                m(j, i) = v.conj();
            }
        }
        if (m.is_zero()) continue;
        if (invertible && m.determinant().is_zero()) continue;
        return HermitianForm(n, 1, std::move(m));
    }
}

}  // namespace

TEST_CASE("multiply_forms reproduces the first canonical product matrix") {
    // canonical pair with alpha = beta = 1
    FieldElement a(1), b(1);
    HermitianForm B = multiply_forms(pairs::delta2_A(a, b, 1), pairs::delta2_J(1));
    MatrixK want = pairs::form1B(a, b, 1);
    CHECK(B.matrix() == want);
    // spot entries named in the construction: row/col order
    VeroneseIndex vi(2, 2);
    CHECK(B.matrix()(vi.index_of(MultiIndex({1, 1, 0})), vi.index_of(MultiIndex({1, 0, 1}))) ==
          fe(2));
    CHECK(B.matrix()(vi.index_of(MultiIndex({0, 1, 1})), vi.index_of(MultiIndex({0, 1, 1}))) ==
          fe(2));
    CHECK(B.matrix()(vi.index_of(MultiIndex({0, 2, 0})), vi.index_of(MultiIndex({0, 0, 2}))) ==
          fe(1));
    CHECK(B.matrix()(vi.index_of(MultiIndex({0, 0, 2})), vi.index_of(MultiIndex({0, 0, 2}))) ==
          fe(0));
    CHECK(B.matrix()(vi.index_of(MultiIndex({2, 0, 0})), vi.index_of(MultiIndex({2, 0, 0}))) ==
          fe(1));
}

TEST_CASE("multiply_forms reproduces the anti-diagonal product matrix at alpha = 0") {
    HermitianForm B = multiply_forms(pairs::antidiag_A(fe(0)), pairs::antidiag_J());
    CHECK(B.matrix() == pairs::form2B(fe(0)));
    // only nonzero entries: the 1-entries and Hermitian partners
    VeroneseIndex vi(2, 2);
    int n110 = vi.index_of(MultiIndex({1, 1, 0})), n002 = vi.index_of(MultiIndex({0, 0, 2}));
    int n101 = vi.index_of(MultiIndex({1, 0, 1})), n011 = vi.index_of(MultiIndex({0, 1, 1}));
    int n020 = vi.index_of(MultiIndex({0, 2, 0}));
    CHECK(B.matrix()(n110, n002) == fe(1));
    CHECK(B.matrix()(n101, n011) == fe(1));
    CHECK(B.matrix()(n020, n011) == fe(1));
    int nonzero = 0;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            if (!B.matrix()(i, j).is_zero()) ++nonzero;
    CHECK(nonzero == 6);
}

TEST_CASE("canonical product matrices on a rational grid") {
    for (int ia = -2; ia <= 2; ++ia) {
        for (int ib = -2; ib <= 2; ++ib) {
            FieldElement a = fq(ia, 2), b = fq(ib, 3);
            for (int sign : {1, -1}) {
                CHECK(multiply_forms(pairs::delta2_A(a, b, sign), pairs::delta2_J(sign)).matrix() ==
                      pairs::form1B(a, b, sign));
            }
            CHECK(multiply_forms(pairs::antidiag_A(a), pairs::antidiag_J()).matrix() ==
                  pairs::form2B(a));
            for (int ig : {1, 2}) {
                CHECK(
                    multiply_forms(pairs::complex_A(a, b, fe(ig)), pairs::delta2_J(1)).matrix() ==
                    pairs::form3B(a, b, fe(ig)));
            }
        }
    }
}

TEST_CASE("multiplying by the constant form is the identity") {
    std::mt19937 rng(3);
    HermitianForm p = random_deg1_form(rng, 2);
    CHECK(multiply_forms(p, HermitianForm::constant_one(2)) == p);
}

TEST_CASE("multiply_forms is commutative and associative") {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 6; ++trial) {
        HermitianForm p = random_deg1_form(rng, 1), q = random_deg1_form(rng, 1),
                      r = random_deg1_form(rng, 1);
        CHECK(multiply_forms(p, q) == multiply_forms(q, p));
        CHECK(multiply_forms(multiply_forms(p, q), r) == multiply_forms(p, multiply_forms(q, r)));
    }
}

TEST_CASE("divide_by_form recovers the Whitney quotient") {
    // B = form of |(z^2, sqrt2 zw, w^2)|^2 - |t^2|^2 over (z, w, t)
    VeroneseIndex vi(2, 2);
    MatrixK F(4, vi.size());
    F(0, vi.index_of(MultiIndex({2, 0, 0}))) = fe(1);
    F(1, vi.index_of(MultiIndex({1, 1, 0}))) = FieldElement::sqrt2();
    F(2, vi.index_of(MultiIndex({0, 2, 0}))) = fe(1);
    F(3, vi.index_of(MultiIndex({0, 0, 2}))) = fe(1);
    HermitianForm B = from_map(F, 3, 1, 2, 2);
    HermitianForm J = HermitianForm::diagonal_deg1(2, {fe(1), fe(1), fe(-1)});
    auto A = divide_by_form(B, J);
    REQUIRE(A.has_value());
    CHECK(A->matrix() == MatrixK::identity(3));

    // B = J -> constant form 1
    auto one = divide_by_form(J, J);
    REQUIRE(one.has_value());
    CHECK(*one == HermitianForm::constant_one(2));

    // Whitney with the sqrt(2) omitted is not divisible
    F(1, vi.index_of(MultiIndex({1, 1, 0}))) = fe(1);
    HermitianForm Bbad = from_map(F, 3, 1, 2, 2);
    CHECK_FALSE(divide_by_form(Bbad, J).has_value());
}

TEST_CASE("divide round trip on random forms") {
    std::mt19937 rng(47);
    for (int trial = 0; trial < 8; ++trial) {
        HermitianForm a = random_deg1_form(rng, 2), j = random_deg1_form(rng, 2);
        auto back = divide_by_form(multiply_forms(a, j), j);
        REQUIRE(back.has_value());
        CHECK(*back == a);
    }
}

TEST_CASE("inertia basics") {
    // sphere form diag(1, ..., 1, -1)
    for (int n : {1, 2, 3}) {
        std::vector<FieldElement> d(n + 1, fe(1));
        d[n] = fe(-1);
        CHECK(inertia(HermitianForm::diagonal_deg1(n, d)) == Inertia{n, 1, 0});
    }
    // form3B with alpha = beta = 0, gamma = 1: two positive, two negative, rank 4
    CHECK(inertia_of(pairs::form3B(fe(0), fe(0), fe(1))) == Inertia{2, 2, 2});
    // form2B at alpha = 0: rank 4, two positive and two negative
    CHECK(inertia_of(pairs::form2B(fe(0))) == Inertia{2, 2, 2});
}

TEST_CASE("inertia is invariant under congruence by induced matrices") {
    std::mt19937 rng(53);
    std::uniform_int_distribution<int> num(-3, 3);
    for (int trial = 0; trial < 5; ++trial) {
        HermitianForm p = random_deg1_form(rng, 2);
        MatrixK x(3, 3);
        do {
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) x(i, j) = fe(num(rng));
        } while (x.determinant().is_zero());
        for (int d : {1, 2}) {
            MatrixK xh = induced_matrix(x, d);
            HermitianForm pd = d == 1 ? p : multiply_forms(p, p);
            MatrixK twisted = xh.conj_transpose() * pd.matrix() * xh;
            CHECK(inertia_of(twisted) == inertia(pd));
        }
    }
}

TEST_CASE("signature facts for the three product families") {
    // n_minus >= 2 for form1B whenever (alpha, beta) != (0, 0); rank in {3,5,6}
    for (int ia = -3; ia <= 3; ++ia) {
        for (int ib = -3; ib <= 3; ++ib) {
            FieldElement a = fq(ia, 2), b = fq(ib, 2);
            Inertia i1 = inertia_of(pairs::form1B(a, b, 1));
            if (!(ia == 0 && ib == 0)) CHECK(i1.n_minus >= 2);
            CHECK((i1.rank() == 3 || i1.rank() == 5 || i1.rank() == 6));
            Inertia i2 = inertia_of(pairs::form2B(a));
            CHECK(i2.n_minus >= 2);
            CHECK((i2.rank() == 4) == (ia == 0));
            Inertia i3 = inertia_of(pairs::form3B(a, b, fe(1)));
            CHECK(i3.n_minus >= 2);
        }
    }
}

TEST_CASE("from_map basics") {
    CHECK(from_map(MatrixK::identity(3), 2, 1, 2, 1) ==
          HermitianForm::diagonal_deg1(2, {fe(1), fe(1), fe(-1)}));
    // repeated row with opposite signs cancels
    MatrixK f(2, 3);
    f(0, 0) = fe(1);
    f(0, 2) = fe(2);
    f(1, 0) = fe(1);
    f(1, 2) = fe(2);
    CHECK(from_map(f, 1, 1, 2, 1).is_zero());
}

TEST_CASE("form evaluation is real and matches the matrix") {
    std::mt19937 rng(61);
    HermitianForm p = random_deg1_form(rng, 2);
    std::vector<FieldElement> z = {fe(1) + FieldElement::i(), fe(2), FieldElement::sqrt2()};
    FieldElement v = p.eval(z);
    CHECK(v.is_real());
}

TEST_CASE("form text round trip") {
    std::mt19937 rng(71);
    HermitianForm p = random_deg1_form(rng, 2);
    CHECK(HermitianForm::parse(p.str()) == p);
    HermitianForm b(2, 2, pairs::form3B(fq(1, 2), fe(-2), fe(1)));
    CHECK(HermitianForm::parse(b.str()) == b);
}

TEST_CASE("non-Hermitian input is rejected") {
    MatrixK m(2, 2);
    m(0, 1) = FieldElement::i();
    m(1, 0) = FieldElement::i();  // should be -i
    CHECK_THROWS_AS(HermitianForm(1, 1, m), Error);
}

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "hq/deg2.hpp"
#include "hq/veronese.hpp"

using namespace hq;

namespace {

FieldElement fe(long v) { return FieldElement(v); }
FieldElement fq(long n, long d) {
    Rational q(n, d);
    q.canonicalize();
    return FieldElement(q);
}
Polynomial pp(const std::string& s, int n) { return Polynomial::parse(s, n); }

Deg2NormalForm nf(std::vector<FieldElement> t) { return Deg2NormalForm(std::move(t)); }

MatrixK random_sphere_automorphism(std::mt19937& rng, int n) {
    std::uniform_int_distribution<int> pick(0, 3), coord(0, n - 1);
    MatrixK x = MatrixK::identity(n + 1);
    int steps = 3 + int(rng() % 3);
    for (int s = 0; s < steps; ++s) {
        MatrixK g = MatrixK::identity(n + 1);
        int kind = pick(rng);
        if (kind == 0 && n >= 2) {
            int i = coord(rng), j = coord(rng);
            if (i == j) j = (j + 1) % n;
            g(i, i) = fq(3, 5);
            g(i, j) = fq(-4, 5);
            g(j, i) = fq(4, 5);
            g(j, j) = fq(3, 5);
        } else if (kind == 1) {
            int i = coord(rng);
            g(i, i) = FieldElement::i();
        } else if (kind == 2) {
            int i = coord(rng);
            g(i, i) = fq(5, 4);
            g(i, n) = fq(3, 4);
            g(n, i) = fq(3, 4);
            g(n, n) = fq(5, 4);
        } else {
            int i = coord(rng);
            g(i, i) = (fe(3) + fe(4) * FieldElement::i()) * fq(1, 5);
        }
        x = x * g;
    }
    return x;
}

RationalMap precompose(const RationalMap& f, const MatrixK& x) {
    return RationalMap(f.source(), f.target(), f.degree(),
                       f.coeff_matrix() * induced_matrix(x, f.degree()),
                       /*check_lowest_terms=*/false);
}

// random valid parameter vector with rational-square entries
Deg2NormalForm random_t(std::mt19937& rng, int n) {
    static const std::vector<Rational> pool = [] {
        std::vector<Rational> v;
        for (int num = 0; num <= 4; ++num)
            for (int den = 1; den <= 4; ++den) {
                if (num > den) continue;
                Rational q(num * num, den * den);
                q.canonicalize();
                v.push_back(q);
            }
        return v;
    }();
    for (;;) {
        std::vector<FieldElement> t;
        std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
        for (int k = 0; k < n; ++k) t.push_back(FieldElement(pool[pick(rng)]));
        std::sort(t.begin(), t.end(), FieldElement::real_less);
        bool all_one = true;
        for (const auto& v : t) all_one &= v == fe(1);
        if (all_one) continue;
        // keep only parameter vectors whose derived weights are representable
        // over K (they must be norms from K)
        Deg2NormalForm cand(std::move(t));
        try {
            generate_deg2_map(cand);
        } catch (const Error& e) {
            if (e.code() == Errc::invalid_parameters) continue;
            throw;
        }
        return cand;
    }
}

}  // namespace

TEST_CASE("generator at the corner parameters") {
    // t = (0, 0): the homogeneous Whitney-type map (z^2, sqrt2 zw, w^2)
    RationalMap f = generate_deg2_map(nf({fe(0), fe(0)}));
    CHECK(f.target() == Hyperquadric{3, 0});
    CHECK(f.component(2).coeff(MultiIndex({1, 1, 0})) == FieldElement::sqrt2());
    CHECK(map_is_valid(f));

    // t = (0, 1): the Whitney map (w, z^2, zw) up to variable swap
    RationalMap g = generate_deg2_map(nf({fe(0), fe(1)}));
    CHECK(g.target() == Hyperquadric{3, 0});
    CHECK(g.component(0) == pp("z2*z3", 3));
    CHECK(g.component(1) == pp("z1^2", 3));
    CHECK(g.component(2) == pp("z1*z2", 3));

    // the all-ones vector is excluded
    CHECK_THROWS_MATCHES(nf({fe(1), fe(1)}), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.code() == Errc::invalid_parameters;
                         }));
    // weights must be squares in K: mixed weight 2 - 5/9 - 2/3 = 7/9 is not
    CHECK_THROWS_MATCHES(generate_deg2_map(nf({fq(5, 9), fq(2, 3)})), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.code() == Errc::invalid_parameters;
                         }));
}

TEST_CASE("classification of the Whitney map") {
    RationalMap f = RationalMap::from_components(
        Hyperquadric{2, 0}, Hyperquadric{3, 0},
        {pp("z1", 2), pp("z1*z2", 2), pp("z2^2", 2)}, pp("1", 2));
    Deg2NormalForm t = classify_deg2_sphere_map(f);
    CHECK(t == nf({fe(0), fe(1)}));
    CHECK(t.str() == "t = (0, 1)");
}

TEST_CASE("classify-generate round trip on random parameters") {
    std::mt19937 rng(90210);
    for (int n : {2, 3, 4}) {
        for (int trial = 0; trial < 6; ++trial) {
            Deg2NormalForm t = random_t(rng, n);
            RationalMap f = generate_deg2_map(t);
            CHECK(classify_deg2_sphere_map(f) == t);
        }
    }
}

TEST_CASE("classification is invariant under source automorphisms") {
    std::mt19937 rng(1132);
    RationalMap f = generate_deg2_map(nf({fe(0), fe(0)}));
    for (int trial = 0; trial < 6; ++trial) {
        MatrixK x = random_sphere_automorphism(rng, 2);
        RationalMap g = precompose(f, x);
        CHECK(classify_deg2_sphere_map(g) == nf({fe(0), fe(0)}));
    }
    RationalMap h = generate_deg2_map(nf({fq(1, 4), fe(1)}));
    for (int trial = 0; trial < 6; ++trial) {
        MatrixK x = random_sphere_automorphism(rng, 2);
        CHECK(classify_deg2_sphere_map(precompose(h, x)) == nf({fq(1, 4), fe(1)}));
    }
}

TEST_CASE("equivalence of degree-2 maps") {
    RationalMap a = generate_deg2_map(nf({fe(0), fe(0)}));
    RationalMap b = generate_deg2_map(nf({fe(0), fe(1)}));
    CHECK_FALSE(equivalent_deg2(a, b));
    CHECK(equivalent_deg2(a, a));

    // precomposition with a permutation-and-phase automorphism
    MatrixK perm(3, 3);
    perm(0, 1) = FieldElement::i();
    perm(1, 0) = fe(1);
    perm(2, 2) = -FieldElement::i();
    CHECK(equivalent_deg2(a, precompose(a, perm)));

    // postcomposition with a target unitary
    RationalMap c = generate_deg2_map(nf({fq(1, 2), fq(1, 2)}));
    int rows = c.rows();
    MatrixK u = MatrixK::identity(rows);
    u(0, 0) = fq(3, 5);
    u(0, 1) = fq(-4, 5);
    u(1, 0) = fq(4, 5);
    u(1, 1) = fq(3, 5);
    RationalMap cpost(c.source(), c.target(), c.degree(), u * c.coeff_matrix(),
                      /*check_lowest_terms=*/false);
    CHECK(equivalent_deg2(c, cpost));
}

TEST_CASE("classification rejects wrong inputs") {
    RationalMap cubic = RationalMap::from_components(
        Hyperquadric{2, 0}, Hyperquadric{3, 0},
        {pp("z1^3", 2), pp("sqrt(3)*z1*z2", 2), pp("z2^3", 2)}, pp("1", 2));
    CHECK_THROWS_MATCHES(classify_deg2_sphere_map(cubic), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.code() == Errc::not_degree2;
                         }));
    RationalMap disc = RationalMap::from_components(
        Hyperquadric{1, 0}, Hyperquadric{1, 0},
        {pp("z1^2 + 2*i*z1 + 1", 1)}, pp("z1^2 - 2*i*z1 + 1", 1));
    CHECK_THROWS_AS(classify_deg2_sphere_map(disc), Error);
}

TEST_CASE("Q21 classes of the four representatives") {
    RationalMap m1 = RationalMap::from_components(
        Hyperquadric{2, 0}, Hyperquadric{2, 1},
        {pp("z1^2", 2), pp("sqrt(2)*z2", 2), pp("z2^2", 2)}, pp("1", 2));
    CHECK(classify_deg2_s3_to_q21(m1) == Q21Class::monomial_i);

    RationalMap m2 = RationalMap::from_components(
        Hyperquadric{2, 0}, Hyperquadric{2, 1},
        {pp("z1", 2), pp("z2^2", 2), pp("z2", 2)}, pp("z1^2", 2));
    CHECK(classify_deg2_s3_to_q21(m2) == Q21Class::monomial_ii);

    RationalMap m3 = RationalMap::from_components(
        Hyperquadric{2, 0}, Hyperquadric{2, 1},
        {pp("z1^2 + sqrt(3)*z1*z2 + z2^2 - z1", 2), pp("z2^2 + z1 - sqrt(3)*z2 - 1", 2),
         pp("z1^2 - sqrt(3)*z1*z2 + z2^2 - z1", 2)},
        pp("z2^2 + z1 + sqrt(3)*z2 - 1", 2));
    CHECK(classify_deg2_s3_to_q21(m3) == Q21Class::nondiag_iii);

    RationalMap m4 = RationalMap::from_components(
        Hyperquadric{2, 0}, Hyperquadric{2, 1},
        {pp("root4(2)*(z1*z2 - i*z1)", 2), pp("z2^2 - sqrt(2)*i*z2 + 1", 2),
         pp("root4(2)*(z1*z2 + i*z1)", 2)},
        pp("z2^2 + sqrt(2)*i*z2 + 1", 2));
    CHECK(classify_deg2_s3_to_q21(m4) == Q21Class::nondiag_iv);
}

TEST_CASE("Q21 classification is invariant under source automorphisms") {
    std::mt19937 rng(555);
    RationalMap m2 = RationalMap::from_components(
        Hyperquadric{2, 0}, Hyperquadric{2, 1},
        {pp("z1", 2), pp("z2^2", 2), pp("z2", 2)}, pp("z1^2", 2));
    for (int trial = 0; trial < 4; ++trial) {
        MatrixK x = random_sphere_automorphism(rng, 2);
        CHECK(classify_deg2_s3_to_q21(precompose(m2, x)) == Q21Class::monomial_ii);
    }
}

TEST_CASE("the four Q21 reference pairs are pairwise non-congruent") {
    std::vector<Q21Class> all{Q21Class::monomial_i, Q21Class::monomial_ii,
                              Q21Class::nondiag_iii, Q21Class::nondiag_iv};
    for (size_t i = 0; i < all.size(); ++i)
        for (size_t j = 0; j < all.size(); ++j) {
            bool want = i == j;
            HermitianPair a = q21_reference(all[i]), b = q21_reference(all[j]);
            bool got = pairs_congruent(a, b, true);
            if (!got) got = pairs_congruent(HermitianPair(a.j, -a.a), b, true);
            CHECK(got == want);
        }
}

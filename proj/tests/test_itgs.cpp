#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "random_words.hpp"

using namespace qh3;
using qh3test::norm_one_generators;
using qh3test::random_word;

namespace {
const AlgebraParams P{-2, 13};

QuadElem q(int x, int y) { return {Rat(x), Rat(y), Int(-2)}; }
} // namespace

TEST_CASE("pell half-planes") {
    // The three reference half-planes, with their Pell data.
    HalfplaneCert c01 = construct_halfplane(0, 1, P);
    CHECK(c01.pell_d == 11);
    CHECK(c01.pell_x == 10);
    CHECK(c01.pell_y == 3);
    CHECK(c01.gamma.xi() == q(10, 3));
    CHECK(c01.gamma.eta() == q(3, 0));
    CHECK(c01.gamma.norm() == 1);

    HalfplaneCert c10 = construct_halfplane(1, 0, P);
    CHECK(c10.pell_d == 39);
    CHECK(c10.pell_x == 25);
    CHECK(c10.pell_y == 4);
    CHECK(c10.gamma.xi() == q(25, 0));
    CHECK(c10.gamma.eta() == q(4, 4));

    HalfplaneCert c23 = construct_halfplane(2, 3, P);
    CHECK(c23.pell_d == 99);
    CHECK(c23.pell_x == 10);
    CHECK(c23.pell_y == 1);
    CHECK(c23.gamma.xi() == q(10, 3));
    CHECK(c23.gamma.eta() == q(1, 2));

    for (const auto& c : {c01, c10, c23}) {
        CHECK(classify(c.gamma).tag == IsomTag::Hyperbolic);
        CHECK(halfplane_invariance(c.gamma, c.surface));
        CHECK(image_of_trace(c.gamma, c.surface.trace) == c.surface.trace);
    }

    // d = a u^2 + b (1 - a t^2) square or non-positive is rejected.
    CHECK_THROWS_AS((void)construct_halfplane(0, 1, AlgebraParams(-1, 5)), std::domain_error);  // d = 4
    CHECK_THROWS_AS((void)construct_halfplane(0, 4, AlgebraParams(-2, 13)), std::domain_error); // d = -19
    CHECK_THROWS_AS((void)construct_halfplane(0, 1, AlgebraParams(2, 13)), std::domain_error);  // a > 0
}

TEST_CASE("invariant trace lines") {
    HalfplaneCert c01 = construct_halfplane(0, 1, P);
    TraceCircle L = trace_line_of(c01.gamma);
    CHECK(L == c01.surface.trace);
    CHECK(L.contains(QuadElem(0, Rat(1, 13), P.a)));
    CHECK_THROWS_AS((void)trace_line_of(Quaternion::scalar(1, P)), std::domain_error);

    // A plane that is not invariant.
    ItgsDesc other = ItgsDesc::halfplane(q(0, 1), q(1, 0));
    CHECK(!halfplane_invariance(c01.gamma, other));
    CHECK_THROWS_AS((void)halfplane_invariance(c01.gamma, ItgsDesc::halfsphere(q(0, 0), 1)),
                    std::domain_error);
}

TEST_CASE("pell half-spheres") {
    // Example 1: S(2/3 + sqrt(-2), r^2 = 3).
    SphereCert s1 = construct_sphere(QuadElem(Rat(2, 3), 1, P.a), 3, P);
    CHECK(s1.pell_d == Rat(3580, 81));
    CHECK(s1.pell_x == 359);
    CHECK(s1.pell_y == 54);
    CHECK(s1.gamma.xi() == q(359, 168));
    CHECK(s1.gamma.eta() == q(-108, 36));
    CHECK(s1.gamma.norm() == 1);

    // Example 2 (derived element): S(7 + 3 sqrt(-2), r^2 = 64).
    SphereCert s2 = construct_sphere(q(7, 3), 64, P);
    CHECK(s2.pell_d == 942);
    CHECK(s2.pell_x == 106133);
    CHECK(s2.pell_y == 3458);
    CHECK(s2.gamma.xi() == q(106133, -69160));
    CHECK(s2.gamma.eta() == QuadElem::sqrt_gen(-2) * q(7, 3) * Rat(3458));

    // Example 3: S(5 + 2 sqrt(-2), r^2 = 30).
    SphereCert s3 = construct_sphere(q(5, 2), 30, P);
    CHECK(s3.pell_d == 58);
    CHECK(s3.pell_x == 19603);
    CHECK(s3.pell_y == 2574);
    CHECK(s3.gamma.xi() == q(19603, -51480));
    CHECK(s3.gamma.eta() == QuadElem::sqrt_gen(-2) * q(5, 2) * Rat(2574));

    for (const auto& s : {s1, s2, s3}) {
        CHECK(classify(s.gamma).tag == IsomTag::Hyperbolic);
        CHECK(sphere_map_criterion(s.gamma, s.surface, s.surface).holds);
        CHECK(image_of_trace(s.gamma, s.surface.trace) == s.surface.trace);
    }

    CHECK_THROWS_AS((void)construct_sphere(q(0, 0), 1, P), std::domain_error);
    CHECK_THROWS_AS((void)construct_sphere(q(1, 0), Rat(-1), P), std::domain_error);
    CHECK_THROWS_AS((void)construct_sphere(q(1, 0), Rat(1, 13), P), std::domain_error);
}

TEST_CASE("sphere map criterion") {
    auto gens = norm_one_generators(P);
    std::mt19937 rng(505);
    std::uniform_int_distribution<int> d(-4, 4), dn(1, 3);
    int eps_minus = 0;
    for (int i = 0; i < 100; ++i) {
        Quaternion w = random_word(rng, gens, P, 3);
        QuadElem c(Rat(d(rng), dn(rng)), Rat(d(rng), dn(rng)), P.a);
        Rat rsq(std::abs(d(rng)) + 1, dn(rng));
        ItgsDesc S1 = ItgsDesc::halfsphere(c, rsq);
        TraceCircle img = image_of_trace(w, S1.trace);
        if (img.is_line()) continue;
        ItgsDesc S2{img};
        SphereMapResult r = sphere_map_criterion(w, S1, S2);
        CHECK(r.holds);
        if (r.epsilon && *r.epsilon == -1) ++eps_minus;
        ItgsDesc S3 = ItgsDesc::halfsphere(c + q(1, 0), rsq);
        CHECK(sphere_map_criterion(w, S1, S3).holds == (img == S3.trace));
    }
    CHECK(eps_minus > 0);
    CHECK_THROWS_AS(
        (void)sphere_map_criterion(gens[0], ItgsDesc::halfplane(q(0, 0), q(1, 0)),
                                   ItgsDesc::halfsphere(q(0, 0), 1)),
        std::domain_error);
}

TEST_CASE("necessary stabilizer conditions for spheres") {
    SphereCert s1 = construct_sphere(QuadElem(Rat(2, 3), 1, P.a), 3, P);
    Pro7Result r1 = pro7_necessary(s1.surface, s1.gamma);
    CHECK(r1.ok);
    CHECK(!r1.vacuous);
    CHECK(r1.q == Rat(-56, 9));
    CHECK(*r1.zeta == QuadElem(Rat(-3, 28), Rat(-9, 56), P.a));
    CHECK(*r1.X == 718);
    CHECK(*r1.Y == Rat(1, 336));
    CHECK(Rat(P.a) * (1 - 4 * Rat(P.b) * r1.zeta->norm()) == Rat(895, 196));

    SphereCert s3 = construct_sphere(q(5, 2), 30, P);
    Pro7Result r3 = pro7_necessary(s3.surface, s3.gamma);
    CHECK(r3.ok);
    CHECK(r3.q == 40);
    CHECK(*r3.X == 39206);
    CHECK(*r3.Y == Rat(-1, 102960));
    CHECK(Rat(P.a) * (1 - 4 * Rat(P.b) * r3.zeta->norm()) == Rat(29, 200));

    // q = 0 is vacuous: N(a1) - r^2 = -1/b.
    ItgsDesc vac = ItgsDesc::halfsphere(q(1, 0), Rat(14, 13));
    Pro7Result rv = pro7_necessary(vac, s1.gamma);
    CHECK(rv.vacuous);
    CHECK(rv.ok);

    // A non-stabilizer fails the conditions.
    Pro7Result bad = pro7_necessary(s1.surface, s3.gamma);
    CHECK(!bad.ok);
    CHECK_THROWS_AS((void)pro7_necessary(ItgsDesc::halfplane(q(0, 0), q(1, 0)), s1.gamma),
                    std::domain_error);
}

TEST_CASE("greedy non-commensurable set") {
    GreedySet g = greedy_distinct_set(-2, 500);
    std::vector<Int> expected{2, 11, 12, 70, 109, 225, 408};
    CHECK(g.excluded == expected);
    CHECK(g.kept.size() + g.excluded.size() == 501);
    CHECK(g.kept.front() == 0);
    // Excluded t repeat an earlier squarefree kernel of 1 + 2 t^2.
    CHECK(squarefree_kernel(Int(1 + 2 * 2 * 2)) == squarefree_kernel(Int(1)));
    CHECK(squarefree_kernel(Int(1 + 2 * 11 * 11)) == squarefree_kernel(Int(1 + 2 * 1 * 1)));
    CHECK_THROWS_AS((void)greedy_distinct_set(2, 10), std::domain_error);
}

TEST_CASE("prime values of the sphere form") {
    std::vector<Int> exp1{1, 2, 4, 6, 10};
    CHECK(prime_form_search(-1, 10) == exp1);
    std::vector<Int> exp2{1, 3, 6, 9};
    CHECK(prime_form_search(-2, 10) == exp2);
    CHECK_THROWS_AS((void)prime_form_search(2, 10), std::domain_error);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <qh3/quat.hpp>

#include <random>

using namespace qh3;

namespace {
const AlgebraParams P{-2, 13};

Quaternion make(int x0, int x1, int e0, int e1) {
    return {QuadElem(x0, x1, P.a), QuadElem(e0, e1, P.a), P.b};
}
} // namespace

TEST_CASE("algebra parameters validate") {
    CHECK_THROWS_AS(AlgebraParams(0, 13), std::domain_error);
    CHECK_THROWS_AS(AlgebraParams(1, 13), std::domain_error);
    CHECK_THROWS_AS(AlgebraParams(12, 13), std::domain_error);
    CHECK_THROWS_AS(AlgebraParams(-2, 0), std::domain_error);
    CHECK(AlgebraParams(-2, 13) == AlgebraParams(-2, 13));
}

TEST_CASE("multiplication structure") {
    // Omega * z = conj(z) * Omega and Omega^2 = b.
    QuadElem z(3, 5, P.a);
    Quaternion Om = Quaternion::omega_big(P);
    Quaternion zq(z, QuadElem(0, 0, P.a), P.b);
    Quaternion zcq(z.conj(), QuadElem(0, 0, P.a), P.b);
    CHECK(Om * zq == zcq * Om);
    CHECK(Om * Om == Quaternion::scalar(13, P));

    // Norm is multiplicative, trace is Tr(xi), conjugation reverses products.
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> d(-9, 9);
    for (int i = 0; i < 50; ++i) {
        Quaternion u = make(d(rng), d(rng), d(rng), d(rng));
        Quaternion v = make(d(rng), d(rng), d(rng), d(rng));
        CHECK((u * v).norm() == u.norm() * v.norm());
        CHECK((u * v).conj() == v.conj() * u.conj());
        CHECK(u.trace() == u.xi().trace());
        CHECK(u * comatrix(u) == Quaternion::scalar(u.norm(), P));
        if (u.norm() != 0) CHECK(u * u.inverse() == Quaternion::scalar(1, P));
    }
    CHECK_THROWS_AS(Quaternion::zero(P).inverse(), std::domain_error);
}

TEST_CASE("matrix embedding") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> d(-9, 9);
    for (int i = 0; i < 30; ++i) {
        Quaternion u = make(d(rng), d(rng), d(rng), d(rng));
        Mat2 m = phi_embed(u);
        CHECK(m.det() == QuadElem::from_rat(u.norm(), P.a));
        CHECK(m.tr() == QuadElem::from_rat(u.trace(), P.a));
        Quaternion v = make(d(rng), d(rng), d(rng), d(rng));
        Mat2 mu = phi_embed(u), mv = phi_embed(v), muv = phi_embed(u * v);
        CHECK(muv.a == mu.a * mv.a + mu.b * mv.c);
        CHECK(muv.b == mu.a * mv.b + mu.b * mv.d);
        CHECK(muv.c == mu.c * mv.a + mu.d * mv.c);
        CHECK(muv.d == mu.c * mv.b + mu.d * mv.d);
    }
}

TEST_CASE("class gates") {
    CHECK(is_division_certified(P));
    K2sReport r = k2s_check(P);
    CHECK(r.member);
    CHECK(r.failures.empty());
    CHECK(!elliptic_obstruction(P));

    CHECK(!k2s_check({-2, 5}).member);   // (-1/5) = 1 but (-3/5) = -1
    CHECK(!k2s_check({2, 13}).member);   // a > 0
    CHECK(!k2s_check({-1, 13}).member);  // (-1/13) = 1 makes (a/b) = +1
    CHECK(!is_division_certified({-1, 13}));
    CHECK(elliptic_obstruction({-1, 13}));
    CHECK_THROWS_AS((void)elliptic_obstruction({-2, 3}), std::domain_error);
}

TEST_CASE("standard order") {
    OrderDesc R = order_i0(P);
    CHECK(R.D == 1);
    CHECK(R.D_prime == 1);
    CHECK(is_standard_order(R));
    CHECK(order_coords(Quaternion::scalar(1, P), R).has_value());
    CHECK(order_coords(make(4, 1, 1, 0), R).has_value());
    CHECK(!order_coords(Quaternion::scalar(Rat(1, 2), P), R).has_value());

    CHECK(is_primitive(make(4, 1, 1, 0), R));
    CHECK(!is_primitive(make(2, 0, 0, 0), R));
    CHECK_THROWS_AS((void)is_primitive(Quaternion::scalar(Rat(1, 2), P), R), std::domain_error);
}

TEST_CASE("non-standard order conductors") {
    // The suborder O_F + 2 O_F Omega has D = 1 and D' = 2.
    auto b0 = i0_basis(P);
    std::array<Quaternion, 4> basis{b0[0], b0[1], b0[2] * Rat(2), b0[3] * Rat(2)};
    OrderDesc R = make_order(P, basis);
    CHECK(R.D == 1);
    CHECK(R.D_prime == 2);
    CHECK(!is_standard_order(R));
    CHECK(!order_coords(b0[2], R).has_value());

    // A non-closed lattice is rejected.
    std::array<Quaternion, 4> bad{b0[0], b0[1] * Rat(1, 2), b0[2], b0[3]};
    CHECK_THROWS_AS((void)make_order(P, bad), std::domain_error);
}

TEST_CASE("norm enumeration") {
    OrderDesc R = order_i0(P);
    auto one = enumerate_norm_elements(R, 1, 0);
    CHECK(one.size() == 2);  // only +-1 when eta = 0
    auto three = enumerate_norm_elements(R, 3, 0);
    CHECK(three.size() == 4);  // +-1 +- sqrt(-2)
    for (const auto& q : three) {
        CHECK(q.norm() == 3);
        CHECK(q.eta().is_zero());
    }
    auto nine = enumerate_norm_elements(R, 9, 0);
    CHECK(nine.size() == 6);
    auto nine_pr = enumerate_norm_elements(R, 9, 0, true);
    CHECK(nine_pr.size() == 4);  // +-3 are imprimitive

    // Deterministic ordering and bound behaviour.
    auto all = enumerate_norm_elements(R, 3, 5);
    CHECK(all.size() > three.size());
    auto again = enumerate_norm_elements(R, 3, 5);
    REQUIRE(all.size() == again.size());
    for (std::size_t i = 0; i < all.size(); ++i) CHECK(all[i] == again[i]);
    for (const auto& q : all) {
        CHECK(q.norm() == 3);
        CHECK(q.eta().norm() <= 5);
        CHECK(order_coords(q, R).has_value());
    }
}

TEST_CASE("units in a field with a = 1 mod 4") {
    // O_{Q(sqrt(-3))} has six units; the enumeration must see the
    // half-integer ring elements.
    AlgebraParams P3(-3, 5);
    OrderDesc R3 = order_i0(P3);
    auto units = enumerate_norm_elements(R3, 1, 0);
    CHECK(units.size() == 6);
    for (const auto& u : units) {
        CHECK(u.norm() == 1);
        CHECK(u.xi().is_integral());
    }
}

TEST_CASE("valuation rigidity at inert primes") {
    OrderDesc R = order_i0(P);
    Quaternion alpha = make(4, 1, 1, 0);  // norm 16 + 2 - 13 = 5
    REQUIRE(alpha.norm() == 5);
    CHECK(prop6_check(alpha, 5, R));

    CHECK_THROWS_AS((void)prop6_check(alpha, 13, R), std::domain_error);  // p | 2abDD'
    CHECK_THROWS_AS((void)prop6_check(alpha, 3, R), std::domain_error);   // (a/3) = +1
    CHECK_THROWS_AS((void)prop6_check(alpha, 7, R), std::domain_error);   // 7 does not divide 5
    Quaternion imprim = alpha * Rat(5);
    CHECK_THROWS_AS((void)prop6_check(imprim, 5, R), std::domain_error);
}

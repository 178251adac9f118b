#pragma once

/**
 * @file itgs.hpp
 * @brief Construction and invariance of closed totally geodesic
 *        surfaces for the norm-one group of the order.
 *
 * Two families are built from Pell equations: vertical half-planes
 * P(t, u) stabilized by gamma = (x + y u sqrt(a)) + y (1 + t sqrt(a)) Omega
 * with x^2 - d y^2 = 1, d = a u^2 + b (1 - a t^2); and half-spheres
 * S(a1, r) stabilized by gamma = X - (q/2) Y sqrt(a) + Y a1 sqrt(a) Omega
 * with q = 1 + b (N(a1) - r^2) and X^2 - d Y^2 = 1 for the rational
 * d = (a/4)(q^2 - 4 b N(a1)).
 */

#include "hyp3.hpp"

namespace qh3 {

/** The invariant boundary line of gamma: {z : Im(b conj(eta) z) = Im(xi)}. */
inline TraceCircle trace_line_of(const Quaternion& g) {
    if (g.eta().is_zero()) throw std::domain_error("trace_line_of: eta must be nonzero");
    QuadElem sqrt_a = QuadElem::sqrt_gen(g.a());
    QuadElem point = g.eta() * sqrt_a * (g.xi().y() / (Rat(g.b()) * g.eta().norm()));
    return TraceCircle::line(point, g.eta());
}

/**
 * Whether gamma maps the vertical half-plane P to itself: its trace
 * line must be the invariant line of gamma and must contain both
 * gamma(inf) and gamma^(-1)(inf).  Requires eta != 0 and Tr != 0.
 */
inline bool halfplane_invariance(const Quaternion& g, const ItgsDesc& P) {
    if (!P.is_halfplane()) throw std::domain_error("halfplane_invariance: not a half-plane");
    if (g.eta().is_zero() || g.trace() == 0)
        throw std::domain_error("halfplane_invariance: requires eta != 0 and Tr != 0");
    if (g.norm() == 0) throw std::domain_error("halfplane_invariance: zero norm");
    if (!(P.trace == trace_line_of(g))) return false;
    Mat2 m = phi_embed(g);
    ProjPoint fwd = mobius(m, ProjPoint::infinity(g.a()));
    Mat2 minv = phi_embed(comatrix(g));
    ProjPoint bwd = mobius(minv, ProjPoint::infinity(g.a()));
    if (fwd.at_infinity || bwd.at_infinity) return false;
    return P.trace.contains(fwd.value) && P.trace.contains(bwd.value);
}

struct SphereMapResult {
    bool holds;
    std::optional<int> epsilon;
};

/**
 * Algebraic criterion for alpha mapping the half-sphere S1 to S2.
 * With rho = r1/r2 (pinned down by the norm relation) the three
 * relations are, for some epsilon = +-1:
 *   b^2 r1^2 N(eta) - N(xi + b eta conj(a1)) = N epsilon / rho^(-1)
 *   b (rho conj(eta) a2 - epsilon eta conj(a1)) = (rho + epsilon) xi
 *   N(xi) - b N(eta) = N
 * A candidate rho is solved from the first relation and must square
 * to r1^2/r2^2.
 */
inline SphereMapResult sphere_map_criterion(const Quaternion& alpha, const ItgsDesc& S1,
                                            const ItgsDesc& S2) {
    if (S1.is_halfplane() || S2.is_halfplane())
        throw std::domain_error("sphere_map_criterion: both surfaces must be half-spheres");
    Rat N = alpha.norm();
    if (N == 0) throw std::domain_error("sphere_map_criterion: zero-norm element");
    const QuadElem &a1 = S1.trace.point, &a2 = S2.trace.point;
    Rat r1_sq = S1.trace.radius_sq, r2_sq = S2.trace.radius_sq;
    if (alpha.eta().is_zero()) {
        // The pole relations degenerate: the action is the rotation
        // z -> (xi/conj(xi)) z, checked directly.
        QuadElem rot = alpha.xi() / alpha.xi().conj();
        bool ok = r1_sq == r2_sq && rot * a1 == a2;
        return {ok, ok ? std::optional<int>(-1) : std::nullopt};
    }
    Rat b(alpha.b());
    const QuadElem &xi = alpha.xi(), &eta = alpha.eta();
    QuadElem shifted = xi + QuadElem::from_rat(b, alpha.a()) * eta * a1.conj();
    Rat lhs48 = b * b * r1_sq * eta.norm() - shifted.norm();
    for (int eps : {1, -1}) {
        Rat rho = lhs48 / (N * Rat(eps));
        if (rho <= 0 || rho * rho != r1_sq / r2_sq) continue;
        QuadElem lhs49 =
            QuadElem::from_rat(b, alpha.a()) * (eta.conj() * a2 * rho - eta * a1.conj() * Rat(eps));
        QuadElem rhs49 = xi * (rho + eps);
        if (lhs49 == rhs49) return {true, eps};
    }
    return {false, std::nullopt};
}

struct Pro7Result {
    Rat q;
    std::optional<QuadElem> zeta;
    std::optional<Rat> X, Y;
    bool vacuous;  // q = 0: the proposition imposes no constraint
    bool ok;
};

/**
 * Necessary conditions for a hyperbolic gamma stabilizing the
 * half-sphere S(a1, r): with q = 1 + b(N(a1) - r^2) nonzero and
 * zeta = a1/q, eta = (conj(xi) - xi) zeta, X = Tr(gamma) is an
 * integer, Y = 1/(2 y_xi) is rational and
 * a (1 - 4 b N(zeta)) = (X^2 - 4) Y^2 > 0.
 */
inline Pro7Result pro7_necessary(const ItgsDesc& S, const Quaternion& g) {
    if (S.is_halfplane()) throw std::domain_error("pro7_necessary: surface must be a half-sphere");
    const QuadElem& a1 = S.trace.point;
    if (a1.is_zero()) throw std::domain_error("pro7_necessary: requires a1 != 0");
    Rat b(g.b());
    Rat q = 1 + b * (a1.norm() - S.trace.radius_sq);
    if (q == 0) return {q, std::nullopt, std::nullopt, std::nullopt, true, true};
    QuadElem zeta = a1 / q;
    Pro7Result out{q, zeta, std::nullopt, std::nullopt, false, true};
    if (!(g.eta() == (g.xi().conj() - g.xi()) * zeta)) out.ok = false;
    Rat X = g.trace();
    out.X = X;
    if (!is_integer(X)) out.ok = false;
    if (g.xi().y() == 0) {
        out.ok = false;
        return out;
    }
    Rat Y = Rat(1) / (2 * g.xi().y());
    out.Y = Y;
    Rat lhs = Rat(g.a()) * (1 - 4 * b * zeta.norm());
    if (!(lhs == (X * X - 4) * Y * Y && lhs > 0)) out.ok = false;
    return out;
}

struct HalfplaneCert {
    Quaternion gamma;
    ItgsDesc surface;
    Int pell_d, pell_x, pell_y;
};

/**
 * The Pell half-plane P(t, u) and its stabilizer.  Requires integers
 * t, u making d = a u^2 + b (1 - a t^2) positive and non-square.
 */
inline HalfplaneCert construct_halfplane(const Int& t, const Int& u, const AlgebraParams& P) {
    if (P.a >= 0) throw std::domain_error("construct_halfplane: requires a < 0");
    Int d = P.a * u * u + P.b * (1 - P.a * t * t);
    if (d <= 0 || is_perfect_square(d))
        throw std::domain_error("construct_halfplane: d must be positive and non-square");
    PellSolution s = pell_solve(d);
    QuadElem sqrt_a = QuadElem::sqrt_gen(P.a);
    QuadElem one(1, 0, P.a);
    QuadElem dir = one + sqrt_a * Rat(t);
    QuadElem xi = QuadElem(Rat(s.x), 0, P.a) + sqrt_a * Rat(s.y * u);
    QuadElem eta = dir * Rat(s.y);
    Quaternion gamma(xi, eta, P.b);
    QuadElem point = sqrt_a * dir * Rat(u, P.b * (1 - P.a * t * t));
    ItgsDesc plane = ItgsDesc::halfplane(point, dir);
    if (gamma.norm() != 1 || classify(gamma).tag != IsomTag::Hyperbolic ||
        !halfplane_invariance(gamma, plane))
        throw std::runtime_error("construct_halfplane: certificate validation failed");
    return {gamma, plane, d, s.x, s.y};
}

struct SphereCert {
    Quaternion gamma;
    ItgsDesc surface;
    Rat pell_d;
    Int pell_x, pell_y;
};

/**
 * The Pell half-sphere S(a1, r) and its stabilizer.  Hypotheses:
 * a1 != 0, N(a1) and r^2 integral at b, and 4 b N(a1) >= q^2 with
 * q = 1 + b (N(a1) - r^2) (strict inequality so d is non-square).
 */
inline SphereCert construct_sphere(const QuadElem& a1, const Rat& r_sq, const AlgebraParams& P) {
    if (P.a >= 0) throw std::domain_error("construct_sphere: requires a < 0");
    if (a1.is_zero()) throw std::domain_error("construct_sphere: requires a1 != 0");
    if (r_sq <= 0) throw std::domain_error("construct_sphere: r^2 must be positive");
    if (ord_p(a1.norm(), P.b) < 0 || ord_p(r_sq, P.b) < 0)
        throw std::domain_error("construct_sphere: N(a1) and r^2 must be integral at b");
    Rat q = 1 + Rat(P.b) * (a1.norm() - r_sq);
    Rat d = Rat(P.a) / 4 * (q * q - 4 * Rat(P.b) * a1.norm());
    if (d <= 0 || is_rat_square(d))
        throw std::domain_error("construct_sphere: d must be positive and non-square");
    RationalPellSolution s = pell_solve_rational(d);
    QuadElem sqrt_a = QuadElem::sqrt_gen(P.a);
    QuadElem xi = QuadElem(Rat(s.x), -q * Rat(s.y) / 2, P.a);
    QuadElem eta = sqrt_a * a1 * Rat(s.y);
    Quaternion gamma(xi, eta, P.b);
    ItgsDesc sphere = ItgsDesc::halfsphere(a1, r_sq);
    if (gamma.norm() != 1 || classify(gamma).tag != IsomTag::Hyperbolic ||
        !sphere_map_criterion(gamma, sphere, sphere).holds ||
        !(image_of_trace(gamma, sphere.trace) == sphere.trace))
        throw std::runtime_error("construct_sphere: certificate validation failed");
    return {gamma, sphere, d, s.x, s.y};
}

struct GreedySet {
    std::vector<Int> kept;
    std::vector<Int> excluded;
};

/**
 * Greedy selection of t in [0, t_max] whose spheres are pairwise
 * non-commensurable: t is excluded exactly when the squarefree kernel
 * of 1 - a t^2 has already appeared (two values with equal kernels
 * have a square product).
 */
inline GreedySet greedy_distinct_set(const Int& a, const Int& t_max) {
    if (a >= 0) throw std::domain_error("greedy_distinct_set: requires a < 0");
    GreedySet out;
    std::set<Int> seen;
    for (Int t = 0; t <= t_max; ++t) {
        Int k = squarefree_kernel(1 - a * t * t);
        if (seen.insert(k).second)
            out.kept.push_back(t);
        else
            out.excluded.push_back(t);
    }
    return out;
}

/** All t in [1, bound] for which 1 - a t^2 is prime. */
inline std::vector<Int> prime_form_search(const Int& a, const Int& bound) {
    if (a >= 0) throw std::domain_error("prime_form_search: requires a < 0");
    std::vector<Int> out;
    for (Int t = 1; t <= bound; ++t)
        if (is_prime(1 - a * t * t)) out.push_back(t);
    return out;
}

} // namespace qh3

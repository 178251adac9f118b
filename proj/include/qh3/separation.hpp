#pragma once

/**
 * @file separation.hpp
 * @brief Separating primes: residue certificates showing that no
 *        element of norm p^n in the order maps one object of a family
 *        (points, geodesics, totally geodesic surfaces) to another.
 *
 * Each kind reduces the mapping equations to a rational quadratic
 * constraint mod p; a prime at which the constraint is a non-residue
 * (and which avoids a finite exclusion set of bad primes) separates.
 * Certificates carry the conditions, the exclusions with reasons, the
 * witness prime found by an ascending Legendre sieve, and an optional
 * brute-force corroboration by exhaustive enumeration at the witness.
 */

#include "itgs.hpp"

#include <variant>

namespace qh3 {

struct ResidueCondition {
    Int value;
    int symbol;
};

struct CorrobReport {
    Int prime;
    Int eta_norm_bound;
    long inspected = 0;
    long hits = 0;
};

struct SeparationCertificate {
    std::string kind;
    std::vector<ResidueCondition> conditions;   // required rational Legendre symbols
    std::optional<QuadElem> ideal_condition;    // geodesics: element required non-square mod P
    std::set<Int> excluded;
    Int witness = 0;
    std::vector<std::string> derivation_log;
    bool heuristic = false;
    std::optional<CorrobReport> corroboration;
};

struct SeparationOptions {
    Int eta_norm_bound = 50;
    std::int64_t prime_search_bound = 1000000;
    std::int64_t small_prime_scan = 50;  // bounded search for the finite exclusion set
    bool corroborate = false;
};

using FamilyObject = std::variant<Point3, ItgsDesc, GeodesicDesc>;

/** Whether alpha maps src onto dst (kinds must match). */
inline bool alpha_maps(const Quaternion& alpha, const FamilyObject& src, const FamilyObject& dst) {
    if (src.index() != dst.index()) return false;
    if (std::holds_alternative<Point3>(src))
        return act(alpha, std::get<Point3>(src)) == std::get<Point3>(dst);
    if (std::holds_alternative<ItgsDesc>(src))
        return image_of_itgs(alpha, std::get<ItgsDesc>(src)) == std::get<ItgsDesc>(dst);
    return image_of_geodesic(alpha, std::get<GeodesicDesc>(src)) == std::get<GeodesicDesc>(dst);
}

/**
 * Exhaustive check at the prime p: inspects every order element of
 * norm p, and every primitive one of norm p^2, with N(eta) bounded,
 * counting those that map the first family member onto any member.
 */
inline CorrobReport corroborate(const std::vector<FamilyObject>& family, const OrderDesc& R,
                                const Int& p, const Int& eta_norm_bound) {
    if (family.empty()) throw std::domain_error("corroborate: empty family");
    CorrobReport rep{p, eta_norm_bound, 0, 0};
    for (int power : {1, 2}) {
        Rat n = power == 1 ? Rat(p) : Rat(p * p);
        for (const auto& alpha : enumerate_norm_elements(R, n, eta_norm_bound, power == 2)) {
            ++rep.inspected;
            for (const auto& obj : family)
                if (alpha_maps(alpha, family[0], obj)) ++rep.hits;
        }
    }
    return rep;
}

namespace detail {

inline std::set<Int> base_exclusions(const OrderDesc& R) {
    std::set<Int> out;
    for (const auto& [p, e] : factorize(2 * R.params.a * R.params.b * R.D * R.D_prime)) {
        (void)e;
        out.insert(p);
    }
    return out;
}

inline void exclude_support(const Rat& q, std::set<Int>& out) {
    if (q == 0) return;
    for (const auto& [p, e] : factorize(num(q) * den(q))) {
        (void)e;
        out.insert(p);
    }
}

/** Bounded search for the finite exclusion set of Prop.-style hits. */
inline void exclude_hits(const std::vector<FamilyObject>& family, const OrderDesc& R,
                         const SeparationOptions& opts, std::set<Int>& excluded,
                         std::vector<std::string>& log) {
    for (std::int64_t p : primes_up_to(opts.small_prime_scan)) {
        if (p == 2 || excluded.count(p)) continue;
        CorrobReport rep = corroborate(family, R, p, opts.eta_norm_bound);
        if (rep.hits > 0) {
            excluded.insert(p);
            log.push_back("excluded " + std::to_string(p) + ": bounded search found " +
                          std::to_string(rep.hits) + " mapping(s)");
        }
    }
}

inline std::string rat_str(const Rat& q) { return render_rat(q); }
inline std::string int_str(const Int& n) { return n.str(); }

} // namespace detail

/**
 * Canonical primitive element of O_F whose direction w satisfies
 * Re(w * conj(z)) = 0: proportional to a*v + u*sqrt(a) for
 * z = u + v*sqrt(a), cleared to coprime integer coordinates with the
 * first nonzero one positive.
 */
inline QuadElem canonical_perp_direction(const QuadElem& z) {
    if (z.is_zero()) throw std::domain_error("canonical_perp_direction: zero input");
    Rat s = Rat(z.a()) * z.y(), t = z.x();
    Int L = lcm(den(s), den(t));
    Int si = num(s * L), ti = num(t * L);
    Int g = gcd(si, ti);
    si /= g;
    ti /= g;
    if (si < 0 || (si == 0 && ti < 0)) { si = -si; ti = -ti; }
    return {Rat(si), Rat(ti), z.a()};
}

struct PointForm {
    QuadElem eta0;
    Int kappa, A, B, C;  // kappa * p^n = A X^2 + B X Y + C Y^2
    Int delta;           // form discriminant B^2 - 4AC < 0
};

/**
 * The integral binary quadratic form controlling elements fixing the
 * point x1 = (z1, t1), in the coordinates (X, Y) of 2 D' xi.  The
 * direction constraint pins eta = m * eta0, and eliminating m from
 * the height and incidence equations leaves
 * kappa p^n = A X^2 + B X Y + C Y^2 with negative discriminant.
 */
inline PointForm point_conditions(const Point3& x1, const OrderDesc& R) {
    const AlgebraParams& P = R.params;
    if (x1.z().is_zero()) throw std::domain_error("point_conditions: z1 = 0 unsupported");
    QuadElem eta0 = canonical_perp_direction(x1.z());
    QuadElem w = eta0.conj() * x1.z();
    Rat w0 = w.x(), w1 = w.y();
    Rat b(P.b), a(P.a);
    Rat dp(R.D_prime);
    Rat g = eta0.norm() * (1 + b * (x1.t_sq() + x1.z().norm()));
    if (g == 0) throw std::domain_error("point_conditions: degenerate configuration");
    Rat scale = b * eta0.norm() / (dp * dp * g * g);
    Rat Ar = Rat(1) / (4 * dp * dp) - scale * w0 * w0;
    Rat Br = -scale * 2 * a * w0 * w1;
    Rat Cr = -a / (4 * dp * dp) - scale * a * a * w1 * w1;
    Int L = common_denominator({Ar, Br, Cr});
    Int Ai = num(Ar * L), Bi = num(Br * L), Ci = num(Cr * L);
    Int G = gcd(gcd(abs_int(Ai), abs_int(Bi)), gcd(abs_int(Ci), L));
    Int kappa = L / G;
    Ai /= G; Bi /= G; Ci /= G;
    Int delta = Bi * Bi - 4 * Ai * Ci;
    if (delta >= 0) throw std::runtime_error("point_conditions: form is not definite");
    return {eta0, kappa, Ai, Bi, Ci, delta};
}

/**
 * Separating prime for a family of points: conditions (a/p) = -1 and
 * (kernel(delta)/p) = -1, excluding the support of 2abDD' and kappa
 * and the primes where a bounded search finds a mapping.
 */
inline SeparationCertificate separation_prime_points(const std::vector<Point3>& points,
                                                     const OrderDesc& R,
                                                     const SeparationOptions& opts) {
    if (points.empty()) throw std::domain_error("separation_prime_points: empty family");
    const AlgebraParams& P = R.params;
    SeparationCertificate cert;
    cert.kind = "points";
    PointForm form = point_conditions(points[0], R);
    cert.derivation_log.push_back("eta direction eta0 = " + render_quad(form.eta0));
    cert.derivation_log.push_back(
        "form " + detail::int_str(form.kappa) + " p^n = " + detail::int_str(form.A) + " X^2 + " +
        detail::int_str(form.B) + " XY + " + detail::int_str(form.C) + " Y^2, discriminant " +
        detail::int_str(form.delta));
    cert.conditions.push_back({P.a, -1});
    cert.conditions.push_back({squarefree_kernel(form.delta), -1});
    cert.excluded = detail::base_exclusions(R);
    detail::exclude_support(Rat(form.kappa), cert.excluded);
    std::vector<FamilyObject> family(points.begin(), points.end());
    detail::exclude_hits(family, R, opts, cert.excluded, cert.derivation_log);
    std::vector<std::pair<Int, int>> targets;
    for (const auto& c : cert.conditions) targets.emplace_back(c.value, c.symbol);
    cert.witness = find_prime_with_symbols(targets, cert.excluded, opts.prime_search_bound);
    if (opts.corroborate)
        cert.corroboration = corroborate(family, R, cert.witness, opts.eta_norm_bound);
    return cert;
}

/**
 * Separating prime for a family of vertical half-planes, the first of
 * which is stabilized by the hyperbolic gamma1: conditions (a/p) = -1
 * and (kernel(Tr^2 - 4)/p) = -1 (Tr^2 - 4 is never a square).
 */
inline SeparationCertificate separation_prime_halfplanes(const std::vector<ItgsDesc>& planes,
                                                         const Quaternion& gamma1,
                                                         const OrderDesc& R,
                                                         const SeparationOptions& opts) {
    if (planes.empty()) throw std::domain_error("separation_prime_halfplanes: empty family");
    for (const auto& s : planes)
        if (!s.is_halfplane())
            throw std::domain_error("separation_prime_halfplanes: family must be half-planes");
    if (gamma1.norm() != 1 || classify(gamma1).tag != IsomTag::Hyperbolic)
        throw std::domain_error("separation_prime_halfplanes: gamma1 must be norm-1 hyperbolic");
    if (!halfplane_invariance(gamma1, planes[0]))
        throw std::domain_error("separation_prime_halfplanes: gamma1 does not stabilize the first plane");
    const AlgebraParams& P = R.params;
    Rat c = gamma1.trace() * gamma1.trace() - 4;
    if (!is_integer(c)) throw std::domain_error("separation_prime_halfplanes: non-integral trace");
    SeparationCertificate cert;
    cert.kind = "halfplanes";
    cert.derivation_log.push_back("c = Tr(gamma1)^2 - 4 = " + detail::rat_str(c));
    cert.conditions.push_back({P.a, -1});
    cert.conditions.push_back({squarefree_kernel(num(c)), -1});
    cert.excluded = detail::base_exclusions(R);
    std::vector<FamilyObject> family(planes.begin(), planes.end());
    detail::exclude_hits(family, R, opts, cert.excluded, cert.derivation_log);
    std::vector<std::pair<Int, int>> targets;
    for (const auto& cd : cert.conditions) targets.emplace_back(cd.value, cd.symbol);
    cert.witness = find_prime_with_symbols(targets, cert.excluded, opts.prime_search_bound);
    if (opts.corroborate)
        cert.corroboration = corroborate(family, R, cert.witness, opts.eta_norm_bound);
    return cert;
}

/**
 * Separating prime for a family of half-spheres, the first stabilized
 * by gamma1.  With q = 1 + b(N(a1) - r^2) nonzero the controlling
 * quantity is a(1 - 4bN(zeta)), zeta = a1/q; when q = 0 it is
 * b N(eta1) for the canonical direction eta1 (non-square since
 * ord_b N(eta1) is even).  The base sphere is globally invariant and
 * is rejected as the separated object.
 */
inline SeparationCertificate separation_prime_spheres(const std::vector<ItgsDesc>& spheres,
                                                      const Quaternion& gamma1, const OrderDesc& R,
                                                      const SeparationOptions& opts) {
    if (spheres.empty()) throw std::domain_error("separation_prime_spheres: empty family");
    for (const auto& s : spheres)
        if (s.is_halfplane())
            throw std::domain_error("separation_prime_spheres: family must be half-spheres");
    const AlgebraParams& P = R.params;
    if (spheres[0] == base_sphere(P))
        throw std::domain_error("separation_prime_spheres: the base sphere cannot be separated");
    if (gamma1.norm() != 1 || classify(gamma1).tag != IsomTag::Hyperbolic)
        throw std::domain_error("separation_prime_spheres: gamma1 must be norm-1 hyperbolic");
    if (!sphere_map_criterion(gamma1, spheres[0], spheres[0]).holds)
        throw std::domain_error("separation_prime_spheres: gamma1 does not stabilize the first sphere");
    const QuadElem& a1 = spheres[0].trace.point;
    Rat r_sq = spheres[0].trace.radius_sq;
    Rat b(P.b);
    Rat q = 1 + b * (a1.norm() - r_sq);
    SeparationCertificate cert;
    cert.kind = "spheres";
    cert.conditions.push_back({P.a, -1});
    cert.excluded = detail::base_exclusions(R);
    detail::exclude_support(r_sq, cert.excluded);
    if (q != 0) {
        QuadElem zeta = a1 / q;
        Rat K = Rat(P.a) * (1 - 4 * b * zeta.norm());
        if (K == 0) throw std::domain_error("separation_prime_spheres: degenerate sphere data");
        cert.derivation_log.push_back("q = " + detail::rat_str(q) +
                                      ", zeta = " + render_quad(zeta) +
                                      ", a(1 - 4bN(zeta)) = " + detail::rat_str(K));
        cert.conditions.push_back({square_analysis(K).kernel, -1});
        detail::exclude_support(1 - 4 * b * zeta.norm(), cert.excluded);
        detail::exclude_support(zeta.norm(), cert.excluded);
        if (!a1.is_zero()) {
            QuadElem eta1 = canonical_perp_direction(a1);
            cert.derivation_log.push_back("eta direction eta1 = " + render_quad(eta1));
            detail::exclude_support(eta1.norm(), cert.excluded);
        }
    } else {
        QuadElem eta1 = canonical_perp_direction(a1);
        Rat K = b * eta1.norm();
        cert.derivation_log.push_back("q = 0, eta direction eta1 = " + render_quad(eta1) +
                                      ", b N(eta1) = " + detail::rat_str(K));
        cert.conditions.push_back({square_analysis(K).kernel, -1});
        detail::exclude_support(eta1.norm(), cert.excluded);
    }
    std::vector<FamilyObject> family(spheres.begin(), spheres.end());
    detail::exclude_hits(family, R, opts, cert.excluded, cert.derivation_log);
    std::vector<std::pair<Int, int>> targets;
    for (const auto& cd : cert.conditions) targets.emplace_back(cd.value, cd.symbol);
    cert.witness = find_prime_with_symbols(targets, cert.excluded, opts.prime_search_bound);
    if (opts.corroborate)
        cert.corroboration = corroborate(family, R, cert.witness, opts.eta_norm_bound);
    return cert;
}

/** Exact squareness test in F = Q(sqrt(a)). */
inline bool quad_is_square(const QuadElem& u) {
    if (u.is_zero()) return true;
    if (u.y() == 0) return is_rat_square(u.x()) || is_rat_square(u.x() / Rat(u.a()));
    Rat root;
    if (!rat_sqrt(u.norm(), root)) return false;
    for (int sgn : {1, -1}) {
        Rat s_sq = (u.x() + Rat(sgn) * root) / 2;
        Rat s;
        if (s_sq <= 0 || !rat_sqrt(s_sq, s)) continue;
        Rat t = u.y() / (2 * s);
        if (s * s + Rat(u.a()) * t * t == u.x()) return true;
    }
    return false;
}

/**
 * Separating prime for a family of geodesics.  The invariant of the
 * first geodesic is the discriminant u of its integral endpoint form;
 * the residue condition is that u is a non-square modulo a prime
 * ideal P over p.  When u is a square in F the residue method is
 * inapplicable and the certificate is flagged heuristic, resting on
 * corroboration alone.
 */
inline SeparationCertificate separation_prime_geodesics(const std::vector<GeodesicDesc>& geodesics,
                                                        const OrderDesc& R,
                                                        const SeparationOptions& opts) {
    if (geodesics.empty()) throw std::domain_error("separation_prime_geodesics: empty family");
    const AlgebraParams& P = R.params;
    const GeodesicDesc& G = geodesics[0];
    Int L = common_denominator({G.A.x(), G.A.y(), G.B.x(), G.B.y(), G.C.x(), G.C.y()});
    QuadElem scaled_disc = G.disc() * Rat(L * L);
    SeparationCertificate cert;
    cert.kind = "geodesics";
    cert.excluded = detail::base_exclusions(R);
    std::vector<FamilyObject> family(geodesics.begin(), geodesics.end());
    detail::exclude_hits(family, R, opts, cert.excluded, cert.derivation_log);

    if (quad_is_square(scaled_disc)) {
        cert.heuristic = true;
        cert.derivation_log.push_back("discriminant " + render_quad(scaled_disc) +
                                      " is a square in F: residue method inapplicable");
        cert.conditions.push_back({P.a, -1});
        cert.witness = find_prime_with_symbols({{P.a, -1}}, cert.excluded, opts.prime_search_bound);
        cert.corroboration = corroborate(family, R, cert.witness, opts.eta_norm_bound);
        return cert;
    }
    cert.ideal_condition = scaled_disc;
    cert.derivation_log.push_back("form discriminant u = " + render_quad(scaled_disc) +
                                  ", required non-square mod P over the witness");
    for (Int p = 3; p <= opts.prime_search_bound; ++p) {
        if (!is_prime(p) || cert.excluded.count(p) || P.a % p == 0) continue;
        bool nonsquare;
        try {
            nonsquare = !is_square_mod_P(scaled_disc, p);
        } catch (const std::domain_error&) {
            continue;  // u lies in P (or P ramifies): the invariant degenerates at p
        }
        if (nonsquare) {
            cert.witness = p;
            cert.derivation_log.push_back("witness " + p.str() + ": (a/p) = " +
                                          std::to_string(legendre(P.a, p)));
            if (opts.corroborate)
                cert.corroboration = corroborate(family, R, cert.witness, opts.eta_norm_bound);
            return cert;
        }
    }
    throw std::runtime_error("separation_prime_geodesics: search bound exhausted");
}

/** Input family for the separating-prime dispatcher. */
struct SeparationConfig {
    std::vector<Point3> points;
    std::vector<GeodesicDesc> geodesics;
    std::vector<ItgsDesc> itgs;
    std::optional<Quaternion> gamma1;  // stabilizer of the first surface
};

/**
 * Dispatch on the populated family (exactly one of points, geodesics,
 * itgs): the first object provides the residue conditions, the other
 * members only enlarge the finite exclusion set via bounded search.
 */
inline SeparationCertificate find_separating_prime(const SeparationConfig& cfg, const OrderDesc& R,
                                                   const SeparationOptions& opts) {
    int populated = (!cfg.points.empty()) + (!cfg.geodesics.empty()) + (!cfg.itgs.empty());
    if (populated != 1)
        throw std::domain_error("find_separating_prime: exactly one family kind must be given");
    if (!cfg.points.empty()) return separation_prime_points(cfg.points, R, opts);
    if (!cfg.geodesics.empty()) return separation_prime_geodesics(cfg.geodesics, R, opts);
    if (!cfg.gamma1)
        throw std::domain_error("find_separating_prime: surface separation needs the stabilizer gamma1");
    if (cfg.itgs[0].is_halfplane())
        return separation_prime_halfplanes(cfg.itgs, *cfg.gamma1, R, opts);
    return separation_prime_spheres(cfg.itgs, *cfg.gamma1, R, opts);
}

} // namespace qh3

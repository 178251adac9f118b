#pragma once

/**
 * @file hyp3.hpp
 * @brief Exact geometry in the upper half-space model of H^3.
 *
 * Points are (z, t) with z in F = Q(sqrt(a)), a < 0, and t > 0.  The
 * height is carried as the exact rational t^2, so orbits of points
 * whose height is an irrational square root (such as the base sphere,
 * where t^2 = 1/b) stay exact: the isometric action multiplies t by a
 * rational factor, hence maps rational t^2 to rational t^2.
 *
 * Matrices act by the Poincare extension of the Moebius action.
 * Isometries are classified by trace^2/det, and totally geodesic
 * objects (vertical half-planes and half-spheres) are described by
 * their boundary traces: lines and circles in C with F-rational data.
 */

#include "quat.hpp"

namespace qh3 {

/** A point of the boundary P^1(F): finite value or infinity. */
struct ProjPoint {
    QuadElem value;
    bool at_infinity = false;

    static ProjPoint infinity(const Int& a) { return {QuadElem(0, 0, a), true}; }
    static ProjPoint finite(QuadElem z) { return {std::move(z), false}; }

    bool operator==(const ProjPoint& o) const {
        if (at_infinity != o.at_infinity) return false;
        return at_infinity || value == o.value;
    }
};

/** Moebius action of a matrix on the boundary. */
inline ProjPoint mobius(const Mat2& m, const ProjPoint& p) {
    if (p.at_infinity) {
        if (m.c.is_zero()) return ProjPoint::infinity(m.a.a());
        return ProjPoint::finite(m.a / m.c);
    }
    QuadElem numr = m.a * p.value + m.b;
    QuadElem denr = m.c * p.value + m.d;
    if (denr.is_zero()) {
        if (numr.is_zero()) throw std::domain_error("mobius: singular matrix");
        return ProjPoint::infinity(m.a.a());
    }
    return ProjPoint::finite(numr / denr);
}

class Point3 {
    QuadElem z_;
    Rat t_sq_;

public:
    Point3(QuadElem z, const Rat& t) : z_(std::move(z)), t_sq_(t * t) {
        if (t <= 0) throw std::domain_error("Point3: t must be positive");
    }

    static Point3 from_t_sq(QuadElem z, const Rat& t_sq) {
        if (t_sq <= 0) throw std::domain_error("Point3: t^2 must be positive");
        Point3 p(std::move(z), 1);
        p.t_sq_ = t_sq;
        return p;
    }

    const QuadElem& z() const { return z_; }
    const Rat& t_sq() const { return t_sq_; }

    /** The height itself, when it happens to be rational. */
    std::optional<Rat> t() const {
        Rat r;
        if (rat_sqrt(t_sq_, r)) return r;
        return std::nullopt;
    }

    bool operator==(const Point3& o) const { return z_ == o.z_ && t_sq_ == o.t_sq_; }
};

/**
 * Poincare extension of a matrix with nonzero rational determinant.
 * Upper triangular: (z, t) -> ((az+b)/d, |a/d| t).  Otherwise with
 * w = cz + d and Q = N(w) + N(c) t^2:
 * (z, t) -> (a/c - (n/c) conj(w)/Q, |n| t / Q).
 */
inline Point3 act(const Mat2& m, const Point3& p) {
    QuadElem detq = m.det();
    if (!detq.is_rational() || detq.is_zero())
        throw std::domain_error("act: determinant must be a nonzero rational");
    Rat n = detq.x();
    if (m.c.is_zero()) {
        if (m.d.is_zero()) throw std::domain_error("act: singular matrix");
        QuadElem s = m.a / m.d;
        return Point3::from_t_sq((m.a * p.z() + m.b) / m.d, s.norm() * p.t_sq());
    }
    QuadElem w = m.c * p.z() + m.d;
    Rat Q = w.norm() + m.c.norm() * p.t_sq();
    QuadElem z2 = m.a / m.c - (w.conj() * (n / Q)) / m.c;
    return Point3::from_t_sq(z2, n * n * p.t_sq() / (Q * Q));
}

inline Point3 act(const Quaternion& q, const Point3& p) {
    if (q.norm() == 0) throw std::domain_error("act: zero-norm quaternion");
    return act(phi_embed(q), p);
}

enum class IsomTag { Identity, Elliptic, Parabolic, Hyperbolic };

inline const char* to_string(IsomTag t) {
    switch (t) {
        case IsomTag::Identity: return "identity";
        case IsomTag::Elliptic: return "elliptic";
        case IsomTag::Parabolic: return "parabolic";
        default: return "hyperbolic";
    }
}

struct IsomClass {
    IsomTag tag;
    Rat trace_sq;  // Tr(gamma)^2 / N(gamma)
};

/**
 * Classification by normalized squared trace: scalars are the
 * identity isometry; otherwise elliptic on [0,4), parabolic at 4 and
 * hyperbolic elsewhere (loxodromics included).
 */
inline IsomClass classify(const Quaternion& q) {
    Rat n = q.norm();
    if (n == 0) throw std::domain_error("classify: zero-norm quaternion");
    Rat r = q.trace() * q.trace() / n;
    if (q.eta().is_zero() && q.xi().is_rational()) return {IsomTag::Identity, r};
    if (r >= 0 && r < 4) return {IsomTag::Elliptic, r};
    if (r == 4) return {IsomTag::Parabolic, r};
    return {IsomTag::Hyperbolic, r};
}

/**
 * A geodesic of H^3 described by the quadratic A z^2 + B z + C whose
 * roots are its boundary endpoints (A = 0 encodes an endpoint at
 * infinity).  Stored projectively, scaled so the first nonzero
 * coefficient is 1; the discriminant B^2 - 4AC must be nonzero.
 */
struct GeodesicDesc {
    QuadElem A, B, C;

    GeodesicDesc(QuadElem A_, QuadElem B_, QuadElem C_)
        : A(std::move(A_)), B(std::move(B_)), C(std::move(C_)) {
        if ((disc()).is_zero())
            throw std::domain_error("GeodesicDesc: zero discriminant (coincident endpoints)");
        QuadElem lead = !A.is_zero() ? A : (!B.is_zero() ? B : C);
        A = A / lead;
        B = B / lead;
        C = C / lead;
    }

    QuadElem disc() const { return B * B - QuadElem(4, 0, B.a()) * A * C; }

    bool operator==(const GeodesicDesc& o) const { return A == o.A && B == o.B && C == o.C; }
};

/**
 * Boundary trace of a totally geodesic surface: a line (point +
 * direction, canonicalized) or a circle (F-center, rational squared
 * radius).
 */
struct TraceCircle {
    enum class Kind { Line, Circle } kind;
    QuadElem point;      // Line: canonical point; Circle: center
    QuadElem direction;  // Line only
    Rat radius_sq = 0;   // Circle only

    static TraceCircle line(const QuadElem& p, const QuadElem& dir) {
        if (dir.is_zero()) throw std::domain_error("TraceCircle: zero direction");
        // Scale so the first nonzero rational coordinate of the
        // direction is 1, then take the foot of the perpendicular
        // from the origin as the canonical point.
        QuadElem d = dir / (dir.x() != 0 ? dir.x() : dir.y());
        QuadElem p0 = p - d * (herm(p, d) / (2 * d.norm()));
        return {Kind::Line, p0, d, 0};
    }

    static TraceCircle circle(const QuadElem& center, const Rat& radius_sq) {
        if (radius_sq <= 0) throw std::domain_error("TraceCircle: radius^2 must be positive");
        return {Kind::Circle, center, QuadElem(0, 0, center.a()), radius_sq};
    }

    bool is_line() const { return kind == Kind::Line; }

    bool contains(const QuadElem& z) const {
        if (is_line()) return cross(z - point, direction) == 0;
        return (z - point).norm() == radius_sq;
    }

    bool operator==(const TraceCircle& o) const {
        if (kind != o.kind) return false;
        if (is_line()) return point == o.point && direction == o.direction;
        return point == o.point && radius_sq == o.radius_sq;
    }
};

/**
 * Totally geodesic surface: a vertical half-plane over a line, or a
 * half-sphere over a circle.
 */
struct ItgsDesc {
    TraceCircle trace;

    bool is_halfplane() const { return trace.is_line(); }

    static ItgsDesc halfplane(const QuadElem& p, const QuadElem& dir) {
        return {TraceCircle::line(p, dir)};
    }
    static ItgsDesc halfsphere(const QuadElem& center, const Rat& radius_sq) {
        return {TraceCircle::circle(center, radius_sq)};
    }

    bool operator==(const ItgsDesc&) const = default;
};

/** The base sphere S0: half-sphere centered at 0 with t^2 + |z|^2 = 1/b. */
inline ItgsDesc base_sphere(const AlgebraParams& P) {
    if (P.b <= 0) throw std::domain_error("base_sphere: requires b > 0");
    return ItgsDesc::halfsphere(QuadElem(0, 0, P.a), Rat(1, P.b));
}

inline bool on_base_sphere(const Point3& p, const AlgebraParams& P) {
    return p.z().norm() + p.t_sq() == Rat(1, P.b);
}

/** Circle or line through three distinct boundary points of F. */
inline TraceCircle circle_through(const QuadElem& z1, const QuadElem& z2, const QuadElem& z3) {
    if (z1 == z2 || z1 == z3 || z2 == z3)
        throw std::domain_error("circle_through: points must be distinct");
    // Center (c0, c1) solves herm(z1 - zk, C) = N(z1) - N(zk) for
    // k = 2, 3, i.e. 2*(w0 c0 - a w1 c1) = N(z1) - N(zk).
    QuadElem u = z1 - z2, v = z1 - z3;
    Rat a(z1.a());
    Rat m00 = 2 * u.x(), m01 = -2 * a * u.y();
    Rat m10 = 2 * v.x(), m11 = -2 * a * v.y();
    Rat r0 = z1.norm() - z2.norm(), r1 = z1.norm() - z3.norm();
    Rat det = m00 * m11 - m01 * m10;
    if (det == 0) return TraceCircle::line(z1, z2 - z1);
    QuadElem center((r0 * m11 - r1 * m01) / det, (m00 * r1 - m10 * r0) / det, z1.a());
    return TraceCircle::circle(center, (z1 - center).norm());
}

/**
 * Image of a boundary trace under the Moebius action of alpha (via
 * the standard embedding).  Everything is exact: the pole and
 * inversion formulas keep centers and directions in F and squared
 * radii rational.
 */
inline TraceCircle image_of_trace(const Quaternion& alpha, const TraceCircle& T) {
    Rat N = alpha.norm();
    if (N == 0) throw std::domain_error("image_of_trace: zero-norm element");
    const Int& a = alpha.a();
    if (alpha.eta().is_zero()) {
        // z -> (xi/conj(xi)) z, a rotation about the origin.
        QuadElem rho = alpha.xi() / alpha.xi().conj();
        if (T.is_line()) return TraceCircle::line(rho * T.point, rho * T.direction);
        return TraceCircle::circle(rho * T.point, T.radius_sq);
    }
    // alpha(z) = A + k/(z - zeta) with pole zeta = -conj(xi)/(b conj(eta)).
    QuadElem bconj_eta = QuadElem::from_rat(Rat(alpha.b()), a) * alpha.eta().conj();
    QuadElem A = alpha.xi() / bconj_eta;
    QuadElem zeta = -(alpha.xi().conj()) / bconj_eta;
    QuadElem k = -QuadElem::from_rat(N, a) / (bconj_eta * bconj_eta);
    QuadElem sqrt_a = QuadElem::sqrt_gen(a);

    if (!T.is_line()) {
        QuadElem c0 = T.point - zeta;  // center relative to the pole
        if (c0.norm() == T.radius_sq) {
            // Pole on the circle: the image is the line
            // A + k * (conj(c0)/(2 N(c0)) + R * sqrt(a) conj(c0)).
            QuadElem v0 = c0.conj() / (2 * c0.norm());
            return TraceCircle::line(A + k * v0, k * sqrt_a * c0.conj());
        }
        if (c0.is_zero()) {
            // Concentric case: the inverse point of the pole is infinity.
            return TraceCircle::circle(A, k.norm() / T.radius_sq);
        }
        // General case: the center is the image of the point inverse
        // to the pole, and the radius follows from |k| = r1 * r2 * ...
        QuadElem zeta_hat = T.point - c0 * (T.radius_sq / c0.norm());
        QuadElem center = A + k / (zeta_hat - zeta);
        Rat denom = c0.norm() - T.radius_sq;
        return TraceCircle::circle(center, k.norm() * T.radius_sq / (denom * denom));
    }

    if (T.contains(zeta)) {
        // Line through the pole maps to the line through A = alpha(inf).
        return TraceCircle::line(A, k / T.direction);
    }
    // Line avoiding the pole maps to a circle through A; fit it
    // through two finite images and the image of infinity.
    QuadElem w1 = A + k / (T.point - zeta);
    QuadElem z2 = T.point + T.direction;
    if (z2 == zeta) z2 = T.point - T.direction;
    QuadElem w2 = A + k / (z2 - zeta);
    return circle_through(w1, w2, A);
}

inline ItgsDesc image_of_itgs(const Quaternion& alpha, const ItgsDesc& S) {
    return {image_of_trace(alpha, S.trace)};
}

/** Image of a geodesic: the endpoint quadratic pulled back along alpha^(-1). */
inline GeodesicDesc image_of_geodesic(const Quaternion& alpha, const GeodesicDesc& G) {
    if (alpha.norm() == 0) throw std::domain_error("image_of_geodesic: zero-norm element");
    Mat2 m = phi_embed(alpha);
    QuadElem two(2, 0, m.a.a());
    QuadElem A2 = G.A * m.d * m.d - G.B * m.d * m.c + G.C * m.c * m.c;
    QuadElem B2 = -two * G.A * m.b * m.d + G.B * (m.a * m.d + m.b * m.c) - two * G.C * m.a * m.c;
    QuadElem C2 = G.A * m.b * m.b - G.B * m.a * m.b + G.C * m.a * m.a;
    return {A2, B2, C2};
}

struct FixedSet {
    enum class Kind { EllipticCircle, EllipticVertical, Boundary, Axis } kind;
    std::optional<QuadElem> center;     // EllipticCircle
    std::optional<Rat> radius_sq;       // EllipticCircle
    std::optional<QuadElem> direction;  // EllipticCircle: the c entry (tilt data)
    std::optional<QuadElem> foot;       // EllipticVertical
    std::optional<ProjPoint> boundary;  // Boundary
    std::optional<GeodesicDesc> axis;   // Axis
};

/**
 * Fixed-point set of a non-scalar matrix with det = 1 and rational
 * trace.  Elliptic: the rotation axis, a geodesic circle of center
 * Tr/(2c) - d/c and squared radius (4 - Tr^2)/(4 N(c)), degenerating
 * to the vertical half-line over b/(d - a) when c = 0.  Parabolic:
 * a single boundary point.  Hyperbolic: the translation axis, with
 * endpoint quadratic c z^2 + (d - a) z - b.
 */
inline FixedSet fixed_set(const Mat2& m) {
    QuadElem detq = m.det();
    if (!(detq.is_rational() && detq.x() == 1))
        throw std::domain_error("fixed_set: determinant must be 1");
    QuadElem tr = m.tr();
    if (!tr.is_rational()) throw std::domain_error("fixed_set: non-rational trace unsupported");
    Rat tr_sq = tr.x() * tr.x();
    if (m.b.is_zero() && m.c.is_zero() && m.a == m.d)
        throw std::domain_error("fixed_set: scalar matrix fixes everything");

    FixedSet out{};
    if (tr_sq >= 0 && tr_sq < 4) {
        if (m.c.is_zero()) {
            out.kind = FixedSet::Kind::EllipticVertical;
            out.foot = m.b / (m.d - m.a);
            return out;
        }
        out.kind = FixedSet::Kind::EllipticCircle;
        out.center = tr / (QuadElem(2, 0, tr.a()) * m.c) - m.d / m.c;
        out.radius_sq = (4 - tr_sq) / (4 * m.c.norm());
        out.direction = m.c;
        return out;
    }
    if (tr_sq == 4) {
        out.kind = FixedSet::Kind::Boundary;
        if (m.c.is_zero())
            out.boundary = ProjPoint::infinity(tr.a());
        else
            out.boundary = ProjPoint::finite(tr / (QuadElem(2, 0, tr.a()) * m.c) - m.d / m.c);
        return out;
    }
    out.kind = FixedSet::Kind::Axis;
    out.axis = GeodesicDesc(m.c, m.d - m.a, -m.b);
    return out;
}

inline FixedSet fixed_set(const Quaternion& q) {
    if (q.norm() != 1) throw std::domain_error("fixed_set: norm must be 1");
    return fixed_set(phi_embed(q));
}

/** Sample points of an elliptic fixed circle, exact via the t^2 channel. */
inline std::vector<Point3> elliptic_fixed_points(const FixedSet& fs, const std::vector<Rat>& params) {
    if (fs.kind != FixedSet::Kind::EllipticCircle)
        throw std::domain_error("elliptic_fixed_points: wrong kind");
    // Endpoints sit at center +- i sqrt(4 - Tr^2)/(2c), so the circle
    // is tilted along sqrt(a) conj(c):
    // {(z0 + sqrt(a) conj(c) v, t): t^2 = r^2 - |a| N(c) v^2}.
    QuadElem c = fs.direction->conj();
    QuadElem sqrt_a = QuadElem::sqrt_gen(c.a());
    Rat absa = c.a() < 0 ? Rat(-c.a()) : Rat(c.a());
    std::vector<Point3> out;
    for (const Rat& v : params) {
        Rat t_sq = *fs.radius_sq - absa * c.norm() * v * v;
        if (t_sq <= 0) continue;
        out.push_back(Point3::from_t_sq(*fs.center + sqrt_a * c * v, t_sq));
    }
    return out;
}

/** Outcome of intersecting two totally geodesic surfaces. */
struct ItgsIntersection {
    enum class Kind { Empty, Geodesic, Equal } kind;
    std::optional<GeodesicDesc> geodesic;
};

/**
 * Intersection of two surfaces: empty, a common geodesic, or equal.
 * Sphere pairs meet over the radical line, sphere/plane pairs over a
 * chord, plane pairs in a vertical line; in every case the endpoint
 * symmetric functions stay in F even when the endpoints do not.
 */
inline ItgsIntersection itgs_intersect(const ItgsDesc& S1, const ItgsDesc& S2) {
    if (S1 == S2) return {ItgsIntersection::Kind::Equal, std::nullopt};
    const Int a = S1.trace.point.a();
    QuadElem one(1, 0, a);

    if (!S1.is_halfplane() && !S2.is_halfplane()) {
        QuadElem w = S2.trace.point - S1.trace.point;
        Rat d2 = w.norm();
        if (d2 == 0) return {ItgsIntersection::Kind::Empty, std::nullopt};  // concentric
        Rat kk = (S1.trace.radius_sq - S2.trace.radius_sq + d2) / 2;
        Rat s2 = (S1.trace.radius_sq - kk * kk / d2) / d2;
        if (s2 <= 0) return {ItgsIntersection::Kind::Empty, std::nullopt};
        QuadElem mid = S1.trace.point + w * (kk / d2);
        return {ItgsIntersection::Kind::Geodesic,
                GeodesicDesc(one, -(mid + mid), mid * mid + (w * w) * s2)};
    }
    if (S1.is_halfplane() != S2.is_halfplane()) {
        const ItgsDesc& plane = S1.is_halfplane() ? S1 : S2;
        const ItgsDesc& sph = S1.is_halfplane() ? S2 : S1;
        QuadElem p = plane.trace.point - sph.trace.point, v = plane.trace.direction;
        // |p + s v|^2 = r^2: quadratic in the real line parameter s.
        Rat qa = v.norm(), qb = herm(p, v), qc = p.norm() - sph.trace.radius_sq;
        Rat disc = qb * qb - 4 * qa * qc;
        if (disc <= 0) return {ItgsIntersection::Kind::Empty, std::nullopt};
        Rat sum = -qb / qa, prod = qc / qa;
        QuadElem z0 = plane.trace.point;
        // Endpoints z0 + s v: symmetric functions from sum and product of s.
        QuadElem esum = z0 + z0 + v * sum;
        QuadElem eprod = z0 * z0 + z0 * v * sum + v * v * prod;
        return {ItgsIntersection::Kind::Geodesic, GeodesicDesc(one, -esum, eprod)};
    }
    // Two vertical half-planes: either parallel or a vertical line.
    QuadElem dv = S1.trace.direction, dw = S2.trace.direction;
    Rat det = cross(dv, dw);
    if (det == 0) return {ItgsIntersection::Kind::Empty, std::nullopt};
    Rat s = cross(S2.trace.point - S1.trace.point, dw) / det;
    QuadElem z0 = S1.trace.point + dv * s;
    return {ItgsIntersection::Kind::Geodesic, GeodesicDesc(QuadElem(0, 0, a), one, -z0)};
}

/**
 * The equivariant projection onto the base sphere:
 * psi(gamma) = (2 xi eta / (1 + 2b N(eta)), t^2 = 1/(b (1 + 2b N(eta))^2)).
 */
inline Point3 psi_map(const Quaternion& g) {
    if (g.norm() != 1) throw std::domain_error("psi_map: norm-1 element required");
    if (g.b() <= 0) throw std::domain_error("psi_map: requires b > 0");
    Rat den1 = 1 + 2 * Rat(g.b()) * g.eta().norm();
    QuadElem z = (g.xi() * g.eta()) * (Rat(2) / den1);
    return Point3::from_t_sq(z, Rat(1) / (Rat(g.b()) * den1 * den1));
}

// --- real quadratic mode (K1s): the invariant of the base plane ---

/**
 * A point of H^3 in the split mode a > 0, where F sits inside R:
 * z = re + i*im with re, im in F, and height t in F, t > 0.
 */
struct K1Point {
    QuadElem re, im;
    QuadElem t;

    K1Point(QuadElem re_, QuadElem im_, QuadElem t_)
        : re(std::move(re_)), im(std::move(im_)), t(std::move(t_)) {
        if (re.a() <= 0) throw std::domain_error("K1Point: requires a > 0");
        if (sign_real(t) <= 0) throw std::domain_error("K1Point: t must be positive");
    }

    bool operator==(const K1Point&) const = default;
};

/** Action of a real matrix (entries in F) on a split-mode point. */
inline K1Point act_k1(const Mat2& m, const K1Point& p) {
    QuadElem n = m.det();
    if (n.is_zero()) throw std::domain_error("act_k1: singular matrix");
    if (m.c.is_zero()) {
        QuadElem s = m.a / m.d;
        QuadElem t2 = s * p.t;
        if (sign_real(t2) < 0) t2 = -t2;
        return {(m.a * p.re + m.b) / m.d, m.a * p.im / m.d, t2};
    }
    QuadElem wr = m.c * p.re + m.d, wi = m.c * p.im;
    QuadElem Q = wr * wr + wi * wi + m.c * m.c * p.t * p.t;
    QuadElem re2 = m.a / m.c - n * wr / (m.c * Q);
    QuadElem im2 = n * wi / (m.c * Q);
    QuadElem t2 = n * p.t / Q;
    if (sign_real(t2) < 0) t2 = -t2;
    return {re2, im2, t2};
}

/**
 * The ratio f = Im(z)/t, constant along orbits of the norm-one group
 * in the split mode (the imaginary part and the height rescale by the
 * same factor).
 */
inline QuadElem f_invariant(const K1Point& p) { return p.im / p.t; }

inline bool f_check(const Mat2& m, const K1Point& p) {
    return f_invariant(act_k1(m, p)) == f_invariant(p);
}

} // namespace qh3

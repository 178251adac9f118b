#pragma once

/**
 * @file quat.hpp
 * @brief The quaternion algebra (a, b / Q) and its orders.
 *
 * Elements are written alpha = xi + eta*Omega with xi, eta in
 * F = Q(sqrt(a)), subject to Omega^2 = b and Omega*z = conj(z)*Omega
 * for z in F.  The standard embedding into M_2(F) sends alpha to
 * [[xi, eta], [b*conj(eta), conj(xi)]], so the reduced norm is
 * N(alpha) = N(xi) - b*N(eta) and the reduced trace is Tr(xi).
 *
 * The standard order is I0 = O_F + O_F*Omega; general orders are
 * described by a rational basis together with the conductor pair
 * (D, D') satisfying D'I c D*I0 c I.
 */

#include "numthy.hpp"

#include <array>

namespace qh3 {

struct AlgebraParams {
    Int a;  // squarefree, not 0 or 1
    Int b;  // nonzero

    AlgebraParams(Int a_, Int b_) : a(std::move(a_)), b(std::move(b_)) {
        if (a == 0 || a == 1 || !is_squarefree(a))
            throw std::domain_error("AlgebraParams: a must be squarefree and not 0 or 1");
        if (b == 0) throw std::domain_error("AlgebraParams: b must be nonzero");
    }

    bool operator==(const AlgebraParams&) const = default;
};

class Quaternion {
    QuadElem xi_, eta_;
    Int b_;

public:
    Quaternion(QuadElem xi, QuadElem eta, Int b)
        : xi_(std::move(xi)), eta_(std::move(eta)), b_(std::move(b)) {
        if (xi_.a() != eta_.a()) throw std::domain_error("Quaternion: xi and eta in different fields");
        if (b_ == 0) throw std::domain_error("Quaternion: b must be nonzero");
    }

    static Quaternion zero(const AlgebraParams& P) {
        return {QuadElem(0, 0, P.a), QuadElem(0, 0, P.a), P.b};
    }
    static Quaternion scalar(const Rat& r, const AlgebraParams& P) {
        return {QuadElem(r, 0, P.a), QuadElem(0, 0, P.a), P.b};
    }
    static Quaternion omega_big(const AlgebraParams& P) {  // Omega
        return {QuadElem(0, 0, P.a), QuadElem(1, 0, P.a), P.b};
    }

    const QuadElem& xi() const { return xi_; }
    const QuadElem& eta() const { return eta_; }
    const Int& a() const { return xi_.a(); }
    const Int& b() const { return b_; }
    AlgebraParams params() const { return {a(), b_}; }

    bool is_zero() const { return xi_.is_zero() && eta_.is_zero(); }

    void check_same(const Quaternion& o) const {
        if (a() != o.a() || b_ != o.b_) throw std::domain_error("Quaternion: mixed algebras");
    }

    Quaternion conj() const { return {xi_.conj(), -eta_, b_}; }
    Rat norm() const { return xi_.norm() - Rat(b_) * eta_.norm(); }
    Rat trace() const { return xi_.trace(); }

    Quaternion operator-() const { return {-xi_, -eta_, b_}; }

    Quaternion operator+(const Quaternion& o) const {
        check_same(o);
        return {xi_ + o.xi_, eta_ + o.eta_, b_};
    }

    Quaternion operator-(const Quaternion& o) const {
        check_same(o);
        return {xi_ - o.xi_, eta_ - o.eta_, b_};
    }

    Quaternion operator*(const Quaternion& o) const {
        check_same(o);
        return {xi_ * o.xi_ + Rat(b_) * (eta_ * o.eta_.conj()),
                xi_ * o.eta_ + eta_ * o.xi_.conj(), b_};
    }

    Quaternion operator*(const Rat& r) const { return {xi_ * r, eta_ * r, b_}; }

    /** Inverse in the algebra; requires nonzero reduced norm. */
    Quaternion inverse() const {
        Rat n = norm();
        if (n == 0) throw std::domain_error("Quaternion: inverse of zero-norm element");
        Quaternion c = conj();
        return {c.xi_ / n, c.eta_ / n, b_};
    }

    bool operator==(const Quaternion& o) const {
        return b_ == o.b_ && xi_ == o.xi_ && eta_ == o.eta_;
    }
};

inline Quaternion operator*(const Rat& r, const Quaternion& q) { return q * r; }

/** Comatrix: the adjugate under the matrix embedding, alpha * comatrix(alpha) = N(alpha). */
inline Quaternion comatrix(const Quaternion& q) { return q.conj(); }

/** 2x2 matrix over F = Q(sqrt(a)). */
struct Mat2 {
    QuadElem a, b, c, d;

    QuadElem det() const { return a * d - b * c; }
    QuadElem tr() const { return a + d; }
};

/** Standard embedding phi(xi + eta*Omega) = [[xi, eta], [b*conj(eta), conj(xi)]]. */
inline Mat2 phi_embed(const Quaternion& q) {
    QuadElem bq = QuadElem::from_rat(Rat(q.b()), q.a());
    return {q.xi(), q.eta(), bq * q.eta().conj(), q.xi().conj()};
}

/**
 * Sufficient division-algebra certificate: b an odd prime with
 * (a/b) = -1 makes (a, b / Q) a division algebra.
 */
inline bool is_division_certified(const AlgebraParams& P) {
    return P.b > 2 && is_prime(P.b) && P.a % P.b != 0 && legendre(P.a, P.b) == -1;
}

struct K2sReport {
    bool member;
    std::vector<std::string> failures;
};

/**
 * Membership in the admissible family K2s: a < 0 squarefree, b an odd
 * prime other than 3, (a/b) = -1, and -1, -3 both squares mod b.
 */
inline K2sReport k2s_check(const AlgebraParams& P) {
    K2sReport r{true, {}};
    auto fail = [&](const std::string& m) {
        r.member = false;
        r.failures.push_back(m);
    };
    if (P.a >= 0) fail("a must be negative");
    if (!(P.b > 2 && is_prime(P.b))) fail("b must be an odd prime");
    if (P.b == 3) fail("b = 3 is excluded");
    if (P.b > 2 && is_prime(P.b) && P.b != 3) {
        if (P.a % P.b == 0 || legendre(P.a, P.b) != -1) fail("(a/b) = -1 required");
        if (legendre(-1, P.b) != 1) fail("-1 must be a square mod b");
        if (legendre(-3, P.b) != 1) fail("-3 must be a square mod b");
    }
    return r;
}

/**
 * Obstruction to torsion-freeness: some of a, -a, -3a is a square
 * modulo b (0 counts as a square).
 */
inline bool elliptic_obstruction(const AlgebraParams& P) {
    if (!(P.b > 2 && is_prime(P.b)) || P.b == 3)
        throw std::domain_error("elliptic_obstruction: b must be an odd prime other than 3");
    for (const Int& v : {P.a, Int(-P.a), Int(-3 * P.a)})
        if (v % P.b == 0 || legendre(v, P.b) == 1) return true;
    return false;
}

// --- rational 4-dimensional linear algebra for order bookkeeping ---

using Vec4 = std::array<Rat, 4>;

/** Coordinates in the rational basis (1, sqrt(a), Omega, sqrt(a)*Omega). */
inline Vec4 coords(const Quaternion& q) {
    return {q.xi().x(), q.xi().y(), q.eta().x(), q.eta().y()};
}

inline Quaternion from_coords(const Vec4& v, const AlgebraParams& P) {
    return {QuadElem(v[0], v[1], P.a), QuadElem(v[2], v[3], P.a), P.b};
}

struct Mat4 {
    std::array<Vec4, 4> col;  // column-major: col[j] is the image of e_j

    static Mat4 from_columns(const std::array<Vec4, 4>& c) { return {c}; }

    Rat at(int i, int j) const { return col[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]; }
};

/** Solves M x = rhs by Gaussian elimination; throws if M is singular. */
inline Vec4 solve4(const Mat4& M, const Vec4& rhs) {
    std::array<std::array<Rat, 5>, 4> t;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) t[i][j] = M.at(i, j);
        t[i][4] = rhs[static_cast<std::size_t>(i)];
    }
    for (int c = 0; c < 4; ++c) {
        int piv = -1;
        for (int r = c; r < 4; ++r)
            if (t[r][c] != 0) { piv = r; break; }
        if (piv < 0) throw std::domain_error("solve4: singular matrix");
        std::swap(t[c], t[piv]);
        for (int r = 0; r < 4; ++r) {
            if (r == c || t[r][c] == 0) continue;
            Rat f = t[r][c] / t[c][c];
            for (int j = c; j < 5; ++j) t[r][j] -= f * t[c][j];
        }
    }
    Vec4 x;
    for (int i = 0; i < 4; ++i) x[static_cast<std::size_t>(i)] = t[i][4] / t[i][i];
    return x;
}

inline Mat4 invert4(const Mat4& M) {
    Mat4 inv{};
    for (int j = 0; j < 4; ++j) {
        Vec4 e{0, 0, 0, 0};
        e[static_cast<std::size_t>(j)] = 1;
        inv.col[static_cast<std::size_t>(j)] = solve4(M, e);
    }
    return inv;
}

inline Rat det4(const Mat4& M) {
    std::array<std::array<Rat, 4>, 4> t;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) t[i][j] = M.at(i, j);
    Rat d = 1;
    for (int c = 0; c < 4; ++c) {
        int piv = -1;
        for (int r = c; r < 4; ++r)
            if (t[r][c] != 0) { piv = r; break; }
        if (piv < 0) return 0;
        if (piv != c) { std::swap(t[c], t[piv]); d = -d; }
        d *= t[c][c];
        for (int r = c + 1; r < 4; ++r) {
            if (t[r][c] == 0) continue;
            Rat f = t[r][c] / t[c][c];
            for (int j = c; j < 4; ++j) t[r][j] -= f * t[c][j];
        }
    }
    return d;
}

/** Integral generator of O_F: sqrt(a), or (1+sqrt(a))/2 when a = 1 mod 4. */
inline QuadElem field_integral_generator(const Int& a) {
    if (mod4(a) == 1) return {Rat(1, 2), Rat(1, 2), a};
    return QuadElem::sqrt_gen(a);
}

struct OrderDesc {
    AlgebraParams params;
    std::array<Quaternion, 4> basis;
    Int D;        // conductor: lcm of denominators of the I0-coordinate matrix
    Int D_prime;  // coconductor: least D' > 0 with D' (M/D)^-1 ... integral
};

/** The standard order I0 = O_F + O_F*Omega. */
inline std::array<Quaternion, 4> i0_basis(const AlgebraParams& P) {
    QuadElem one(1, 0, P.a), zero(0, 0, P.a), tau = field_integral_generator(P.a);
    return {Quaternion(one, zero, P.b), Quaternion(tau, zero, P.b),
            Quaternion(zero, one, P.b), Quaternion(zero, tau, P.b)};
}

namespace detail {

inline Mat4 i0_coord_matrix(const std::array<Quaternion, 4>& basis, const AlgebraParams& P) {
    // Columns: coordinates of the basis elements in the I0 basis
    // {1, tau, Omega, tau*Omega}, obtained by solving against the I0
    // basis expressed in the ambient rational coordinates.
    auto i0 = i0_basis(P);
    Mat4 i0m = Mat4::from_columns({coords(i0[0]), coords(i0[1]), coords(i0[2]), coords(i0[3])});
    Mat4 out{};
    for (std::size_t j = 0; j < 4; ++j) out.col[j] = solve4(i0m, coords(basis[j]));
    return out;
}

inline Int lcm_denominators(const Mat4& M) {
    Int l = 1;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) l = lcm(l, den(M.at(i, j)));
    return l;
}

} // namespace detail

/** Integer coordinates of q in the order basis, if q lies in the order. */
inline std::optional<std::array<Int, 4>> order_coords(const Quaternion& q, const OrderDesc& R) {
    Mat4 B = Mat4::from_columns(
        {coords(R.basis[0]), coords(R.basis[1]), coords(R.basis[2]), coords(R.basis[3])});
    Vec4 x = solve4(B, coords(q));
    std::array<Int, 4> out;
    for (std::size_t i = 0; i < 4; ++i) {
        if (!is_integer(x[i])) return std::nullopt;
        out[i] = num(x[i]);
    }
    return out;
}

/**
 * Validates that the basis spans an order (unital, closed under
 * multiplication, integral norms and traces) and computes the
 * conductor pair (D, D').
 */
inline OrderDesc make_order(const AlgebraParams& P, const std::array<Quaternion, 4>& basis) {
    Mat4 M = detail::i0_coord_matrix(basis, P);
    if (det4(M) == 0) throw std::domain_error("make_order: basis is not full rank");
    OrderDesc R{P, basis, 1, 1};
    auto check_member = [&](const Quaternion& q, const char* what) {
        if (!order_coords(q, R).has_value())
            throw std::domain_error(std::string("make_order: ") + what);
    };
    check_member(Quaternion::scalar(1, P), "1 does not lie in the lattice");
    for (const auto& e : basis) {
        if (!is_integer(e.trace()) || !is_integer(e.norm()))
            throw std::domain_error("make_order: basis element with non-integral trace or norm");
        for (const auto& f : basis) check_member(e * f, "lattice is not closed under multiplication");
    }
    R.D = detail::lcm_denominators(M);
    Mat4 Minv = invert4(M);
    Int dp = 1;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) dp = lcm(dp, den(Minv.at(i, j) / Rat(R.D)));
    R.D_prime = dp;
    return R;
}

inline OrderDesc order_i0(const AlgebraParams& P) { return make_order(P, i0_basis(P)); }

inline bool is_standard_order(const OrderDesc& R) {
    return R.basis == i0_basis(R.params);
}

/** Primitivity in an order: integer coordinates with content 1. */
inline bool is_primitive(const Quaternion& q, const OrderDesc& R) {
    auto c = order_coords(q, R);
    if (!c) throw std::domain_error("is_primitive: element not in the order");
    Int g = 0;
    for (const auto& v : *c) g = gcd(g, v);
    return g == 1;
}

namespace detail {

/** All w in O_F (a < 0) with N(w) = value, as (u, v) with w = u + v*tau. */
inline std::vector<QuadElem> field_elements_of_norm(const Int& a, const Rat& value) {
    if (a >= 0) throw std::domain_error("field_elements_of_norm: requires a < 0");
    std::vector<QuadElem> out;
    if (value < 0) return out;
    if (!is_integer(value)) return out;
    Int n = num(value);
    QuadElem tau = field_integral_generator(a);
    Int A = -a;
    if (mod4(a) == 1) {
        // N(u + v*tau) = ((2u+v)^2 + |a| v^2) / 4
        Int vmax = isqrt(4 * n / A);
        for (Int v = -vmax; v <= vmax; ++v) {
            Int rem = 4 * n - A * v * v;
            if (rem < 0 || !is_perfect_square(rem)) continue;
            Int s = isqrt(rem);  // s = |2u + v|
            for (int sgn : {1, -1}) {
                Int t = sgn * s - v;
                if (t % 2 != 0) continue;
                out.push_back(QuadElem(Rat(t / 2), 0, a) + QuadElem(Rat(v), 0, a) * tau);
                if (s == 0) break;
            }
        }
    } else {
        Int vmax = isqrt(n / A);
        for (Int v = -vmax; v <= vmax; ++v) {
            Int rem = n - A * v * v;
            if (!is_perfect_square(rem)) continue;
            Int u = isqrt(rem);
            out.push_back(QuadElem(Rat(u), Rat(v), a));
            if (u != 0) out.push_back(QuadElem(Rat(-u), Rat(v), a));
        }
    }
    return out;
}

} // namespace detail

/**
 * All alpha in the standard order with N(alpha) = n and N(eta) bounded
 * by eta_norm_bound, optionally restricted to primitive elements.
 * Requires a < 0 and b > 0 so both coordinate norms are definite.
 */
inline std::vector<Quaternion> enumerate_norm_elements(const OrderDesc& R, const Rat& n,
                                                       const Int& eta_norm_bound,
                                                       bool primitive_only = false) {
    if (!is_standard_order(R))
        throw std::domain_error("enumerate_norm_elements: only the standard order is supported");
    const AlgebraParams P = R.params;
    if (P.a >= 0 || P.b <= 0)
        throw std::domain_error("enumerate_norm_elements: requires a < 0 and b > 0");
    std::vector<Quaternion> out;
    for (Int eN = 0; eN <= eta_norm_bound; ++eN) {
        auto etas = detail::field_elements_of_norm(P.a, Rat(eN));
        if (etas.empty()) continue;
        Rat xiN = n + Rat(P.b) * Rat(eN);
        auto xis = detail::field_elements_of_norm(P.a, xiN);
        for (const auto& xi : xis)
            for (const auto& eta : etas) {
                Quaternion q(xi, eta, P.b);
                if (primitive_only && !is_primitive(q, R)) continue;
                out.push_back(std::move(q));
            }
    }
    std::sort(out.begin(), out.end(), [](const Quaternion& l, const Quaternion& r) {
        auto lc = coords(l), rc = coords(r);
        return lc < rc;
    });
    return out;
}

/**
 * Valuation rigidity at an inert prime: for p with ord_p(2abDD') = 0,
 * (a/p) = -1, alpha primitive in the order and p | N(alpha), both
 * N(xi) and N(eta) must be units at p.  Preconditions are validated;
 * the return value is the truth of the conclusion.
 */
inline bool prop6_check(const Quaternion& alpha, const Int& p, const OrderDesc& R) {
    const AlgebraParams P = R.params;
    if (ord_p(Rat(2 * P.a * P.b * R.D * R.D_prime), p) != 0)
        throw std::domain_error("prop6_check: p divides 2abDD'");
    if (legendre(P.a, p) != -1) throw std::domain_error("prop6_check: (a/p) = -1 required");
    if (alpha.norm() == 0 || ord_p(alpha.norm(), p) < 1)
        throw std::domain_error("prop6_check: p must divide N(alpha)");
    if (!is_primitive(alpha, R)) throw std::domain_error("prop6_check: alpha must be primitive");
    Rat nxi = alpha.xi().norm(), neta = alpha.eta().norm();
    if (nxi == 0 || neta == 0) return false;
    return ord_p(nxi, p) == 0 && ord_p(neta, p) == 0;
}

} // namespace qh3

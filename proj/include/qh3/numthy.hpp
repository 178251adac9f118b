#pragma once

/**
 * @file numthy.hpp
 * @brief Rational number theory: Legendre symbols, prime splitting in
 *        quadratic fields, squares modulo prime ideals and Pell
 *        equations (including rational right-hand sides).
 */

#include "quad.hpp"

#include <cassert>
#include <functional>
#include <set>

namespace qh3 {

/** Jacobi symbol (n/m) for odd positive m. */
inline int jacobi(Int n, Int m) {
    if (m <= 0 || m % 2 == 0) throw std::domain_error("jacobi: modulus must be odd and positive");
    n = ((n % m) + m) % m;
    int t = 1;
    while (n != 0) {
        while (n % 2 == 0) {
            n /= 2;
            Int r = m % 8;
            if (r == 3 || r == 5) t = -t;
        }
        std::swap(n, m);
        if (n % 4 == 3 && m % 4 == 3) t = -t;
        n %= m;
    }
    return m == 1 ? t : 0;
}

/**
 * Legendre symbol (n/p), p an odd prime.  The Jacobi evaluation is the
 * fast path; in debug builds every call is cross-checked against the
 * Euler criterion n^((p-1)/2) mod p.
 */
inline int legendre(const Int& n, const Int& p) {
    if (p == 2 || !is_prime(p)) throw std::domain_error("legendre: modulus must be an odd prime");
    int j = jacobi(n, p);
#ifndef NDEBUG
    Int e = powmod(n, (p - 1) / 2, p);
    int euler = e == 0 ? 0 : (e == 1 ? 1 : -1);
    assert(j == euler && "legendre: Jacobi and Euler disagree");
#endif
    return j;
}

/**
 * 2-independence of nonzero rationals: their square classes (including
 * the sign coordinate) are linearly independent over GF(2).  Decided
 * by Gaussian elimination on the exponent vectors of the squarefree
 * kernels.
 */
inline bool two_independent(const std::vector<Rat>& values) {
    std::vector<std::set<Int>> rows;  // set of coordinates with odd exponent; -1 is the sign bit
    for (const auto& q : values) {
        if (q == 0) throw std::domain_error("two_independent: zero value");
        Int k = squarefree_kernel(num(q) * den(q));
        std::set<Int> row;
        if (k < 0) { row.insert(-1); k = -k; }
        for (const auto& [p, e] : factorize(k)) {
            (void)e;
            row.insert(p);
        }
        rows.push_back(std::move(row));
    }
    // XOR elimination keyed by leading coordinate: independent iff
    // every row survives reduction with a nonzero remainder.
    std::map<Int, std::set<Int>> basis;
    for (auto row : rows) {
        while (!row.empty() && basis.count(*row.begin())) {
            const auto& b = basis[*row.begin()];
            std::set<Int> sym;
            std::set_symmetric_difference(row.begin(), row.end(), b.begin(), b.end(),
                                          std::inserter(sym, sym.end()));
            row = std::move(sym);
        }
        if (row.empty()) return false;
        basis[*row.begin()] = std::move(row);
    }
    return true;
}

/**
 * Smallest odd prime p not in `exclude` with legendre(v, p) = s for
 * every target (v, s).  Throws if the ascending search passes `bound`.
 */
inline Int find_prime_with_symbols(const std::vector<std::pair<Int, int>>& targets,
                                   const std::set<Int>& exclude, std::int64_t bound = 1000000) {
    for (Int p = 3; p <= bound; ++p) {
        if (!is_prime(p) || exclude.count(p)) continue;
        bool ok = true;
        for (const auto& [v, s] : targets)
            if (legendre(v, p) != s) { ok = false; break; }
        if (ok) return p;
    }
    throw std::runtime_error("find_prime_with_symbols: search bound exhausted");
}

enum class SplitType { Split, Inert, Ramified };

inline const char* to_string(SplitType t) {
    switch (t) {
        case SplitType::Split: return "split";
        case SplitType::Inert: return "inert";
        default: return "ramified";
    }
}

/**
 * Splitting of the rational prime p in Q(sqrt(a)), a squarefree.
 * Odd p: ramified iff p | a, else split iff (a/p) = +1.  p = 2 is
 * read off the minimal polynomial of the integral generator: ramified
 * unless a = 1 mod 4, then split iff a = 1 mod 8.
 */
inline SplitType split_type(const Int& p, const Int& a) {
    if (!is_prime(p)) throw std::domain_error("split_type: p must be prime");
    if (a == 0 || a == 1 || !is_squarefree(a)) throw std::domain_error("split_type: bad field parameter");
    if (p == 2) {
        Int r = ((a % 8) + 8) % 8;
        if (r == 1) return SplitType::Split;
        if (r == 5) return SplitType::Inert;
        return SplitType::Ramified;
    }
    if (a % p == 0) return SplitType::Ramified;
    return legendre(a, p) == 1 ? SplitType::Split : SplitType::Inert;
}

/** Tonelli-Shanks square root mod an odd prime; requires (n/p) = 1. */
inline Int sqrt_mod(const Int& n0, const Int& p) {
    Int n = ((n0 % p) + p) % p;
    if (n == 0) return 0;
    if (legendre(n, p) != 1) throw std::domain_error("sqrt_mod: non-residue");
    if (p % 4 == 3) return powmod(n, (p + 1) / 4, p);
    Int q = p - 1, s = 0;
    while (q % 2 == 0) { q /= 2; ++s; }
    Int z = 2;
    while (legendre(z, p) != -1) ++z;
    Int m = s, c = powmod(z, q, p), t = powmod(n, q, p), r = powmod(n, (q + 1) / 2, p);
    while (t != 1) {
        Int i = 0, tt = t;
        while (tt != 1) { tt = tt * tt % p; ++i; }
        Int b = powmod(c, Int(1) << static_cast<unsigned>(m - i - 1), p);
        m = i;
        c = b * b % p;
        t = t * c % p;
        r = r * b % p;
    }
    return r;
}

namespace detail {

// Element of F_p[w]/(w^2 - a) as u + v*w with 0 <= u, v < p.
struct Fp2 {
    Int u, v;
};

inline Fp2 fp2_mul(const Fp2& l, const Fp2& r, const Int& p, const Int& a) {
    Int am = ((a % p) + p) % p;
    return {(l.u * r.u + am * l.v % p * r.v) % p, (l.u * r.v + l.v * r.u) % p};
}

inline Fp2 fp2_pow(Fp2 b, Int e, const Int& p, const Int& a) {
    Fp2 r{1, 0};
    while (e > 0) {
        if (e % 2 == 1) r = fp2_mul(r, b, p, a);
        b = fp2_mul(b, b, p, a);
        e /= 2;
    }
    return r;
}

} // namespace detail

/**
 * Whether an integral beta in Q(sqrt(a)) is a nonzero square modulo a
 * prime ideal P over the odd unramified prime p.  Split p: reduce via
 * sqrt(a) -> s in F_p and take the Legendre symbol.  Inert p: Euler
 * criterion beta^((p^2-1)/2) in F_{p^2}.  Throws if beta lies in P.
 */
inline bool is_square_mod_P(const QuadElem& beta, const Int& p) {
    const Int& a = beta.a();
    if (p == 2) throw std::domain_error("is_square_mod_P: p = 2 unsupported");
    if (!beta.is_integral()) throw std::domain_error("is_square_mod_P: beta not integral");
    SplitType st = split_type(p, a);
    if (st == SplitType::Ramified) throw std::domain_error("is_square_mod_P: p ramifies");
    // Write beta = (X + Y*sqrt(a))/2 with X, Y integers and halve mod p.
    Int X = num(2 * beta.x()), Y = num(2 * beta.y());
    Int inv2 = powmod(2, p - 2, p);
    if (st == SplitType::Split) {
        Int s = sqrt_mod(a, p);
        Int r = ((X + Y * s) % p + p) % p * inv2 % p;
        if (r == 0) throw std::domain_error("is_square_mod_P: beta lies in P");
        return legendre(r, p) == 1;
    }
    detail::Fp2 b{((X % p) + p) % p * inv2 % p, ((Y % p) + p) % p * inv2 % p};
    if (b.u == 0 && b.v == 0) throw std::domain_error("is_square_mod_P: beta lies in P");
    detail::Fp2 e = detail::fp2_pow(b, (p * p - 1) / 2, p, a);
    if (e.v != 0 || (e.u != 1 && e.u != p - 1))
        throw std::runtime_error("is_square_mod_P: Euler value not +-1");
    return e.u == 1;
}

struct PellSolution {
    Int x, y;
};

/**
 * Fundamental solution of x^2 - D y^2 = 1 for D > 0 non-square, via
 * the continued fraction expansion of sqrt(D): convergents h/k are
 * tested until h^2 - D k^2 = 1.
 */
inline PellSolution pell_solve(const Int& D) {
    if (D <= 0 || is_perfect_square(D)) throw std::domain_error("pell_solve: D must be positive and non-square");
    Int a0 = isqrt(D);
    Int m = 0, d = 1, a = a0;
    Int h_prev = 1, h = a0, k_prev = 0, k = 1;
    while (h * h - D * k * k != 1) {
        m = d * a - m;
        d = (D - m * m) / d;
        a = (a0 + m) / d;
        Int h_next = a * h + h_prev, k_next = a * k + k_prev;
        h_prev = h; h = h_next;
        k_prev = k; k = k_next;
    }
    return {h, k};
}

struct RationalPellSolution {
    Int x, y;       // minimal positive integers with x^2 - d y^2 = 1
    Int d_effective; // the integer Pell parameter the problem reduces to
};

/**
 * Minimal positive integer solution of X^2 - d Y^2 = 1 for a positive
 * non-square rational d = p/q in lowest terms.  Writing q = m^2 k with
 * k squarefree, integrality forces mk | Y, and Y = mk*y turns the
 * equation into y's Pell equation for D = pk.
 */
inline RationalPellSolution pell_solve_rational(const Rat& d) {
    if (d <= 0 || is_rat_square(d)) throw std::domain_error("pell_solve_rational: d must be positive and non-square");
    Int p = num(d), q = den(d);
    Int k = squarefree_kernel(q);
    Int m = isqrt(q / k);
    Int D = p * k;
    PellSolution s = pell_solve(D);
    return {s.x, m * k * s.y, D};
}

/** Fraction of odd primes up to `bound` with the given splitting in Q(sqrt(a)). */
inline Rat density_estimate(const Int& a, SplitType which, std::int64_t bound) {
    Int hit = 0, total = 0;
    for (std::int64_t p : primes_up_to(bound)) {
        if (p == 2) continue;
        ++total;
        if (split_type(p, a) == which) ++hit;
    }
    if (total == 0) throw std::domain_error("density_estimate: no odd primes below bound");
    return Rat(hit, total);
}

} // namespace qh3

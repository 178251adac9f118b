#pragma once

/**
 * @file exact.hpp
 * @brief Exact integer and rational arithmetic helpers.
 *
 * All computation in this library is exact: integers are arbitrary
 * precision (boost cpp_int) and rationals are always in lowest terms
 * with positive denominator (boost cpp_rational maintains both
 * invariants eagerly).
 *
 * On top of the boost types this header provides the number-theoretic
 * utilities the rest of the library needs: primality testing,
 * deterministic factorization at desk scale (trial division plus a
 * Pollard-Brent fallback), squarefree kernels, p-adic valuations and
 * exact square detection for rationals.
 */

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/miller_rabin.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qh3 {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int num(const Rat& q) { return numerator(q); }
inline Int den(const Rat& q) { return denominator(q); }

inline bool is_integer(const Rat& q) { return den(q) == 1; }

inline int sign(const Int& n) { return n.sign(); }
inline int sign(const Rat& q) { return num(q).sign(); }

inline Int abs_int(const Int& n) { return n < 0 ? Int(-n) : n; }

/** Floor of the square root of a non-negative integer. */
inline Int isqrt(const Int& n) {
    if (n < 0) throw std::domain_error("isqrt: negative argument");
    return sqrt(n);
}

inline bool is_perfect_square(const Int& n) {
    if (n < 0) return false;
    Int r = sqrt(n);
    return r * r == n;
}

/** Exact square test for rationals; on success also yields the root. */
inline bool rat_sqrt(const Rat& q, Rat& root) {
    if (q < 0) return false;
    Int rn = sqrt(num(q)), rd = sqrt(den(q));
    if (rn * rn != num(q) || rd * rd != den(q)) return false;
    root = Rat(rn, rd);
    return true;
}

inline bool is_rat_square(const Rat& q) {
    Rat r;
    return rat_sqrt(q, r);
}

/** Deterministic-at-desk-scale primality test. */
inline bool is_prime(const Int& n) {
    if (n < 2) return false;
    for (int p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    return boost::multiprecision::miller_rabin_test(n, 32);
}

namespace detail {

inline Int pollard_brent(const Int& n) {
    // Brent's cycle variant of Pollard rho with a fixed seed schedule;
    // callers guarantee n is odd, composite and not a perfect power of
    // a small prime, so this always terminates at desk scale.
    for (Int c = 1; ; ++c) {
        Int x = 2, y = 2, d = 1;
        auto f = [&](const Int& v) { return (v * v + c) % n; };
        while (d == 1) {
            x = f(x);
            y = f(f(y));
            d = gcd(abs_int(x - y), n);
        }
        if (d != n) return d;
    }
}

inline void factor_into(Int n, std::map<Int, int>& out) {
    if (n <= 1) return;
    if (is_prime(n)) {
        ++out[n];
        return;
    }
    Int d = pollard_brent(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

} // namespace detail

/** Prime factorization of a nonzero integer (sign discarded). */
inline std::vector<std::pair<Int, int>> factorize(Int n) {
    if (n == 0) throw std::domain_error("factorize: zero argument");
    n = abs_int(n);
    std::map<Int, int> fac;
    for (int p : {2, 3, 5, 7, 11, 13}) {
        while (n % p == 0) { ++fac[p]; n /= p; }
    }
    for (Int p = 17; p * p <= n && p < 100000; p += 2) {
        while (n % p == 0) { ++fac[p]; n /= p; }
    }
    detail::factor_into(n, fac);
    return {fac.begin(), fac.end()};
}

/** Squarefree kernel k of n = k*m^2, preserving the sign of n. */
inline Int squarefree_kernel(const Int& n) {
    if (n == 0) throw std::domain_error("squarefree_kernel: zero argument");
    Int k = n < 0 ? -1 : 1;
    for (const auto& [p, e] : factorize(n))
        if (e % 2) k *= p;
    return k;
}

inline bool is_squarefree(const Int& n) {
    return squarefree_kernel(n) == n;
}

/**
 * Square analysis of a nonzero rational: q is a square in Q exactly
 * when its squarefree kernel is 1.  The kernel of n/d (lowest terms)
 * equals the kernel of n*d, since n/d = (n*d)/d^2.
 */
struct SquareAnalysis {
    bool is_square;
    Int kernel;
};

inline SquareAnalysis square_analysis(const Rat& q) {
    if (q == 0) throw std::domain_error("square_analysis: zero argument");
    Int k = squarefree_kernel(num(q) * den(q));
    return {k == 1, k};
}

/** p-adic valuation of a nonzero rational (p a prime). */
inline Int ord_p(const Rat& q, const Int& p) {
    if (q == 0) throw std::domain_error("ord_p: zero argument");
    if (!is_prime(p)) throw std::domain_error("ord_p: modulus is not prime");
    Int v = 0, n = num(q), d = den(q);
    while (n % p == 0) { ++v; n /= p; }
    while (d % p == 0) { --v; d /= p; }
    return v;
}

/** Ascending list of primes up to and including `bound` (sieve). */
inline std::vector<std::int64_t> primes_up_to(std::int64_t bound) {
    std::vector<std::int64_t> out;
    if (bound < 2) return out;
    std::vector<bool> comp(static_cast<std::size_t>(bound) + 1, false);
    for (std::int64_t i = 2; i <= bound; ++i) {
        if (comp[static_cast<std::size_t>(i)]) continue;
        out.push_back(i);
        for (std::int64_t j = i * i; j <= bound; j += i)
            comp[static_cast<std::size_t>(j)] = true;
    }
    return out;
}

inline Int powmod(Int base, Int exp, const Int& mod) {
    return boost::multiprecision::powm(((base % mod) + mod) % mod, exp, mod);
}

/** lcm of the denominators of a list of rationals. */
inline Int common_denominator(const std::vector<Rat>& qs) {
    Int l = 1;
    for (const auto& q : qs) l = lcm(l, den(q));
    return l;
}

} // namespace qh3

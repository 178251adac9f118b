#pragma once

/**
 * @file quad.hpp
 * @brief Exact arithmetic in quadratic fields F = Q(sqrt(a)).
 *
 * A QuadElem is x + y*sqrt(a) with x, y rational and a a squarefree
 * integer other than 0 and 1.  The field parameter travels with each
 * value and two elements combine only when their parameters agree;
 * mixing fields is a domain error, not a coercion.
 *
 * For a < 0 the field embeds in C and conjugation is complex
 * conjugation; for a > 0 it embeds in R and conjugation is the Galois
 * involution.  Either way conj(x + y*sqrt(a)) = x - y*sqrt(a),
 * norm = x^2 - a*y^2 and trace = 2x.
 */

#include "exact.hpp"

#include <optional>
#include <sstream>
#include <string>

namespace qh3 {

inline Int mod4(const Int& a) { return ((a % 4) + 4) % 4; }

class QuadElem {
    Rat x_;  // rational part
    Rat y_;  // coefficient of sqrt(a)
    Int a_;  // squarefree field parameter, not 0 or 1

    void check_param() const {
        if (a_ == 0 || a_ == 1 || !is_squarefree(a_))
            throw std::domain_error("QuadElem: parameter must be squarefree and not 0 or 1");
    }

    void check_same(const QuadElem& o) const {
        if (a_ != o.a_)
            throw std::domain_error("QuadElem: mixed field parameters");
    }

public:
    QuadElem(Rat x, Rat y, Int a) : x_(std::move(x)), y_(std::move(y)), a_(std::move(a)) {
        check_param();
    }

    static QuadElem from_rat(const Rat& x, const Int& a) { return {x, 0, a}; }
    static QuadElem sqrt_gen(const Int& a) { return {0, 1, a}; }

    const Rat& x() const { return x_; }
    const Rat& y() const { return y_; }
    const Int& a() const { return a_; }

    bool is_zero() const { return x_ == 0 && y_ == 0; }
    bool is_rational() const { return y_ == 0; }

    QuadElem conj() const { return {x_, -y_, a_}; }
    Rat norm() const { return x_ * x_ - Rat(a_) * y_ * y_; }
    Rat trace() const { return 2 * x_; }

    /**
     * Ring-of-integers membership.  For a != 1 mod 4 the integers are
     * Z[sqrt(a)]; for a = 1 mod 4 they are Z[(1+sqrt(a))/2], i.e.
     * 2x and 2y integral and congruent mod 2.
     */
    bool is_integral() const {
        if (mod4(a_) == 1) {
            Rat tx = 2 * x_, ty = 2 * y_;
            if (!is_integer(tx) || !is_integer(ty)) return false;
            return (num(tx) - num(ty)) % 2 == 0;
        }
        return is_integer(x_) && is_integer(y_);
    }

    QuadElem operator-() const { return {-x_, -y_, a_}; }

    QuadElem operator+(const QuadElem& o) const {
        check_same(o);
        return {x_ + o.x_, y_ + o.y_, a_};
    }

    QuadElem operator-(const QuadElem& o) const {
        check_same(o);
        return {x_ - o.x_, y_ - o.y_, a_};
    }

    QuadElem operator*(const QuadElem& o) const {
        check_same(o);
        return {x_ * o.x_ + Rat(a_) * y_ * o.y_, x_ * o.y_ + y_ * o.x_, a_};
    }

    QuadElem operator*(const Rat& r) const { return {x_ * r, y_ * r, a_}; }

    QuadElem inverse() const {
        Rat n = norm();
        if (n == 0) throw std::domain_error("QuadElem: inverse of zero (or zero-norm) element");
        return {x_ / n, -y_ / n, a_};
    }

    QuadElem operator/(const QuadElem& o) const { return *this * o.inverse(); }
    QuadElem operator/(const Rat& r) const {
        if (r == 0) throw std::domain_error("QuadElem: division by zero");
        return {x_ / r, y_ / r, a_};
    }

    bool operator==(const QuadElem& o) const {
        return a_ == o.a_ && x_ == o.x_ && y_ == o.y_;
    }
};

inline QuadElem operator*(const Rat& r, const QuadElem& e) { return e * r; }

inline QuadElem conj(const QuadElem& e) { return e.conj(); }
inline Rat norm(const QuadElem& e) { return e.norm(); }
inline Rat trace(const QuadElem& e) { return e.trace(); }

/** 2*Re(u * conj(v)) = trace of u*conj(v); always rational. */
inline Rat herm(const QuadElem& u, const QuadElem& v) {
    return (u * v.conj()).trace();
}

/** Determinant of {u, v} as vectors in the basis (1, sqrt(a)). */
inline Rat cross(const QuadElem& u, const QuadElem& v) {
    return u.x() * v.y() - u.y() * v.x();
}

/**
 * Sign of a real quadratic-field element (a > 0 only): decided by the
 * signs of x and y, comparing x^2 against a*y^2 when they differ.
 */
inline int sign_real(const QuadElem& e) {
    if (e.a() < 0) throw std::domain_error("sign_real: imaginary field parameter");
    int sx = sign(e.x()), sy = sign(e.y());
    if (sy == 0) return sx;
    if (sx == 0) return sy;
    if (sx == sy) return sx;
    Rat d = e.x() * e.x() - Rat(e.a()) * e.y() * e.y();
    return d == 0 ? 0 : (sign(d) == sx ? sx : sy);
}

// --- text rendering (lossless, parse_quad inverts render_quad) ---

inline std::string render_rat(const Rat& q) {
    std::ostringstream os;
    os << num(q);
    if (den(q) != 1) os << "/" << den(q);
    return os.str();
}

inline std::string render_quad(const QuadElem& e) {
    std::ostringstream os;
    os << render_rat(e.x());
    if (e.y() >= 0)
        os << " + " << render_rat(e.y());
    else
        os << " - " << render_rat(-e.y());
    os << "*sqrt(" << e.a() << ")";
    return os.str();
}

inline Rat parse_rat(const std::string& s) {
    std::size_t slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        return Rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
    } catch (const std::exception&) {
        throw std::domain_error("parse_rat: malformed rational '" + s + "'");
    }
}

/**
 * Parses "x + y*sqrt(a)" / "x - y*sqrt(a)" as produced by render_quad,
 * plus the shorthand forms "x" and "y*sqrt(a)".
 */
inline QuadElem parse_quad(const std::string& text, const Int& default_a) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw std::domain_error("parse_quad: empty input");

    auto split_sqrt = [](const std::string& term, Rat& y, Int& a) {
        std::size_t pos = term.find("*sqrt(");
        std::size_t head = 6;
        if (pos == std::string::npos) {
            if (term.rfind("sqrt(", 0) != 0) return false;
            pos = 0;
            head = 5;
            y = 1;
        } else {
            y = parse_rat(term.substr(0, pos));
        }
        if (term.back() != ')') throw std::domain_error("parse_quad: unbalanced sqrt()");
        a = Int(term.substr(pos + head, term.size() - pos - head - 1));
        return true;
    };

    // Split at the top-level '+' or '-' separating the two terms, if any.
    std::size_t cut = std::string::npos;
    for (std::size_t i = 1; i < s.size(); ++i) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != '(' && s[i - 1] != '+' && s[i - 1] != '-' &&
            s[i - 1] != '*' && s[i - 1] != '/')
            cut = i;
    }

    Rat y;
    Int a;
    if (cut == std::string::npos) {
        if (split_sqrt(s, y, a)) return {0, y, a};
        return QuadElem::from_rat(parse_rat(s), default_a);
    }
    std::string tail = s.substr(cut + 1);
    Rat y2;
    Int a2;
    if (split_sqrt(s.substr(0, cut), y, a)) {
        // sqrt term first: "y*sqrt(a) + x"
        return {parse_rat(tail) * (s[cut] == '-' ? -1 : 1), y, a};
    }
    Rat x = parse_rat(s.substr(0, cut));
    if (!split_sqrt(tail, y2, a2))
        throw std::domain_error("parse_quad: malformed element '" + text + "'");
    if (s[cut] == '-') y2 = -y2;
    return {x, y2, a2};
}

} // namespace qh3

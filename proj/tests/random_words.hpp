#pragma once

/**
 * @file random_words.hpp
 * @brief Deterministic random norm-1 elements for the test suites:
 *        words in the Pell half-plane stabilizers and their inverses.
 */

#include <qh3/itgs.hpp>

#include <random>
#include <vector>

namespace qh3test {

using namespace qh3;

inline std::vector<Quaternion> norm_one_generators(const AlgebraParams& P) {
    std::vector<Quaternion> gens;
    for (auto [t, u] : {std::pair<int, int>{0, 1}, {1, 0}, {2, 3}}) {
        Quaternion g = construct_halfplane(t, u, P).gamma;
        gens.push_back(g);
        gens.push_back(g.conj());  // the inverse of a norm-1 element
    }
    return gens;
}

inline Quaternion random_word(std::mt19937& rng, const std::vector<Quaternion>& gens,
                              const AlgebraParams& P, int max_len = 4) {
    std::uniform_int_distribution<int> len(1, max_len);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(gens.size()) - 1);
    Quaternion w = Quaternion::scalar(1, P);
    int L = len(rng);
    for (int i = 0; i < L; ++i) w = w * gens[static_cast<std::size_t>(pick(rng))];
    return w;
}

/** A random word that is hyperbolic with eta != 0 and nonzero trace. */
inline Quaternion random_hyperbolic_word(std::mt19937& rng, const std::vector<Quaternion>& gens,
                                         const AlgebraParams& P, int max_len = 4) {
    for (;;) {
        Quaternion w = random_word(rng, gens, P, max_len);
        if (!w.eta().is_zero() && w.trace() != 0 && classify(w).tag == IsomTag::Hyperbolic)
            return w;
    }
}

} // namespace qh3test

// Factorization machinery over Q: squarefree (Yun) decomposition, rational
// roots, resultants/discriminants, and irreducible factorization by modular
// factorization plus factor-combination search.
#pragma once

#include <utility>
#include <vector>

#include "arbordyn/poly_q.hpp"

namespace arbordyn::exactalg {

// f = constant * prod parts[i].first ^ parts[i].second with monic squarefree
// pairwise-coprime parts, ascending multiplicity.
struct SquarefreeDecomposition {
    Rat constant;
    std::vector<std::pair<PolyQ, int>> parts;
};
SquarefreeDecomposition squarefree_decomposition(const PolyQ& f);

// All rational roots with multiplicities (rational-root theorem on the
// primitive integer model), sorted by (numerator, denominator).
std::vector<std::pair<Rat, int>> rational_roots(const PolyQ& f);

Rat resultant(const PolyQ& a, const PolyQ& b);
// disc(f) = (-1)^(d(d-1)/2) Res(f, f') / lc(f)
Rat discriminant(const PolyQ& f);
// Delta(t) = disc_X(f(X) - t), returned as a polynomial in t.
PolyQ discriminant_in_t(const PolyQ& f);

// f = constant * prod factors[i].first ^ factors[i].second, factors primitive
// integral irreducible with positive leading coefficient, deterministic order.
struct QFactorization {
    Rat constant;
    std::vector<std::pair<PolyQ, int>> factors;
};
// deg f <= 32 (throws DegreeCapExceeded beyond).
QFactorization q_factor(const PolyQ& f);

}  // namespace arbordyn::exactalg

// Cubic Dickson family +-(X^3 - 3cX): the quadratic-form representation
// c = alpha^2 + 3 beta^2, the rational parameterization of the
// maximal-density target values, and image-membership tests.
#pragma once

#include <optional>
#include <vector>

#include "arbordyn/poly_q.hpp"

namespace arbordyn::dickson {

using exactalg::PolyQ;

struct DicksonParams {
    Int c;        // positive
    int sign;     // +1 or -1
    std::optional<std::pair<Int, Int>> representation;  // c = a^2 + 3 b^2
};

// Some (alpha, beta) with c = alpha^2 + 3 beta^2, by bounded search over
// beta; exhaustive, so absence is conclusive.
std::optional<std::pair<Int, Int>> represent_c(const Int& c);

// sign * (X^3 - 3 c X)
PolyQ dickson_poly(const DicksonParams& params);

// g(x) = 2c (alpha x^2 + 6 beta x - 3 alpha) / (x^2 + 3)
Rat g_value(const Int& c, const Int& alpha, const Int& beta, const Rat& x);

// a has a rational f-preimage
bool in_image(const PolyQ& f, const Rat& a);

struct DensityCandidate {
    Rat a;
    bool eligible;  // a not in f(Q)
};
// Distinct values a = g(x) for x enumerated by ascending height, each
// flagged eligible when outside the image of f = X^3 - 3cX.
std::vector<DensityCandidate> maximal_density_candidates(const Int& c,
                                                         int count);

}  // namespace arbordyn::dickson

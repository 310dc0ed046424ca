#include "arbordyn/dickson.hpp"

#include <numeric>

#include "arbordyn/factor.hpp"

namespace arbordyn::dickson {

std::optional<std::pair<Int, Int>> represent_c(const Int& c) {
    if (c < 1 || c > Int("1000000000000"))
        throw ArbordynError("represent_c needs 1 <= c <= 10^12");
    for (Int beta = 0; 3 * beta * beta <= c; ++beta) {
        Int rest = c - 3 * beta * beta;
        Int alpha = sqrt(rest);
        if (alpha * alpha == rest) return std::make_pair(alpha, beta);
    }
    return std::nullopt;
}

PolyQ dickson_poly(const DicksonParams& params) {
    if (params.c < 1) throw ArbordynError("dickson_poly needs c >= 1");
    Rat s(params.sign);
    return PolyQ({Rat(0), s * Rat(-3) * Rat(params.c), Rat(0), s});
}

Rat g_value(const Int& c, const Int& alpha, const Int& beta, const Rat& x) {
    if (alpha * alpha + 3 * beta * beta != c)
        throw ArbordynError("(alpha, beta) do not represent c");
    Rat num = Rat(alpha) * x * x + Rat(6 * beta) * x - Rat(3 * alpha);
    Rat den = x * x + 3;  // never zero over Q
    Rat r = Rat(2 * c) * num / den;
    r.canonicalize();
    return r;
}

bool in_image(const PolyQ& f, const Rat& a) {
    return !exactalg::rational_roots(f - PolyQ::constant(a)).empty();
}

std::vector<DensityCandidate> maximal_density_candidates(const Int& c,
                                                         int count) {
    auto rep = represent_c(c);
    if (!rep) throw NotRepresentable("c is not of the form a^2 + 3 b^2");
    auto [alpha, beta] = *rep;
    PolyQ f = dickson_poly({c, +1, rep});

    std::vector<DensityCandidate> out;
    std::vector<Rat> seen;
    auto consider = [&](const Rat& x) {
        if (static_cast<int>(out.size()) >= count) return;
        Rat a = g_value(c, alpha, beta, x);
        for (const Rat& prev : seen)
            if (prev == a) return;
        seen.push_back(a);
        out.push_back({a, !in_image(f, a)});
    };
    // x = 0, then num/den and den/num by ascending height, both signs
    consider(Rat(0));
    for (long h = 1; static_cast<int>(out.size()) < count && h <= 10000;
         ++h) {
        for (long k = 1; k <= h; ++k) {
            if (std::gcd(h, k) != 1) continue;
            for (const Rat& x : {Rat(h, k), Rat(-h, k), Rat(k, h),
                                 Rat(-k, h)}) {
                Rat y = x;
                y.canonicalize();
                consider(y);
            }
        }
    }
    return out;
}

}  // namespace arbordyn::dickson

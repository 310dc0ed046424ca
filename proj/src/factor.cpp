#include "arbordyn/factor.hpp"

#include <algorithm>
#include <random>

#include "arbordyn/fp_poly.hpp"

namespace arbordyn::exactalg {

SquarefreeDecomposition squarefree_decomposition(const PolyQ& f) {
    if (f.degree() < 1)
        throw ArbordynError("squarefree decomposition needs deg >= 1");
    SquarefreeDecomposition out;
    out.constant = f.leading();
    PolyQ g = f.monic();
    // Yun's algorithm (characteristic 0)
    PolyQ gp = g.derivative();
    PolyQ u = poly_gcd(g, gp);
    PolyQ b = poly_div_exact(g, u);
    PolyQ c = poly_div_exact(gp, u);
    PolyQ d = c - b.derivative();
    int i = 1;
    while (b.degree() > 0) {
        PolyQ a = poly_gcd(b, d);
        if (a.degree() > 0) out.parts.emplace_back(a, i);
        b = poly_div_exact(b, a);
        c = poly_div_exact(d, a);
        d = c - b.derivative();
        ++i;
    }
    return out;
}

std::vector<std::pair<Rat, int>> rational_roots(const PolyQ& f) {
    if (f.is_zero()) throw ArbordynError("rational_roots needs f != 0");
    std::vector<std::pair<Rat, int>> out;
    PolyQ g = f;
    // strip the root at 0 first
    int zero_mult = 0;
    while (g.degree() >= 1 && g.coeff(0) == 0) {
        g = poly_div_exact(g, PolyQ::variable());
        ++zero_mult;
    }
    if (zero_mult > 0) out.emplace_back(Rat(0), zero_mult);
    if (g.degree() >= 1) {
        auto prim = primitive_integer_model(g);
        const Int a0 = prim.prim.front();
        const Int ad = prim.prim.back();
        for (const Int& r : divisors(a0)) {
            for (const Int& s : divisors(ad)) {
                if (gcd(r, s) != 1) continue;
                for (int sign : {1, -1}) {
                    Rat cand(sign * r, s);
                    cand.canonicalize();
                    int mult = 0;
                    while (g.degree() >= 1 && g.eval(cand) == 0) {
                        g = poly_div_exact(
                            g, PolyQ({-cand, Rat(1)}));
                        ++mult;
                    }
                    if (mult > 0) out.emplace_back(cand, mult);
                }
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        return x.first < y.first;
    });
    return out;
}

Rat resultant(const PolyQ& a, const PolyQ& b) {
    if (a.is_zero() || b.is_zero()) return Rat(0);
    if (a.degree() == 0) {
        Rat r = 1;
        for (int i = 0; i < b.degree(); ++i) r *= a.leading();
        return r;
    }
    if (b.degree() == 0) {
        Rat r = 1;
        for (int i = 0; i < a.degree(); ++i) r *= b.leading();
        return r;
    }
    if (a.degree() < b.degree()) {
        Rat sign = (a.degree() * b.degree()) % 2 ? Rat(-1) : Rat(1);
        return sign * resultant(b, a);
    }
    PolyQ r = poly_divrem(a, b).second;
    if (r.is_zero()) return Rat(0);
    Rat lead_pow = 1;
    for (int i = 0; i < a.degree() - r.degree(); ++i) lead_pow *= b.leading();
    Rat sign = (a.degree() * b.degree()) % 2 ? Rat(-1) : Rat(1);
    return sign * lead_pow * resultant(b, r);
}

Rat discriminant(const PolyQ& f) {
    int d = f.degree();
    if (d < 1) throw ArbordynError("discriminant needs deg >= 1");
    Rat res = resultant(f, f.derivative());
    Rat sign = ((d * (d - 1) / 2) % 2) ? Rat(-1) : Rat(1);
    return sign * res / f.leading();
}

PolyQ discriminant_in_t(const PolyQ& f) {
    int d = f.degree();
    if (d < 2) throw ArbordynError("discriminant_in_t needs deg >= 2");
    // Delta(t) has degree exactly d-1 in t; interpolate from d nodes.
    std::vector<Rat> nodes(d), values(d);
    for (int j = 0; j < d; ++j) {
        nodes[j] = Rat(j);
        values[j] = discriminant(f - PolyQ::constant(Rat(j)));
    }
    // Lagrange interpolation
    PolyQ acc;
    for (int j = 0; j < d; ++j) {
        PolyQ basis = PolyQ::constant(1);
        Rat denom = 1;
        for (int k = 0; k < d; ++k) {
            if (k == j) continue;
            basis = basis * PolyQ({-nodes[k], Rat(1)});
            denom *= nodes[j] - nodes[k];
        }
        acc = acc + (values[j] / denom) * basis;
    }
    return acc;
}

namespace {

// Zassenhaus with a single large prime: pick p beyond twice the
// Landau-Mignotte bound so that true factors are read off directly from the
// modular ones by symmetric lifting, with subset recombination.
std::vector<std::vector<Int>> factor_squarefree_primitive(
    std::vector<Int> g) {
    int n = static_cast<int>(g.size()) - 1;
    std::vector<std::vector<Int>> out;
    if (n <= 1) {
        out.push_back(std::move(g));
        return out;
    }
    // Landau-Mignotte: any factor h (scaled by lc) has |coeffs| bounded by
    // 2^n * sqrt(n+1) * H(g) * |lc(g)|
    Int height = 0;
    for (const Int& c : g) height = std::max(height, Int(abs(c)));
    Int bound = height * abs(g.back());
    mpz_mul_2exp(bound.get_mpz_t(), bound.get_mpz_t(), n);
    Int root = sqrt(Int(n + 1)) + 1;
    bound *= root;

    Int p = 2 * bound + 1;
    FpBig field;
    ModPoly<FpBig> gbar;
    while (true) {
        p = next_prime_above(p);
        if (mpz_divisible_p(g.back().get_mpz_t(), p.get_mpz_t())) continue;
        field = FpBig{p};
        std::vector<Int> coeffs(g.size());
        for (size_t i = 0; i < g.size(); ++i) coeffs[i] = field.from_int(g[i]);
        gbar = mp_make(field, std::move(coeffs));
        if (mp_gcd(gbar, mp_derivative(gbar)).degree() == 0) break;
    }

    std::mt19937_64 rng(0x5eed5eedULL);
    auto modular = mp_factor(mp_monic(gbar), rng);
    std::vector<ModPoly<FpBig>> fac;
    for (auto& [h, m] : modular)
        for (int i = 0; i < m; ++i) fac.push_back(h);  // m is 1: squarefree

    auto symmetric = [&](const Int& a) {
        return a * 2 > p ? Int(a - p) : a;
    };

    std::vector<int> alive(fac.size(), 1);
    auto current = g;
    int remaining = static_cast<int>(fac.size());

    // try subsets in increasing cardinality; lc-scaled symmetric lift, then
    // exact trial division over Z
    auto try_subset = [&](const std::vector<int>& subset) -> bool {
        ModPoly<FpBig> prod{field, {field.from_int(current.back())}};
        for (int i : subset) prod = mp_mul(prod, fac[i]);
        std::vector<Int> cand(prod.c.size());
        for (size_t i = 0; i < cand.size(); ++i) cand[i] = symmetric(prod.c[i]);
        // primitive part
        Int cont = 0;
        for (const Int& c : cand) cont = gcd(cont, c);
        if (cand.back() < 0) cont = -cont;
        for (Int& c : cand) c /= cont;
        // exact division test over Q
        PolyQ q_cand = poly_from_int_coeffs(cand);
        PolyQ q_cur = poly_from_int_coeffs(current);
        auto [quot, rem] = poly_divrem(q_cur, q_cand);
        if (!rem.is_zero()) return false;
        out.push_back(cand);
        auto prim = primitive_integer_model(quot);
        current = prim.prim;
        return true;
    };

    for (int card = 1; remaining > 0 && card <= remaining / 2; ++card) {
        bool progressed = true;
        while (progressed && remaining / 2 >= card) {
            progressed = false;
            std::vector<int> live;
            for (size_t i = 0; i < fac.size(); ++i)
                if (alive[i]) live.push_back(static_cast<int>(i));
            std::vector<int> comb(card);
            // iterate combinations of `live` of size `card`
            std::vector<int> pos(card);
            for (int i = 0; i < card; ++i) pos[i] = i;
            while (true) {
                for (int i = 0; i < card; ++i) comb[i] = live[pos[i]];
                if (try_subset(comb)) {
                    for (int i : comb) alive[i] = 0;
                    remaining -= card;
                    progressed = true;
                    break;
                }
                int k = card - 1;
                while (k >= 0 &&
                       pos[k] == static_cast<int>(live.size()) - card + k)
                    --k;
                if (k < 0) break;
                ++pos[k];
                for (int i = k + 1; i < card; ++i) pos[i] = pos[i - 1] + 1;
            }
        }
    }
    if (static_cast<int>(current.size()) - 1 > 0) out.push_back(current);
    return out;
}

}  // namespace

QFactorization q_factor(const PolyQ& f) {
    if (f.degree() > 32)
        throw DegreeCapExceeded("q_factor limited to degree 32");
    if (f.degree() < 0) throw ArbordynError("q_factor needs f != 0");
    QFactorization out;
    if (f.degree() == 0) {
        out.constant = f.leading();
        return out;
    }
    auto sf = squarefree_decomposition(f);
    out.constant = sf.constant;
    for (auto& [part, mult] : sf.parts) {
        auto prim = primitive_integer_model(part);
        Rat cpow = 1;
        for (int i = 0; i < mult; ++i) cpow *= prim.content;
        out.constant *= cpow;
        for (auto& h : factor_squarefree_primitive(prim.prim))
            out.factors.emplace_back(poly_from_int_coeffs(h), mult);
    }
    std::sort(out.factors.begin(), out.factors.end(),
              [](const auto& a, const auto& b) {
                  if (a.first.degree() != b.first.degree())
                      return a.first.degree() < b.first.degree();
                  for (int i = a.first.degree(); i >= 0; --i)
                      if (a.first.coeff(i) != b.first.coeff(i))
                          return a.first.coeff(i) < b.first.coeff(i);
                  return a.second < b.second;
              });
    return out;
}

}  // namespace arbordyn::exactalg

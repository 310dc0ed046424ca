// Univariate polynomial arithmetic over prime fields.
//
// The same algorithm set (division, gcd, Frobenius powering, Rabin
// irreducibility, squarefree/distinct-degree/equal-degree factorization) is
// instantiated twice: over machine-word primes (the stability engines and the
// census hot path) and over big primes (the single-precision-free path used
// by the rational factorizer).
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "arbordyn/numbers.hpp"
#include "arbordyn/poly_q.hpp"

namespace arbordyn::exactalg {

// ---- coefficient fields ----------------------------------------------------

struct Fp64 {
    using Elem = std::uint64_t;
    std::uint64_t p;  // prime < 2^31, so products fit in uint64

    Elem add(Elem a, Elem b) const {
        Elem s = a + b;
        return s >= p ? s - p : s;
    }
    Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + p - b; }
    Elem neg(Elem a) const { return a ? p - a : 0; }
    Elem mul(Elem a, Elem b) const { return a * b % p; }
    Elem inv(Elem a) const { return inv_mod_u64(a, p); }
    Elem pow(Elem a, const Int& e) const;
    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    bool is_zero(Elem a) const { return a == 0; }
    Elem from_int(const Int& n) const {
        return mpz_fdiv_ui(n.get_mpz_t(), p);
    }
    Int characteristic() const { return Int(static_cast<unsigned long>(p)); }
    Elem random(std::mt19937_64& rng) const {
        return rng() % p;
    }
    bool operator==(const Fp64&) const = default;
};

struct FpBig {
    using Elem = Int;
    Int p;

    Elem add(const Elem& a, const Elem& b) const {
        Elem s = a + b;
        if (s >= p) s -= p;
        return s;
    }
    Elem sub(const Elem& a, const Elem& b) const {
        Elem s = a - b;
        if (s < 0) s += p;
        return s;
    }
    Elem neg(const Elem& a) const { return a == 0 ? a : Elem(p - a); }
    Elem mul(const Elem& a, const Elem& b) const { return a * b % p; }
    Elem inv(const Elem& a) const {
        Elem r;
        if (!mpz_invert(r.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t()))
            throw ArbordynError("non-invertible element");
        return r;
    }
    Elem pow(const Elem& a, const Int& e) const {
        Elem r;
        mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
        return r;
    }
    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    bool is_zero(const Elem& a) const { return a == 0; }
    Elem from_int(const Int& n) const {
        Elem r;
        mpz_fdiv_r(r.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
        return r;
    }
    Int characteristic() const { return p; }
    Elem random(std::mt19937_64& rng) const {
        // enough 64-bit blocks to cover p
        Elem r = 0;
        size_t bits = mpz_sizeinbase(p.get_mpz_t(), 2);
        for (size_t b = 0; b < bits; b += 64) {
            r <<= 64;
            r += Int(static_cast<unsigned long>(rng() >> 32)) << 32;
            r += Int(static_cast<unsigned long>(rng() & 0xffffffffu));
        }
        return Elem(r % p);
    }
    bool operator==(const FpBig&) const = default;
};

// ---- dense polynomials over a field ----------------------------------------

template <class F>
struct ModPoly {
    F field;
    std::vector<typename F::Elem> c;  // lowest first, no trailing zeros

    void normalize() {
        while (!c.empty() && field.is_zero(c.back())) c.pop_back();
    }
    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    typename F::Elem coeff(size_t k) const {
        return k < c.size() ? c[k] : field.zero();
    }
    typename F::Elem leading() const { return c.back(); }
};

using PolyFp = ModPoly<Fp64>;
using PolyFpBig = ModPoly<FpBig>;

// Multiset of (degree, multiplicity) pairs of the irreducible factors; one
// entry per factor, so two distinct roots give two (1,1) entries.
struct FactorShape {
    std::vector<std::pair<int, int>> parts;  // sorted
    int total_degree() const;
    bool operator==(const FactorShape&) const = default;
};

// Coefficientwise reduction; throws UndefinedReduction when a denominator is
// divisible by p.  The result is normalized, so a vanishing leading
// coefficient shows up as a degree drop relative to f.
PolyFp reduce_mod_p(const PolyQ& f, std::uint64_t p);

bool fp_irreducible(const PolyFp& g);
FactorShape fp_factor_shape(const PolyFp& g);

// ---- generic algorithm surface (used by the factorizer as well) ------------

template <class F>
ModPoly<F> mp_make(const F& field, std::vector<typename F::Elem> coeffs) {
    ModPoly<F> r{field, std::move(coeffs)};
    r.normalize();
    return r;
}
template <class F>
ModPoly<F> mp_from_polyq(const F& field, const PolyQ& f);

template <class F>
ModPoly<F> mp_add(const ModPoly<F>& a, const ModPoly<F>& b);
template <class F>
ModPoly<F> mp_sub(const ModPoly<F>& a, const ModPoly<F>& b);
template <class F>
ModPoly<F> mp_mul(const ModPoly<F>& a, const ModPoly<F>& b);
template <>
ModPoly<Fp64> mp_mul<Fp64>(const ModPoly<Fp64>& a, const ModPoly<Fp64>& b);
template <class F>
ModPoly<F> mp_scale(const typename F::Elem& s, const ModPoly<F>& a);
template <class F>
std::pair<ModPoly<F>, ModPoly<F>> mp_divrem(const ModPoly<F>& a,
                                            const ModPoly<F>& b);
template <class F>
ModPoly<F> mp_mod(const ModPoly<F>& a, const ModPoly<F>& b);
template <class F>
ModPoly<F> mp_gcd(ModPoly<F> a, ModPoly<F> b);  // monic result
template <class F>
ModPoly<F> mp_monic(const ModPoly<F>& a);
template <class F>
ModPoly<F> mp_derivative(const ModPoly<F>& a);
template <class F>
ModPoly<F> mp_compose_mod(const ModPoly<F>& f, const ModPoly<F>& g,
                          const ModPoly<F>& mod);  // f(g) mod `mod`
template <class F>
ModPoly<F> mp_pow_mod(const ModPoly<F>& base, const Int& e,
                      const ModPoly<F>& mod);
template <class F>
ModPoly<F> mp_compose(const ModPoly<F>& f, const ModPoly<F>& g);

template <class F>
bool mp_irreducible(const ModPoly<F>& g);

// Squarefree decomposition in characteristic p (prime field, so the p-th
// root step is a simple reindexing).  Returns (monic squarefree part, mult).
template <class F>
std::vector<std::pair<ModPoly<F>, int>> mp_squarefree(const ModPoly<F>& f);

// Distinct-degree split of a monic squarefree polynomial: (degree d, product
// of all irreducible factors of degree d), ascending d.
template <class F>
std::vector<std::pair<int, ModPoly<F>>> mp_distinct_degree(
    const ModPoly<F>& f);

// Cantor-Zassenhaus equal-degree split of a product of degree-d irreducibles.
template <class F>
std::vector<ModPoly<F>> mp_equal_degree(const ModPoly<F>& f, int d,
                                        std::mt19937_64& rng);

// Full monic factorization (squarefree + DDF + EDF).
template <class F>
std::vector<std::pair<ModPoly<F>, int>> mp_factor(const ModPoly<F>& f,
                                                  std::mt19937_64& rng);

extern template struct ModPoly<Fp64>;
extern template struct ModPoly<FpBig>;

}  // namespace arbordyn::exactalg

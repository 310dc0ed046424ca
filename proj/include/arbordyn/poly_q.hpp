// Exact univariate polynomials over Q: the objects being iterated, shifted,
// differentiated and factored.  Coefficients are stored lowest degree first
// with no trailing zeros; the zero polynomial has an empty coefficient vector.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "arbordyn/numbers.hpp"

namespace arbordyn::exactalg {

class PolyQ {
  public:
    PolyQ() = default;
    explicit PolyQ(std::vector<Rat> coeffs) : c_(std::move(coeffs)) {
        normalize();
    }
    static PolyQ constant(const Rat& v) { return PolyQ({v}); }
    static PolyQ variable() { return PolyQ({Rat(0), Rat(1)}); }
    // c * X^k
    static PolyQ monomial(const Rat& c, int k);

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }
    const std::vector<Rat>& coeffs() const { return c_; }
    // Coefficient of X^k (0 beyond the degree).
    const Rat& coeff(size_t k) const;
    const Rat& leading() const { return c_.back(); }

    Rat eval(const Rat& x) const;
    PolyQ derivative() const;
    PolyQ monic() const;

    friend PolyQ operator+(const PolyQ& a, const PolyQ& b);
    friend PolyQ operator-(const PolyQ& a, const PolyQ& b);
    friend PolyQ operator*(const PolyQ& a, const PolyQ& b);
    PolyQ operator-() const;
    friend PolyQ operator*(const Rat& s, const PolyQ& a);
    friend bool operator==(const PolyQ& a, const PolyQ& b) {
        return a.c_ == b.c_;
    }

    std::string str(const std::string& var = "x") const;

  private:
    void normalize();
    std::vector<Rat> c_;
};

// Quotient and remainder of a by b over Q (b nonzero).
std::pair<PolyQ, PolyQ> poly_divrem(const PolyQ& a, const PolyQ& b);
// Exact division; throws if the remainder is nonzero.
PolyQ poly_div_exact(const PolyQ& a, const PolyQ& b);
// Monic gcd (0 for both zero).
PolyQ poly_gcd(const PolyQ& a, const PolyQ& b);

// f(g(X))
PolyQ poly_compose(const PolyQ& f, const PolyQ& g);
// f composed with itself n times; f^(0) = X.  Guards deg(f)^n <= degree_cap.
PolyQ poly_iterate(const PolyQ& f, long n, long degree_cap = 100000);
PolyQ poly_pow(const PolyQ& f, long n);

// Primitive integer model: f = content * prim with prim in Z[X], primitive,
// positive leading coefficient.  (Zero polynomial: content 0, prim 0.)
struct PrimitivePart {
    Rat content;
    std::vector<Int> prim;  // lowest first
};
PrimitivePart primitive_integer_model(const PolyQ& f);
PolyQ poly_from_int_coeffs(const std::vector<Int>& c);

}  // namespace arbordyn::exactalg

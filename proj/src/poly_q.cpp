#include "arbordyn/poly_q.hpp"

#include <algorithm>
#include <sstream>

namespace arbordyn::exactalg {

namespace {
const Rat kZero(0);
}

void PolyQ::normalize() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
    for (auto& x : c_) x.canonicalize();
}

PolyQ PolyQ::monomial(const Rat& c, int k) {
    std::vector<Rat> v(k + 1, Rat(0));
    v[k] = c;
    return PolyQ(std::move(v));
}

const Rat& PolyQ::coeff(size_t k) const {
    return k < c_.size() ? c_[k] : kZero;
}

Rat PolyQ::eval(const Rat& x) const {
    Rat acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

PolyQ PolyQ::derivative() const {
    if (c_.size() <= 1) return PolyQ();
    std::vector<Rat> d(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) d[i - 1] = Rat(long(i)) * c_[i];
    return PolyQ(std::move(d));
}

PolyQ PolyQ::monic() const {
    if (is_zero()) return *this;
    return Rat(1) / leading() * (*this);
}

PolyQ operator+(const PolyQ& a, const PolyQ& b) {
    std::vector<Rat> r(std::max(a.c_.size(), b.c_.size()), Rat(0));
    for (size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
    for (size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
    return PolyQ(std::move(r));
}

PolyQ operator-(const PolyQ& a, const PolyQ& b) {
    std::vector<Rat> r(std::max(a.c_.size(), b.c_.size()), Rat(0));
    for (size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
    for (size_t i = 0; i < b.c_.size(); ++i) r[i] -= b.c_[i];
    return PolyQ(std::move(r));
}

PolyQ operator*(const PolyQ& a, const PolyQ& b) {
    if (a.is_zero() || b.is_zero()) return PolyQ();
    std::vector<Rat> r(a.c_.size() + b.c_.size() - 1, Rat(0));
    for (size_t i = 0; i < a.c_.size(); ++i)
        for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return PolyQ(std::move(r));
}

PolyQ PolyQ::operator-() const {
    std::vector<Rat> r(c_);
    for (auto& x : r) x = -x;
    return PolyQ(std::move(r));
}

PolyQ operator*(const Rat& s, const PolyQ& a) {
    std::vector<Rat> r(a.c_);
    for (auto& x : r) x *= s;
    return PolyQ(std::move(r));
}

std::string PolyQ::str(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        const Rat& c = c_[i];
        if (c == 0) continue;
        Rat a = abs(c);
        if (first) {
            if (c < 0) os << "-";
            first = false;
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        bool unit = (a == 1);
        if (i == 0 || !unit) os << a.get_str();
        if (i > 0) {
            if (!unit) os << "*";
            os << var;
            if (i > 1) os << "^" << i;
        }
    }
    return os.str();
}

std::pair<PolyQ, PolyQ> poly_divrem(const PolyQ& a, const PolyQ& b) {
    if (b.is_zero()) throw ArbordynError("polynomial division by zero");
    std::vector<Rat> r(a.coeffs());
    int db = b.degree();
    int dq = static_cast<int>(r.size()) - 1 - db;
    if (dq < 0) return {PolyQ(), a};
    std::vector<Rat> q(dq + 1, Rat(0));
    Rat inv_lead = Rat(1) / b.leading();
    for (int i = dq; i >= 0; --i) {
        Rat f = r[i + db] * inv_lead;
        if (f != 0) {
            q[i] = f;
            for (int j = 0; j <= db; ++j) r[i + j] -= f * b.coeff(j);
        }
    }
    return {PolyQ(std::move(q)), PolyQ(std::move(r))};
}

PolyQ poly_div_exact(const PolyQ& a, const PolyQ& b) {
    auto [q, r] = poly_divrem(a, b);
    if (!r.is_zero()) throw ArbordynError("inexact polynomial division");
    return q;
}

PolyQ poly_gcd(const PolyQ& a, const PolyQ& b) {
    PolyQ u = a, v = b;
    while (!v.is_zero()) {
        PolyQ r = poly_divrem(u, v).second;
        u = v;
        v = r.is_zero() ? r : r.monic();
    }
    return u.is_zero() ? u : u.monic();
}

PolyQ poly_compose(const PolyQ& f, const PolyQ& g) {
    PolyQ acc;
    for (auto it = f.coeffs().rbegin(); it != f.coeffs().rend(); ++it)
        acc = acc * g + PolyQ::constant(*it);
    return acc;
}

PolyQ poly_iterate(const PolyQ& f, long n, long degree_cap) {
    if (f.degree() < 1) throw ArbordynError("poly_iterate needs deg f >= 1");
    if (n < 0) throw ArbordynError("poly_iterate needs n >= 0");
    // degree of the result is deg(f)^n
    long deg = 1;
    for (long i = 0; i < n; ++i) {
        deg *= f.degree();
        if (deg > degree_cap)
            throw DegreeCapExceeded("iterate degree " + std::to_string(deg) +
                                    " exceeds cap " +
                                    std::to_string(degree_cap));
    }
    PolyQ r = PolyQ::variable();
    for (long i = 0; i < n; ++i) r = poly_compose(f, r);
    return r;
}

PolyQ poly_pow(const PolyQ& f, long n) {
    PolyQ r = PolyQ::constant(1);
    PolyQ base = f;
    while (n) {
        if (n & 1) r = r * base;
        if (n >>= 1) base = base * base;
    }
    return r;
}

PrimitivePart primitive_integer_model(const PolyQ& f) {
    PrimitivePart out;
    if (f.is_zero()) {
        out.content = 0;
        return out;
    }
    Int den_lcm = 1;
    for (const Rat& c : f.coeffs()) den_lcm = lcm(den_lcm, Int(c.get_den()));
    std::vector<Int> z(f.coeffs().size());
    Int content_gcd = 0;
    for (size_t i = 0; i < z.size(); ++i) {
        z[i] = Int(f.coeffs()[i] * den_lcm);
        content_gcd = gcd(content_gcd, z[i]);
    }
    if (z.back() < 0) content_gcd = -content_gcd;
    for (auto& c : z) c /= content_gcd;
    out.prim = std::move(z);
    out.content = Rat(content_gcd) / Rat(den_lcm);
    out.content.canonicalize();
    return out;
}

PolyQ poly_from_int_coeffs(const std::vector<Int>& c) {
    std::vector<Rat> r(c.size());
    for (size_t i = 0; i < c.size(); ++i) r[i] = Rat(c[i]);
    return PolyQ(std::move(r));
}

}  // namespace arbordyn::exactalg

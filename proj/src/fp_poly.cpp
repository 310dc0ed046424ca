#include "arbordyn/fp_poly.hpp"

#include <algorithm>
#include <cassert>

namespace arbordyn::exactalg {

Fp64::Elem Fp64::pow(Elem a, const Int& e) const {
    Elem r = 1 % p;
    Elem base = a % p;
    size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    if (e == 0) return r;
    for (size_t i = bits; i-- > 0;) {
        r = r * r % p;
        if (mpz_tstbit(e.get_mpz_t(), i)) r = r * base % p;
    }
    return r;
}

int FactorShape::total_degree() const {
    int s = 0;
    for (auto& [d, m] : parts) s += d * m;
    return s;
}

// ---- generic arithmetic -----------------------------------------------------

template <class F>
ModPoly<F> mp_from_polyq(const F& field, const PolyQ& f) {
    std::vector<typename F::Elem> c(f.coeffs().size());
    for (size_t i = 0; i < c.size(); ++i) {
        const Rat& q = f.coeffs()[i];
        auto den = field.from_int(Int(q.get_den()));
        if (field.is_zero(den))
            throw UndefinedReduction("denominator divisible by the modulus");
        c[i] = field.mul(field.from_int(Int(q.get_num())), field.inv(den));
    }
    return mp_make(field, std::move(c));
}

template <class F>
ModPoly<F> mp_add(const ModPoly<F>& a, const ModPoly<F>& b) {
    const F& K = a.field;
    std::vector<typename F::Elem> r(std::max(a.c.size(), b.c.size()),
                                    K.zero());
    for (size_t i = 0; i < a.c.size(); ++i) r[i] = a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r[i] = K.add(r[i], b.c[i]);
    return mp_make(K, std::move(r));
}

template <class F>
ModPoly<F> mp_sub(const ModPoly<F>& a, const ModPoly<F>& b) {
    const F& K = a.field;
    std::vector<typename F::Elem> r(std::max(a.c.size(), b.c.size()),
                                    K.zero());
    for (size_t i = 0; i < a.c.size(); ++i) r[i] = a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r[i] = K.sub(r[i], b.c[i]);
    return mp_make(K, std::move(r));
}

template <class F>
ModPoly<F> mp_mul(const ModPoly<F>& a, const ModPoly<F>& b) {
    const F& K = a.field;
    if (a.is_zero() || b.is_zero()) return ModPoly<F>{K, {}};
    std::vector<typename F::Elem> r(a.c.size() + b.c.size() - 1, K.zero());
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (K.is_zero(a.c[i])) continue;
        for (size_t j = 0; j < b.c.size(); ++j)
            r[i + j] = K.add(r[i + j], K.mul(a.c[i], b.c[j]));
    }
    return mp_make(K, std::move(r));
}

// schoolbook with lazy 128-bit accumulation; p < 2^31 keeps products < 2^62
template <>
ModPoly<Fp64> mp_mul<Fp64>(const ModPoly<Fp64>& a, const ModPoly<Fp64>& b) {
    const Fp64& K = a.field;
    if (a.is_zero() || b.is_zero()) return ModPoly<Fp64>{K, {}};
    size_t n = a.c.size(), m = b.c.size();
    std::vector<std::uint64_t> r(n + m - 1);
    for (size_t k = 0; k < r.size(); ++k) {
        unsigned __int128 acc = 0;
        size_t lo = k >= m - 1 ? k - (m - 1) : 0;
        size_t hi = std::min(k, n - 1);
        for (size_t i = lo; i <= hi; ++i)
            acc += static_cast<unsigned __int128>(a.c[i]) * b.c[k - i];
        r[k] = static_cast<std::uint64_t>(acc % K.p);
    }
    return mp_make(K, std::move(r));
}

template <class F>
ModPoly<F> mp_scale(const typename F::Elem& s, const ModPoly<F>& a) {
    const F& K = a.field;
    std::vector<typename F::Elem> r(a.c.size());
    for (size_t i = 0; i < r.size(); ++i) r[i] = K.mul(s, a.c[i]);
    return mp_make(K, std::move(r));
}

template <class F>
std::pair<ModPoly<F>, ModPoly<F>> mp_divrem(const ModPoly<F>& a,
                                            const ModPoly<F>& b) {
    const F& K = a.field;
    if (b.is_zero()) throw ArbordynError("division by zero polynomial");
    int db = b.degree();
    int dq = a.degree() - db;
    if (dq < 0) return {ModPoly<F>{K, {}}, a};
    auto r = a.c;
    std::vector<typename F::Elem> q(dq + 1, K.zero());
    auto inv_lead = K.inv(b.leading());
    for (int i = dq; i >= 0; --i) {
        auto f = K.mul(r[i + db], inv_lead);
        if (!K.is_zero(f)) {
            q[i] = f;
            for (int j = 0; j <= db; ++j)
                r[i + j] = K.sub(r[i + j], K.mul(f, b.c[j]));
        }
    }
    return {mp_make(K, std::move(q)), mp_make(K, std::move(r))};
}

template <class F>
ModPoly<F> mp_mod(const ModPoly<F>& a, const ModPoly<F>& b) {
    return mp_divrem(a, b).second;
}

template <class F>
ModPoly<F> mp_monic(const ModPoly<F>& a) {
    if (a.is_zero()) return a;
    return mp_scale(a.field.inv(a.leading()), a);
}

template <class F>
ModPoly<F> mp_gcd(ModPoly<F> a, ModPoly<F> b) {
    while (!b.is_zero()) {
        ModPoly<F> r = mp_mod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return a.is_zero() ? a : mp_monic(a);
}

template <class F>
ModPoly<F> mp_derivative(const ModPoly<F>& a) {
    const F& K = a.field;
    if (a.c.size() <= 1) return ModPoly<F>{K, {}};
    std::vector<typename F::Elem> d(a.c.size() - 1);
    for (size_t i = 1; i < a.c.size(); ++i)
        d[i - 1] = K.mul(K.from_int(Int(static_cast<unsigned long>(i))),
                         a.c[i]);
    return mp_make(K, std::move(d));
}

template <class F>
ModPoly<F> mp_compose(const ModPoly<F>& f, const ModPoly<F>& g) {
    const F& K = f.field;
    ModPoly<F> acc{K, {}};
    for (auto it = f.c.rbegin(); it != f.c.rend(); ++it) {
        acc = mp_mul(acc, g);
        acc = mp_add(acc, ModPoly<F>{K, {*it}});
    }
    acc.normalize();
    return acc;
}

template <class F>
ModPoly<F> mp_compose_mod(const ModPoly<F>& f, const ModPoly<F>& g,
                          const ModPoly<F>& mod) {
    const F& K = f.field;
    ModPoly<F> acc{K, {}};
    for (auto it = f.c.rbegin(); it != f.c.rend(); ++it) {
        acc = mp_mod(mp_mul(acc, g), mod);
        acc = mp_add(acc, ModPoly<F>{K, {*it}});
    }
    acc.normalize();
    return acc;
}

template <class F>
ModPoly<F> mp_pow_mod(const ModPoly<F>& base, const Int& e,
                      const ModPoly<F>& mod) {
    const F& K = base.field;
    ModPoly<F> r{K, {K.one()}};
    if (e == 0) return r;
    ModPoly<F> b = mp_mod(base, mod);
    size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (size_t i = bits; i-- > 0;) {
        r = mp_mod(mp_mul(r, r), mod);
        if (mpz_tstbit(e.get_mpz_t(), i)) r = mp_mod(mp_mul(r, b), mod);
    }
    return r;
}

// ---- Frobenius power chain ---------------------------------------------------
//
// Walks X^(p^k) mod g for k = 1, 2, ...  The word-size field uses the matrix
// of the Frobenius endomorphism in the power basis, so each step is one
// matrix-vector product instead of a full exponentiation by p.

namespace {

template <class F>
class FrobeniusChain {
  public:
    explicit FrobeniusChain(const ModPoly<F>& g)
        : mod_(&g), p_(g.field.characteristic()) {
        ModPoly<F> x = mp_make(g.field, {g.field.zero(), g.field.one()});
        cur_ = mp_pow_mod(x, p_, g);
    }
    const ModPoly<F>& current() const { return cur_; }
    void advance() { cur_ = mp_pow_mod(cur_, p_, *mod_); }

  private:
    const ModPoly<F>* mod_;
    Int p_;
    ModPoly<F> cur_;
};

template <>
class FrobeniusChain<Fp64> {
  public:
    explicit FrobeniusChain(const ModPoly<Fp64>& g) : mod_(&g) {
        const Fp64& K = g.field;
        m_ = g.degree();
        ModPoly<Fp64> x = mp_make(K, {std::uint64_t(0), std::uint64_t(1)});
        cur_ = mp_pow_mod(x, K.characteristic(), g);
        if (m_ >= 16) {
            // column i = X^(i*p) mod g
            cols_.assign(static_cast<size_t>(m_) * m_, 0);
            ModPoly<Fp64> pw{K, {std::uint64_t(1)}};
            for (int i = 0; i < m_; ++i) {
                for (int r = 0; r <= pw.degree(); ++r)
                    cols_[size_t(i) * m_ + r] =
                        static_cast<std::uint32_t>(pw.c[r]);
                if (i + 1 < m_) pw = mp_mod(mp_mul(pw, cur_), g);
            }
        }
    }
    const ModPoly<Fp64>& current() const { return cur_; }
    void advance() {
        const Fp64& K = mod_->field;
        if (cols_.empty()) {
            cur_ = mp_pow_mod(cur_, K.characteristic(), *mod_);
            return;
        }
        std::vector<unsigned __int128> acc(m_, 0);
        for (int i = 0; i <= cur_.degree(); ++i) {
            std::uint64_t v = cur_.c[i];
            if (!v) continue;
            const std::uint32_t* col = &cols_[size_t(i) * m_];
            for (int r = 0; r < m_; ++r)
                acc[r] += static_cast<unsigned __int128>(v) * col[r];
        }
        std::vector<std::uint64_t> out(m_);
        for (int r = 0; r < m_; ++r)
            out[r] = static_cast<std::uint64_t>(acc[r] % K.p);
        cur_ = mp_make(K, std::move(out));
    }

  private:
    const ModPoly<Fp64>* mod_;
    int m_ = 0;
    ModPoly<Fp64> cur_;
    std::vector<std::uint32_t> cols_;  // column-major Frobenius matrix
};

}  // namespace

// Irreducibility via the distinct-degree scan: g of degree m is reducible iff
// some irreducible factor has degree <= m/2, i.e. gcd(X^(p^k) - X, g) != 1
// for some k <= m/2.  Catches repeated factors too.
template <class F>
bool mp_irreducible(const ModPoly<F>& g) {
    const F& K = g.field;
    int m = g.degree();
    if (m <= 0) throw ArbordynError("irreducibility needs degree >= 1");
    if (m == 1) return true;
    ModPoly<F> gm = mp_monic(g);
    ModPoly<F> x = mp_make(K, {K.zero(), K.one()});
    FrobeniusChain<F> chain(gm);
    for (int k = 1; 2 * k <= m; ++k) {
        if (k > 1) chain.advance();
        ModPoly<F> d = mp_gcd(mp_sub(chain.current(), x), gm);
        if (d.degree() != 0) return false;
    }
    return true;
}

template <class F>
std::vector<std::pair<ModPoly<F>, int>> mp_squarefree(const ModPoly<F>& f) {
    const F& K = f.field;
    std::vector<std::pair<ModPoly<F>, int>> out;
    ModPoly<F> g = mp_monic(f);
    if (g.degree() < 1) return out;
    ModPoly<F> c = mp_gcd(g, mp_derivative(g));
    ModPoly<F> w = mp_divrem(g, c).first;
    int i = 1;
    while (w.degree() > 0) {
        ModPoly<F> y = mp_gcd(w, c);
        ModPoly<F> z = mp_divrem(w, y).first;
        if (z.degree() > 0) out.emplace_back(z, i);
        w = y;
        c = mp_divrem(c, y).first;
        ++i;
    }
    if (c.degree() > 0) {
        // c = u(X^p); over the prime field the p-th root just reindexes.
        // Only reachable when the characteristic is at most deg c.
        unsigned long p = mpz_get_ui(K.characteristic().get_mpz_t());
        std::vector<typename F::Elem> u(c.degree() / p + 1, K.zero());
        for (size_t j = 0; j < u.size(); ++j) u[j] = c.coeff(j * p);
        for (auto& [h, m] : mp_squarefree(mp_make(K, std::move(u))))
            out.emplace_back(h, m * static_cast<int>(p));
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    return out;
}

template <class F>
std::vector<std::pair<int, ModPoly<F>>> mp_distinct_degree(
    const ModPoly<F>& f) {
    const F& K = f.field;
    std::vector<std::pair<int, ModPoly<F>>> out;
    ModPoly<F> rem = mp_monic(f);
    if (rem.degree() < 1) return out;
    ModPoly<F> x = mp_make(K, {K.zero(), K.one()});
    FrobeniusChain<F> chain(rem);
    for (int k = 1; 2 * k <= rem.degree(); ++k) {
        if (k > 1) chain.advance();
        ModPoly<F> d = mp_gcd(mp_sub(chain.current(), x), rem);
        if (d.degree() > 0) {
            out.emplace_back(k, d);
            rem = mp_divrem(rem, d).first;
            if (rem.degree() == 0) break;
        }
    }
    if (rem.degree() > 0) out.emplace_back(rem.degree(), rem);
    return out;
}

template <class F>
std::vector<ModPoly<F>> mp_equal_degree(const ModPoly<F>& f, int d,
                                        std::mt19937_64& rng) {
    const F& K = f.field;
    if (K.characteristic() == 2)
        throw ArbordynError("equal-degree splitting requires odd modulus");
    std::vector<ModPoly<F>> out;
    if (f.degree() == d) {
        out.push_back(mp_monic(f));
        return out;
    }
    Int e = 1;
    {
        Int pd;
        mpz_pow_ui(pd.get_mpz_t(), K.characteristic().get_mpz_t(),
                   static_cast<unsigned long>(d));
        e = (pd - 1) / 2;
    }
    ModPoly<F> g = mp_monic(f);
    while (true) {
        std::vector<typename F::Elem> hc(g.degree());
        for (auto& v : hc) v = K.random(rng);
        ModPoly<F> h = mp_make(K, std::move(hc));
        if (h.is_zero()) continue;
        ModPoly<F> w = mp_pow_mod(h, e, g);
        w = mp_sub(w, ModPoly<F>{K, {K.one()}});
        ModPoly<F> split = mp_gcd(w, g);
        if (split.degree() > 0 && split.degree() < g.degree()) {
            auto rest = mp_divrem(g, split).first;
            for (auto& part : mp_equal_degree(split, d, rng))
                out.push_back(std::move(part));
            for (auto& part : mp_equal_degree(rest, d, rng))
                out.push_back(std::move(part));
            return out;
        }
    }
}

template <class F>
std::vector<std::pair<ModPoly<F>, int>> mp_factor(const ModPoly<F>& f,
                                                  std::mt19937_64& rng) {
    const F& K = f.field;
    std::vector<std::pair<ModPoly<F>, int>> out;
    for (auto& [sf, mult] : mp_squarefree(f)) {
        for (auto& [d, prod] : mp_distinct_degree(sf)) {
            if (prod.degree() == d) {
                out.emplace_back(mp_monic(prod), mult);
            } else {
                for (auto& irr : mp_equal_degree(prod, d, rng))
                    out.emplace_back(std::move(irr), mult);
            }
        }
    }
    std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
        if (a.first.degree() != b.first.degree())
            return a.first.degree() < b.first.degree();
        for (int i = a.first.degree(); i >= 0; --i) {
            if (a.first.c[i] != b.first.c[i]) return a.first.c[i] < b.first.c[i];
        }
        return a.second < b.second;
    });
    return out;
}

// ---- public word-size entry points ------------------------------------------

PolyFp reduce_mod_p(const PolyQ& f, std::uint64_t p) {
    return mp_from_polyq(Fp64{p}, f);
}

bool fp_irreducible(const PolyFp& g) { return mp_irreducible(g); }

FactorShape fp_factor_shape(const PolyFp& g) {
    if (g.degree() < 1)
        throw ArbordynError("factor shape needs degree >= 1");
    FactorShape shape;
    for (auto& [sf, mult] : mp_squarefree(g))
        for (auto& [d, prod] : mp_distinct_degree(sf))
            for (int i = 0; i < prod.degree() / d; ++i)
                shape.parts.emplace_back(d, mult);
    std::sort(shape.parts.begin(), shape.parts.end());
    return shape;
}

// ---- explicit instantiations -------------------------------------------------

template struct ModPoly<Fp64>;
template struct ModPoly<FpBig>;

#define ARBORDYN_INSTANTIATE(F)                                               \
    template ModPoly<F> mp_from_polyq<F>(const F&, const PolyQ&);             \
    template ModPoly<F> mp_add<F>(const ModPoly<F>&, const ModPoly<F>&);      \
    template ModPoly<F> mp_sub<F>(const ModPoly<F>&, const ModPoly<F>&);      \
    template ModPoly<F> mp_scale<F>(const F::Elem&, const ModPoly<F>&);       \
    template std::pair<ModPoly<F>, ModPoly<F>> mp_divrem<F>(                  \
        const ModPoly<F>&, const ModPoly<F>&);                                \
    template ModPoly<F> mp_mod<F>(const ModPoly<F>&, const ModPoly<F>&);      \
    template ModPoly<F> mp_monic<F>(const ModPoly<F>&);                       \
    template ModPoly<F> mp_gcd<F>(ModPoly<F>, ModPoly<F>);                    \
    template ModPoly<F> mp_derivative<F>(const ModPoly<F>&);                  \
    template ModPoly<F> mp_compose<F>(const ModPoly<F>&, const ModPoly<F>&);  \
    template ModPoly<F> mp_compose_mod<F>(const ModPoly<F>&,                  \
                                          const ModPoly<F>&,                  \
                                          const ModPoly<F>&);                 \
    template ModPoly<F> mp_pow_mod<F>(const ModPoly<F>&, const Int&,          \
                                      const ModPoly<F>&);                     \
    template bool mp_irreducible<F>(const ModPoly<F>&);                       \
    template std::vector<std::pair<ModPoly<F>, int>> mp_squarefree<F>(        \
        const ModPoly<F>&);                                                   \
    template std::vector<std::pair<int, ModPoly<F>>> mp_distinct_degree<F>(   \
        const ModPoly<F>&);                                                   \
    template std::vector<ModPoly<F>> mp_equal_degree<F>(const ModPoly<F>&,    \
                                                        int,                  \
                                                        std::mt19937_64&);    \
    template std::vector<std::pair<ModPoly<F>, int>> mp_factor<F>(            \
        const ModPoly<F>&, std::mt19937_64&);

ARBORDYN_INSTANTIATE(Fp64)
ARBORDYN_INSTANTIATE(FpBig)
#undef ARBORDYN_INSTANTIATE

template ModPoly<FpBig> mp_mul<FpBig>(const ModPoly<FpBig>&,
                                      const ModPoly<FpBig>&);

}  // namespace arbordyn::exactalg

#include "arbordyn/numbers.hpp"

#include <algorithm>
#include <map>

namespace arbordyn {

long valuation(const Int& n, const Int& p) {
    if (n == 0) return kValInfinity;
    Int rest;
    return static_cast<long>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(),
                                        p.get_mpz_t()));
}

long valuation(const Rat& x, const Int& p) {
    if (x == 0) return kValInfinity;
    return valuation(Int(x.get_num()), p) - valuation(Int(x.get_den()), p);
}

Int height(const Rat& x) {
    Int num = abs(Int(x.get_num()));
    Int den(x.get_den());
    return num > den ? num : den;
}

bool is_prime(const Int& n) {
    return mpz_probab_prime_p(n.get_mpz_t(), 32) != 0;
}

Int next_prime_above(const Int& n) {
    Int p;
    mpz_nextprime(p.get_mpz_t(), n.get_mpz_t());
    return p;
}

namespace {

// Pollard rho (Brent's variant).  n odd composite, not a prime power of a
// tiny prime; deterministic constant seeds keep results reproducible.
// `budget` caps the total number of iteration steps; 0 on entry means
// unbounded.  Returns 1 when the budget runs out.
Int pollard_rho_budgeted(const Int& n, long* budget) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), 2)) return 2;
    for (unsigned long c = 1;; ++c) {
        Int x = 2, y = 2, d = 1;
        Int diff, saved_x, saved_y;
        unsigned long power = 1, lam = 0;
        auto step = [&](Int& v) { v = (v * v + c) % n; };
        x = 2;
        step(y);
        while (d == 1) {
            if (budget && *budget <= 0) return 1;
            if (lam == power) {
                x = y;
                power *= 2;
                lam = 0;
            }
            // batch gcds in blocks of up to 64
            Int q = 1;
            unsigned long block = std::min<unsigned long>(64, power - lam);
            saved_y = y;
            for (unsigned long i = 0; i < block; ++i) {
                step(y);
                diff = x - y;
                q = q * diff % n;
            }
            if (budget) *budget -= static_cast<long>(block);
            lam += block;
            d = gcd(q, n);
            if (d == n) {
                // backtrack one step at a time
                y = saved_y;
                d = 1;
                for (unsigned long i = 0; i < block && d == 1; ++i) {
                    step(y);
                    diff = x - y;
                    d = gcd(Int(abs(diff)), n);
                }
                if (d == n || d == 1) break;  // retry with next c
            }
        }
        if (d != 1 && d != n) return d;
    }
}

void factor_rec(const Int& n, std::map<Int, int>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out[n]++;
        return;
    }
    Int d = pollard_rho_budgeted(n, nullptr);
    factor_rec(d, out);
    factor_rec(Int(n / d), out);
}

// Budgeted variant: composites left over when the budget runs out are
// multiplied into `leftover` instead of being split further.
void factor_rec_budgeted(const Int& n, std::map<Int, int>& out, Int& leftover,
                         long* budget) {
    if (n == 1) return;
    if (is_prime(n)) {
        out[n]++;
        return;
    }
    Int d = pollard_rho_budgeted(n, budget);
    if (d == 1 || d == n) {
        leftover *= n;
        return;
    }
    factor_rec_budgeted(d, out, leftover, budget);
    factor_rec_budgeted(Int(n / d), out, leftover, budget);
}

}  // namespace

std::vector<std::pair<Int, int>> factorize(const Int& n) {
    Int m = abs(n);
    if (m <= 1) return {};
    std::map<Int, int> acc;
    for (long p : {2L, 3L, 5L, 7L, 11L, 13L, 17L, 19L, 23L, 29L, 31L, 37L}) {
        while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            acc[Int(p)]++;
            m /= p;
        }
    }
    if (m > 1) factor_rec(m, acc);
    return {acc.begin(), acc.end()};
}

PartialFactorization partial_factorize(const Int& n, long trial_bound,
                                       bool use_rho) {
    PartialFactorization out;
    Int m = abs(n);
    if (m <= 1) return out;
    std::map<Int, int> acc;
    for (long p : small_primes_up_to(trial_bound)) {
        if (m == 1) break;
        if (Int(p) * p > m) break;
        while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            acc[Int(p)]++;
            m /= p;
        }
    }
    if (m > 1 && (is_prime(m) || Int(trial_bound) * trial_bound >= m)) {
        // any remaining cofactor below bound^2 is prime
        acc[m]++;
        m = 1;
    }
    if (m > 1 && use_rho && mpz_sizeinbase(m.get_mpz_t(), 2) <= 2048) {
        // bounded rho pass: peels off moderate factors, leaves the rest as
        // an (explicitly incomplete) cofactor
        long budget = 400000;
        Int leftover = 1;
        factor_rec_budgeted(m, acc, leftover, &budget);
        m = leftover;
    }
    out.primes.assign(acc.begin(), acc.end());
    out.cofactor = m;
    out.complete = (m == 1);
    return out;
}

std::vector<Int> divisors(const Int& n) {
    std::vector<Int> out{1};
    for (auto& [p, e] : factorize(n)) {
        size_t base = out.size();
        Int pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= p;
            for (size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<long> small_primes_up_to(long n) {
    std::vector<long> primes;
    if (n < 2) return primes;
    std::vector<char> comp(n + 1, 0);
    for (long i = 2; i <= n; ++i) {
        if (!comp[i]) {
            primes.push_back(i);
            for (long j = i * i; j <= n; j += i) comp[j] = 1;
        }
        if (i * i > n) break;
    }
    // finish collecting after the crossing loop stops early
    for (long i = primes.empty() ? 2 : primes.back() + 1; i <= n; ++i)
        if (!comp[i]) primes.push_back(i);
    return primes;
}

std::vector<long> prime_factors_long(long n) {
    std::vector<long> out;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            out.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

long euler_phi_long(long n) {
    long phi = n;
    for (long p : prime_factors_long(n)) phi -= phi / p;
    return phi;
}

std::uint64_t pow_mod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = r * a % m;
        a = a * a % m;
        e >>= 1;
    }
    return r;
}

std::uint64_t inv_mod_u64(std::uint64_t a, std::uint64_t m) {
    return pow_mod_u64(a, m - 2, m);
}

std::uint64_t reduce_rat_mod_p(const Rat& x, std::uint64_t p) {
    Int num(x.get_num()), den(x.get_den());
    if (mpz_divisible_ui_p(den.get_mpz_t(), p))
        throw UndefinedReduction("denominator divisible by " +
                                 std::to_string(p));
    std::uint64_t n = mpz_fdiv_ui(num.get_mpz_t(), p);
    std::uint64_t d = mpz_fdiv_ui(den.get_mpz_t(), p);
    return n * inv_mod_u64(d, p) % p;
}

std::string to_string(const Rat& x) { return x.get_str(); }

}  // namespace arbordyn

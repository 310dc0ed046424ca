#include "arbordyn/stability.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "arbordyn/dynamics.hpp"
#include "arbordyn/fp_poly.hpp"

namespace arbordyn::stability {

using exactalg::Fp64;
using exactalg::mp_add;
using exactalg::mp_compose;
using exactalg::mp_make;
using exactalg::mp_sub;
using exactalg::PolyFp;
using exactalg::poly_div_exact;
using exactalg::PrimitivePart;
using exactalg::q_factor;
using exactalg::rational_roots;
using exactalg::squarefree_decomposition;

StabilityVerdict StabilityVerdict::stable_up_to(int n) {
    StabilityVerdict v;
    v.mode = Mode::DepthBounded;
    v.status = Status::StableUpTo;
    v.depth = n;
    return v;
}

StabilityVerdict StabilityVerdict::stable_exact(long period) {
    StabilityVerdict v;
    v.mode = Mode::ExactUnicritical;
    v.status = Status::StableExact;
    v.orbit_period_mod_p = period;
    return v;
}

StabilityVerdict StabilityVerdict::unstable_at(Mode m, int level,
                                               FailReason r) {
    StabilityVerdict v;
    v.mode = m;
    v.status = Status::UnstableAt;
    v.depth = level;
    v.reason = r;
    return v;
}

StabilityVerdict depth_stable(const PolyQ& f, const Rat& a, long p, int N,
                              long degree_cap) {
    if (f.degree() < 2 || N < 1)
        throw ArbordynError("depth_stable needs deg >= 2 and N >= 1");
    const auto mode = StabilityVerdict::Mode::DepthBounded;
    PolyFp fbar{Fp64{static_cast<std::uint64_t>(p)}, {}};
    std::uint64_t abar;
    try {
        fbar = exactalg::reduce_mod_p(f, p);
        abar = reduce_rat_mod_p(a, p);
    } catch (const UndefinedReduction&) {
        return StabilityVerdict::unstable_at(mode, 1, FailReason::Undefined);
    }
    if (fbar.degree() != f.degree())
        return StabilityVerdict::unstable_at(mode, 1, FailReason::DegreeDrop);

    PolyFp level = fbar;  // f^(n) mod p
    PolyFp abar_poly = mp_make(fbar.field, {abar});
    for (int n = 1; n <= N; ++n) {
        if (n > 1) {
            if (static_cast<long>(level.degree()) * f.degree() > degree_cap)
                throw DegreeCapExceeded("depth level degree exceeds cap");
            level = mp_compose(fbar, level);
        }
        if (!exactalg::fp_irreducible(mp_sub(level, abar_poly)))
            return StabilityVerdict::unstable_at(mode, n,
                                                 FailReason::Reducible);
    }
    return StabilityVerdict::stable_up_to(N);
}

std::optional<UnicriticalShape> unicritical_shape(const PolyQ& f) {
    int d = f.degree();
    if (d < 2) return std::nullopt;
    for (int i = 1; i < d; ++i)
        if (f.coeff(i) != 0) return std::nullopt;
    return UnicriticalShape{f.leading(), d, f.coeff(0)};
}

namespace {

bool is_qth_power_mod(std::uint64_t w, long q, long p) {
    if (w == 0) return true;
    return pow_mod_u64(w, static_cast<std::uint64_t>((p - 1) / q),
                       static_cast<std::uint64_t>(p)) == 1;
}

}  // namespace

StabilityVerdict unicritical_exact_stable(const Rat& u, int d, const Rat& v,
                                          const Rat& a, long p) {
    const auto mode = StabilityVerdict::Mode::ExactUnicritical;
    if (d < 2) throw ArbordynError("unicritical engine needs d >= 2");
    std::uint64_t up, vp, ap;
    try {
        up = reduce_rat_mod_p(u, p);
        vp = reduce_rat_mod_p(v, p);
        ap = reduce_rat_mod_p(a, p);
    } catch (const UndefinedReduction&) {
        return StabilityVerdict::unstable_at(mode, 1, FailReason::Undefined);
    }
    if (up == 0)
        return StabilityVerdict::unstable_at(mode, 1, FailReason::DegreeDrop);

    std::vector<long> qs = prime_factors_long(d);
    // congruence gate: p = 1 mod q for every prime q | d, 1 mod 4 if 4 | d
    for (long q : qs)
        if ((p - 1) % q != 0)
            return StabilityVerdict::unstable_at(mode, 1,
                                                 FailReason::Reducible);
    if (d % 4 == 0 && (p - 1) % 4 != 0)
        return StabilityVerdict::unstable_at(mode, 1, FailReason::Reducible);

    const std::uint64_t P = static_cast<std::uint64_t>(p);
    std::uint64_t uinv = inv_mod_u64(up, P);
    auto level_value = [&](std::uint64_t orbit_x) {
        // (orbit_x - a)/u mod p
        return (orbit_x + P - ap) % P * uinv % P;
    };
    auto fails = [&](std::uint64_t w) {
        for (long q : qs)
            if (is_qth_power_mod(w, q, p)) return true;
        return false;
    };

    // level 1: (a - v)/u
    if (fails((ap + P - vp) % P * uinv % P))
        return StabilityVerdict::unstable_at(mode, 1, FailReason::Reducible);

    auto step = [&](std::uint64_t x) {
        // u x^d + v mod p
        std::uint64_t r = pow_mod_u64(x, static_cast<std::uint64_t>(d), P);
        return (r * up + vp) % P;
    };

    // iterate the critical orbit v, f(v), ... with Brent cycle detection;
    // level n+1 tests the n-th orbit value
    std::uint64_t anchor = vp;
    std::uint64_t x = vp;
    long power = 1, lam = 0;
    long n = 0;
    long cycle_len = 0;
    while (true) {
        x = step(x);
        ++n;
        if (fails(level_value(x)))
            return StabilityVerdict::unstable_at(
                mode, static_cast<int>(n) + 1, FailReason::Reducible);
        ++lam;
        if (x == anchor) {
            cycle_len = lam;
            break;
        }
        if (lam == power) {
            anchor = x;
            power *= 2;
            lam = 0;
        }
    }
    // find the tail length: advance a second pointer cycle_len ahead
    std::uint64_t ahead = vp;
    for (long i = 0; i < cycle_len; ++i) ahead = step(ahead);
    std::uint64_t tail_x = vp;
    long mu = 0;
    while (tail_x != ahead) {
        tail_x = step(tail_x);
        ahead = step(ahead);
        ++mu;
    }
    long period = mu + cycle_len;  // distinct orbit values
    // Brent may close the loop past the rho length; every distinct value has
    // been tested by then, so all remaining levels repeat earlier checks.
    return StabilityVerdict::stable_exact(period);
}

// ---- good primes ---------------------------------------------------------------

const char* bad_prime_reason_name(BadPrimeReason r) {
    switch (r) {
        case BadPrimeReason::DenominatorPrime: return "denominator";
        case BadPrimeReason::DiscriminantContent: return "disc_content";
        case BadPrimeReason::RootCollision: return "root_collision";
        case BadPrimeReason::SmallPrime: return "small_prime";
    }
    return "?";
}

GoodPrimeFilter::GoodPrimeFilter(const PolyQ& f) {
    if (f.degree() < 2) throw ArbordynError("good_prime needs deg >= 2");
    degree_ = f.degree();
    // F(t,X) = (f(X) - t)/lc(f) is the monic model; its coefficient
    // denominators together with f's own make up condition (i)
    denominator_lcm_ = 1;
    for (const Rat& c : f.coeffs()) {
        denominator_lcm_ = lcm(denominator_lcm_, Int(c.get_den()));
        Rat scaled = c / f.leading();
        denominator_lcm_ = lcm(denominator_lcm_, Int(scaled.get_den()));
    }
    Rat lead_inv = Rat(1) / f.leading();
    denominator_lcm_ = lcm(denominator_lcm_, Int(lead_inv.get_den()));

    // Delta(t) of f itself carries the branch points (critical values of f);
    // the content condition is read off the monic model, whose discriminant
    // differs by the factor lc^(2d-2)
    disc_t_ = exactalg::discriminant_in_t(f);
    PrimitivePart prim = exactalg::primitive_integer_model(disc_t_);
    Rat content = prim.content;
    for (int i = 0; i < 2 * degree_ - 2; ++i) content /= f.leading();
    content_num_ = abs(Int(content.get_num()));
    content_den_ = Int(content.get_den());

    PolyQ sf = PolyQ::constant(1);
    for (auto& [part, mult] : squarefree_decomposition(disc_t_).parts)
        sf = sf * part;
    PrimitivePart sf_prim = exactalg::primitive_integer_model(sf);
    sf_leading_ = sf_prim.prim.back();
    if (sf.degree() >= 2) {
        sf_discriminant_ = abs(Int(
            exactalg::discriminant(exactalg::poly_from_int_coeffs(sf_prim.prim))
                .get_num()));
    } else {
        sf_discriminant_ = 1;  // a single root cannot collide
    }
}

std::vector<BadPrimeReason> GoodPrimeFilter::reasons(const Int& p) const {
    std::vector<BadPrimeReason> out;
    if (mpz_divisible_p(denominator_lcm_.get_mpz_t(), p.get_mpz_t()))
        out.push_back(BadPrimeReason::DenominatorPrime);
    if (mpz_divisible_p(content_num_.get_mpz_t(), p.get_mpz_t()) ||
        mpz_divisible_p(content_den_.get_mpz_t(), p.get_mpz_t()))
        out.push_back(BadPrimeReason::DiscriminantContent);
    if (mpz_divisible_p(sf_discriminant_.get_mpz_t(), p.get_mpz_t()) ||
        mpz_divisible_p(sf_leading_.get_mpz_t(), p.get_mpz_t()))
        out.push_back(BadPrimeReason::RootCollision);
    if (p <= degree_) out.push_back(BadPrimeReason::SmallPrime);
    return out;
}

bool GoodPrimeFilter::good(const Int& p) const { return reasons(p).empty(); }

GoodPrimeResult good_prime(const PolyQ& f, const Int& p) {
    GoodPrimeFilter filter(f);
    auto reasons = filter.reasons(p);
    return {reasons.empty(), std::move(reasons)};
}

long intersection_mult(const Rat& a, const Rat& t, const Int& p) {
    if (valuation(a, p) < 0 || valuation(t, p) < 0)
        throw NonIntegral("intersection multiplicity needs p-integral inputs");
    Rat diff = a - t;
    long v = valuation(diff, p);
    return v;  // kValInfinity when a == t
}

long intersection_mult(const Rat& a, const PolyQ& min_poly, const Int& p) {
    if (valuation(a, p) < 0) throw NonIntegral("a must be p-integral");
    PolyQ monic = min_poly.monic();
    for (const Rat& c : monic.coeffs())
        if (valuation(c, p) < 0)
            throw NonIntegral("minimal polynomial not p-integral at p");
    return valuation(monic.eval(a), p);
}

namespace {

wreath::CycleType fiber_type_over(const PolyQ& f, const Rat& v) {
    std::vector<long> parts;
    for (auto& [g, mult] :
         squarefree_decomposition(f - PolyQ::constant(v)).parts)
        for (int i = 0; i < g.degree(); ++i) parts.push_back(mult);
    return wreath::CycleType(std::move(parts));
}

}  // namespace

std::vector<RamificationPrediction> predict_ramification(const PolyQ& f,
                                                         const Rat& a,
                                                         long p) {
    GoodPrimeFilter filter(f);
    Int P(p);
    if (!filter.good(P)) throw BadPrime("prime is not good for f(X) - t");

    std::vector<RamificationPrediction> out;
    const PolyQ& disc = filter.discriminant_t();
    PolyQ sf = PolyQ::constant(1);
    for (auto& [part, mult] : squarefree_decomposition(disc).parts)
        sf = sf * part;

    for (auto& [root, mult] : rational_roots(sf)) {
        if (a == root) throw BadPrime("a is a branch point");
        long m = intersection_mult(a, root, P);
        if (m <= 0) continue;
        InertiaData data;
        data.branch_point = root;
        data.cycle_type = fiber_type_over(f, root);
        data.order = data.cycle_type->order();
        RamificationPrediction pred;
        pred.intersection_multiplicity = m;
        pred.predicted_index = data.order / std::gcd(data.order, m);
        pred.inertia = std::move(data);
        out.push_back(std::move(pred));
    }
    // irrational branch points, one entry per irreducible factor
    for (auto& [factor, mult] : q_factor(sf).factors) {
        if (factor.degree() < 2) continue;
        long m = intersection_mult(a, factor, P);
        if (m <= 0) continue;
        InertiaData data;
        data.branch_point = factor;
        data.cycle_type = std::nullopt;  // needs the root field
        data.order = 0;
        out.push_back({std::move(data), m, std::nullopt});
    }
    return out;
}

// ---- witness searches -----------------------------------------------------------

WitnessSearchResult find_valuation_witnesses(const PolyQ& f, const Rat& t,
                                             long e,
                                             const std::set<Int>& exclude,
                                             int n_max, long trial_bound,
                                             bool use_rho) {
    if (e < 2) throw ArbordynError("witness search needs e >= 2");
    if (f.degree() < 2) throw ArbordynError("witness search needs deg >= 2");
    WitnessSearchResult out;
    Rat x = t;
    for (int n = 1; n <= n_max; ++n) {
        x = f.eval(x);
        Int num = abs(Int(x.get_num()));
        auto partial = partial_factorize(num, trial_bound, use_rho);
        WitnessLevel level{n, e, partial.complete, false};
        for (auto& [prime, val] : partial.primes) {
            if (exclude.count(prime)) continue;
            level.gcd_with_e =
                std::gcd(level.gcd_with_e, static_cast<long>(val));
            if (val % e != 0)
                out.witnesses.push_back(
                    {n, prime, static_cast<long>(val), e});
        }
        level.gcd_condition_holds = (level.gcd_with_e == 1);
        out.levels.push_back(level);
    }
    return out;
}

std::vector<KernelScanReport> kernel_witness_scan(const PolyQ& f, long q,
                                                  int n_max,
                                                  long trial_bound) {
    if (f.degree() < 2) throw ArbordynError("kernel scan needs deg >= 2");
    if (!is_prime(Int(q))) throw ArbordynError("q must be prime");
    dynamics::CriticalReport crit = dynamics::critical_structure(f);
    GoodPrimeFilter filter(f);
    bool block_mode = (f.degree() % q == 0);

    std::vector<KernelScanReport> reports;
    for (auto& rc : crit.rational_points) {
        if (rc.mult_under_f % q != 0) continue;
        if (!rc.orbit.is_wandering()) continue;
        KernelScanReport rep;
        rep.critical_point = rc.point;
        rep.critical_value = f.eval(rc.point);
        rep.multiplicity = rc.mult_under_f;
        rep.block_stabilizer_mode = block_mode;
        rep.fiber_type = fiber_type_over(f, rep.critical_value);
        rep.inertia_order = rep.fiber_type.order();

        std::set<Int> used;
        Rat x = rep.critical_value;  // f^(n-1)(v) for n = 1 is v itself
        for (int n = 1; n <= n_max; ++n) {
            if (n > 1) x = f.eval(x);
            Int num = abs(Int(x.get_num()));
            for (auto& [prime, val] :
                 partial_factorize(num, trial_bound, true).primes) {
                if (valuation(x, prime) <= 0) continue;  // denominator met it
                if (used.count(prime)) continue;
                if (val % q == 0) continue;  // need gcd(nu, q) = 1
                if (!filter.good(prime)) continue;
                used.insert(prime);
                long idx = rep.inertia_order /
                           std::gcd(rep.inertia_order, static_cast<long>(val));
                rep.witnesses.push_back(
                    {n, prime, static_cast<long>(val), idx});
            }
        }
        std::sort(rep.witnesses.begin(), rep.witnesses.end(),
                  [](const KernelWitness& a, const KernelWitness& b) {
                      return a.n != b.n ? a.n < b.n : a.p < b.p;
                  });
        reports.push_back(std::move(rep));
    }
    if (reports.empty())
        throw NoWanderingWitness(
            "no wandering rational critical point with multiplicity "
            "divisible by q");
    return reports;
}

}  // namespace arbordyn::stability

#include "arbordyn/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace arbordyn::dynamics {

using exactalg::poly_compose;
using exactalg::poly_div_exact;
using exactalg::poly_divrem;
using exactalg::poly_gcd;
using exactalg::q_factor;
using exactalg::rational_roots;
using exactalg::squarefree_decomposition;

bool EscapeBound::certifies(const Rat& x) const {
    Int h = height(x);
    Int pow;
    mpz_pow_ui(pow.get_mpz_t(), h.get_mpz_t(),
               static_cast<unsigned long>(exponent));
    return pow > threshold;
}

double EscapeBound::log_value() const {
    // log(threshold)/exponent via mpz -> double with exponent extraction
    long exp2;
    double mant = mpz_get_d_2exp(&exp2, threshold.get_mpz_t());
    double logm = std::log(mant) + static_cast<double>(exp2) * std::log(2.0);
    return std::max(0.0, logm / exponent);
}

// Height drop bound: writing f(m/n) = F(m,n) / (L n^d) with integer
// coefficients c_i = L a_i, one gets h(f(x)) >= d h(x) - log M for
//   M = max(2 L A^(d-1), K^d A^d),   A = |c_d|, S = sum_{i<d} |c_i|,
//   K = max(1, ceil(2S/A)),
// and M = L A^d when f is a monomial (S = 0).
EscapeBound escape_height(const PolyQ& f) {
    int d = f.degree();
    if (d < 2) throw ArbordynError("escape_height needs deg >= 2");
    Int L = 1;
    for (const Rat& c : f.coeffs()) L = lcm(L, Int(c.get_den()));
    Int A = abs(Int(f.leading() * L));
    Int S = 0;
    for (int i = 0; i < d; ++i) S += abs(Int(f.coeff(i) * L));

    EscapeBound bound;
    bound.exponent = d - 1;
    if (S == 0) {
        bound.threshold = L * A;
        return bound;
    }
    Int K = (2 * S + A - 1) / A;
    if (K < 1) K = 1;
    Int m1 = 2 * L;
    for (int i = 0; i < d - 1; ++i) m1 *= A;
    Int m2 = 1;
    for (int i = 0; i < d; ++i) m2 *= K * A;
    bound.threshold = std::max(m1, m2);
    return bound;
}

int multiplicity_under(const PolyQ& f, const Rat& alpha) {
    if (f.degree() < 2) throw ArbordynError("multiplicity needs deg >= 2");
    PolyQ shifted = poly_compose(f - PolyQ::constant(f.eval(alpha)),
                                 PolyQ({alpha, Rat(1)}));
    int mult = 0;
    while (mult <= shifted.degree() && shifted.coeff(mult) == 0) ++mult;
    return mult;
}

OrbitRecord orbit_classify(const PolyQ& f, const Rat& x0, int max_steps) {
    if (f.degree() < 2) throw ArbordynError("orbit_classify needs deg >= 2");
    EscapeBound bound = escape_height(f);
    OrbitRecord rec;
    rec.start = x0;
    std::map<Rat, int> seen;
    Rat x = x0;
    for (int step = 0; step <= max_steps; ++step) {
        auto it = seen.find(x);
        if (it != seen.end()) {
            rec.status = Preperiodic{it->second,
                                     static_cast<int>(seen.size()) -
                                         it->second};
            return rec;
        }
        rec.trajectory.push_back(x);
        seen.emplace(x, step);
        if (bound.certifies(x)) {
            rec.status = Wandering{step};
            return rec;
        }
        if (step == max_steps) break;
        x = f.eval(x);
    }
    rec.status = Undetermined{max_steps};
    return rec;
}

PolyQ linear_shift(const PolyQ& f, const Rat& a) {
    return poly_compose(f, PolyQ({a, Rat(1)})) - PolyQ::constant(a);
}

namespace {

wreath::CycleType fiber_cycle_type(const PolyQ& f, const Rat& v) {
    std::vector<long> parts;
    for (auto& [g, mult] : squarefree_decomposition(f - PolyQ::constant(v))
                               .parts)
        for (int i = 0; i < g.degree(); ++i) parts.push_back(mult);
    return wreath::CycleType(std::move(parts));
}

}  // namespace

CriticalReport critical_structure(const PolyQ& f, int max_steps) {
    if (f.degree() < 2) throw ArbordynError("critical_structure needs deg >= 2");
    CriticalReport rep;
    rep.degree = f.degree();
    PolyQ fp = f.derivative();

    for (auto& [alpha, mult] : rational_roots(fp)) {
        RationalCritical rc{alpha, mult + 1,
                            orbit_classify(f, alpha, max_steps)};
        rep.rational_points.push_back(std::move(rc));
    }
    for (auto& [h, mult] : q_factor(fp).factors) {
        if (h.degree() < 2) continue;
        IrrationalCritical ic{h, mult, std::nullopt};
        PolyQ residue = poly_divrem(f, h).second;
        if (residue.is_constant())
            ic.rational_value = residue.is_zero() ? Rat(0) : residue.coeff(0);
        rep.irrational_part.push_back(std::move(ic));
    }

    std::vector<Rat> values;
    for (auto& rc : rep.rational_points) values.push_back(f.eval(rc.point));
    for (auto& ic : rep.irrational_part)
        if (ic.rational_value) values.push_back(*ic.rational_value);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    for (const Rat& v : values)
        rep.critical_values.push_back({v, fiber_cycle_type(f, v)});
    return rep;
}

PcfStatus classify_pcf(const PolyQ& f, int max_steps) {
    CriticalReport rep = critical_structure(f, max_steps);
    bool undetermined = false;
    for (auto& rc : rep.rational_points) {
        if (rc.orbit.is_wandering()) return PcfStatus::PostcriticallyInfinite;
        if (!rc.orbit.is_preperiodic()) undetermined = true;
    }
    for (auto& ic : rep.irrational_part) {
        if (ic.rational_value) {
            OrbitRecord orb = orbit_classify(f, *ic.rational_value, max_steps);
            if (orb.is_wandering()) return PcfStatus::PostcriticallyInfinite;
            if (!orb.is_preperiodic()) undetermined = true;
        } else {
            undetermined = true;
        }
    }
    // PCF only from fully tracked rational critical data
    if (!rep.irrational_part.empty() || undetermined)
        return PcfStatus::Undetermined;
    return PcfStatus::PCF;
}

const char* criterion_name(Criterion c) {
    switch (c) {
        case Criterion::CoprimeMultiplicity: return "coprime_multiplicity";
        case Criterion::PrimeDegree: return "prime_degree";
        case Criterion::EvenSquarefreePart: return "even_squarefree_part";
        case Criterion::PowerFactor: return "power_factor";
        case Criterion::ShiftedTrinomial: return "shifted_trinomial";
        case Criterion::OddPowerSeparable: return "odd_power_separable";
        case Criterion::TwoPrimePowers: return "two_prime_powers";
    }
    return "?";
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Applies: return "applies";
        case Verdict::DoesNotApply: return "does_not_apply";
        case Verdict::Undetermined: return "undetermined";
    }
    return "?";
}

const CriterionResult& HypothesisReport::operator[](Criterion c) const {
    for (auto& e : entries)
        if (e.id == c) return e;
    throw ArbordynError("criterion missing from report");
}

namespace {

std::vector<long> primes_dividing(long n) { return prime_factors_long(n); }

// first prime q | m with gcd(q, d) = 1, or 0
long coprime_prime_divisor(long m, long d) {
    for (long q : primes_dividing(m))
        if (d % q != 0) return q;
    return 0;
}

struct HypothesisContext {
    const PolyQ& f;
    int d;
    int max_steps;
    const CriticalReport& crit;
    std::map<Rat, OrbitRecord> orbit_cache;

    const OrbitRecord& orbit(const Rat& x) {
        auto it = orbit_cache.find(x);
        if (it == orbit_cache.end())
            it = orbit_cache.emplace(x, orbit_classify(f, x, max_steps)).first;
        return it->second;
    }
};

nlohmann::json rat_json(const Rat& x) { return x.get_str(); }

// merge an orbit-dependent candidate into a running verdict
void fold_orbit(Verdict& v, const OrbitRecord& orb) {
    if (!orb.is_preperiodic() && !orb.is_wandering())
        v = Verdict::Undetermined;
}

CriterionResult check_coprime_multiplicity(HypothesisContext& ctx) {
    CriterionResult res{Criterion::CoprimeMultiplicity,
                        Verdict::DoesNotApply, {}};
    for (auto& rc : ctx.crit.rational_points) {
        long q = coprime_prime_divisor(rc.mult_under_f, ctx.d);
        if (q == 0) continue;
        if (rc.orbit.is_wandering()) {
            res.verdict = Verdict::Applies;
            res.witness = {{"critical_point", rat_json(rc.point)},
                           {"multiplicity", rc.mult_under_f},
                           {"prime", q}};
            return res;
        }
        fold_orbit(res.verdict, rc.orbit);
    }
    for (auto& ic : ctx.crit.irrational_part) {
        // multiplicity is known; wandering status of irrational points is not
        if (coprime_prime_divisor(ic.mult_in_derivative + 1, ctx.d) != 0)
            res.verdict = Verdict::Undetermined;
    }
    return res;
}

CriterionResult check_prime_degree(HypothesisContext& ctx) {
    CriterionResult res{Criterion::PrimeDegree, Verdict::DoesNotApply, {}};
    if (!is_prime(Int(ctx.d))) return res;
    switch (classify_pcf(ctx.f, ctx.max_steps)) {
        case PcfStatus::PostcriticallyInfinite: {
            res.verdict = Verdict::Applies;
            bool monomial_shape =
                ctx.crit.irrational_part.empty() &&
                ctx.crit.rational_points.size() == 1 &&
                ctx.crit.rational_points[0].mult_under_f == ctx.d;
            res.witness = {{"degree", ctx.d},
                           {"route", monomial_shape ? "unicritical"
                                                    : "coprime_multiplicity"}};
            break;
        }
        case PcfStatus::PCF: res.verdict = Verdict::DoesNotApply; break;
        case PcfStatus::Undetermined: res.verdict = Verdict::Undetermined;
    }
    return res;
}

CriterionResult check_even_squarefree_part(HypothesisContext& ctx) {
    CriterionResult res{Criterion::EvenSquarefreePart,
                        Verdict::DoesNotApply, {}};
    auto sf = squarefree_decomposition(ctx.f.derivative());
    PolyQ g = PolyQ::constant(1);
    for (auto& [part, mult] : sf.parts)
        if (mult % 2 == 1) g = g * part;
    if (g.degree() <= 0 || g.degree() % 2 != 0) return res;
    res.witness = {{"odd_part_degree", g.degree()}};
    int rational_root_count = 0;
    for (auto& [root, mult] : rational_roots(g)) {
        ++rational_root_count;
        const OrbitRecord& orb = ctx.orbit(root);
        if (orb.is_wandering()) {
            res.verdict = Verdict::Applies;
            res.witness["wandering_root"] = rat_json(root);
            return res;
        }
        fold_orbit(res.verdict, orb);
    }
    if (rational_root_count < g.degree()) res.verdict = Verdict::Undetermined;
    return res;
}

CriterionResult check_power_factor(HypothesisContext& ctx) {
    CriterionResult res{Criterion::PowerFactor, Verdict::DoesNotApply, {}};
    for (auto& rc : ctx.crit.rational_points) {
        int k = rc.mult_under_f;
        int deg_g = ctx.d - k;
        long q = 0;
        for (long qq : primes_dividing(k))
            if (deg_g > 0 && deg_g % qq != 0) {
                q = qq;
                break;
            }
        if (q == 0) continue;
        if (rc.orbit.is_wandering()) {
            res.verdict = Verdict::Applies;
            res.witness = {{"a", rat_json(rc.point)},
                           {"k", k},
                           {"prime", q},
                           {"cofactor_degree", deg_g}};
            return res;
        }
        fold_orbit(res.verdict, rc.orbit);
    }
    return res;
}

CriterionResult check_shifted_trinomial(HypothesisContext& ctx) {
    CriterionResult res{Criterion::ShiftedTrinomial, Verdict::DoesNotApply,
                        {}};
    if (ctx.d % 2 == 0) return res;
    for (auto& rc : ctx.crit.rational_points) {
        PolyQ shifted = poly_compose(ctx.f, PolyQ({rc.point, Rat(1)}));
        int k = 0;
        bool shape = true;
        for (int i = 1; i < ctx.d && shape; ++i) {
            if (shifted.coeff(i) == 0) continue;
            if (k == 0)
                k = i;
            else
                shape = false;
        }
        if (!shape || k <= 1 || std::gcd(k, ctx.d) != 1) continue;
        Rat r = shifted.leading(), s = shifted.coeff(k);
        res.witness = {{"a", rat_json(rc.point)},
                       {"k", k},
                       {"d", ctx.d},
                       {"r", rat_json(r)},
                       {"s", rat_json(s)}};
        // candidate points: a itself and the rational (d-k)-th roots of
        // -k s / (d r), shifted by a
        std::vector<Rat> gammas{rc.point};
        Rat w = Rat(-k) * s / (Rat(ctx.d) * r);
        PolyQ root_poly = PolyQ::monomial(Rat(1), ctx.d - k) -
                          PolyQ::constant(w);
        int rational_gamma = 1;
        for (auto& [y, mult] : rational_roots(root_poly)) {
            gammas.push_back(rc.point + y);
            ++rational_gamma;
        }
        Verdict local = Verdict::DoesNotApply;
        for (const Rat& gamma : gammas) {
            const OrbitRecord& orb = ctx.orbit(gamma);
            if (orb.is_wandering()) {
                res.verdict = Verdict::Applies;
                res.witness["wandering_point"] = rat_json(gamma);
                return res;
            }
            fold_orbit(local, orb);
        }
        if (rational_gamma < 1 + (ctx.d - k)) local = Verdict::Undetermined;
        if (local == Verdict::Undetermined)
            res.verdict = Verdict::Undetermined;
    }
    return res;
}

CriterionResult check_odd_power_separable(HypothesisContext& ctx) {
    CriterionResult res{Criterion::OddPowerSeparable, Verdict::DoesNotApply,
                        {}};
    for (auto& rc : ctx.crit.rational_points) {
        int k = rc.mult_under_f;
        if (k % 2 == 0 || ctx.d % k == 0) continue;
        Rat b = ctx.f.eval(rc.point);
        PolyQ num = ctx.f - PolyQ::constant(b);
        PolyQ pw = exactalg::poly_pow(PolyQ({-rc.point, Rat(1)}), k);
        PolyQ g = poly_div_exact(num, pw);
        if (poly_gcd(g, g.derivative()).degree() != 0) continue;  // separable
        if (rc.orbit.is_wandering()) {
            res.verdict = Verdict::Applies;
            res.witness = {{"a", rat_json(rc.point)},
                           {"k", k},
                           {"b", rat_json(b)},
                           {"cofactor_degree", g.degree()}};
            return res;
        }
        fold_orbit(res.verdict, rc.orbit);
    }
    return res;
}

CriterionResult check_two_prime_powers(HypothesisContext& ctx) {
    CriterionResult res{Criterion::TwoPrimePowers, Verdict::DoesNotApply, {}};
    const auto& pts = ctx.crit.rational_points;
    for (size_t i = 0; i < pts.size(); ++i) {
        for (size_t j = 0; j < pts.size(); ++j) {
            if (i == j) continue;
            int k = pts[i].mult_under_f, m = pts[j].mult_under_f;
            if (k > m - 2) continue;
            if (!is_prime(Int(k)) || !is_prime(Int(m))) continue;
            Rat c = ctx.f.eval(pts[i].point);
            if (ctx.f.eval(pts[j].point) != c) continue;
            PolyQ num = ctx.f - PolyQ::constant(c);
            PolyQ pw = exactalg::poly_pow(PolyQ({-pts[i].point, Rat(1)}), k) *
                       exactalg::poly_pow(PolyQ({-pts[j].point, Rat(1)}), m);
            PolyQ g = poly_div_exact(num, pw);
            if (g.degree() > 0 &&
                poly_gcd(g, g.derivative()).degree() != 0)
                continue;
            if (g.eval(pts[i].point) == 0 || g.eval(pts[j].point) == 0)
                continue;
            const OrbitRecord& orb = ctx.orbit(c);
            if (orb.is_wandering()) {
                res.verdict = Verdict::Applies;
                res.witness = {{"a", rat_json(pts[i].point)},
                               {"b", rat_json(pts[j].point)},
                               {"k", k},
                               {"m", m},
                               {"c", rat_json(c)}};
                return res;
            }
            fold_orbit(res.verdict, orb);
        }
    }
    return res;
}

}  // namespace

HypothesisReport check_hypotheses(const PolyQ& f, int max_steps) {
    if (f.degree() < 2) throw ArbordynError("check_hypotheses needs deg >= 2");
    CriticalReport crit = critical_structure(f, max_steps);
    HypothesisContext ctx{f, f.degree(), max_steps, crit, {}};
    HypothesisReport rep;
    rep.entries.push_back(check_coprime_multiplicity(ctx));
    rep.entries.push_back(check_prime_degree(ctx));
    rep.entries.push_back(check_even_squarefree_part(ctx));
    rep.entries.push_back(check_power_factor(ctx));
    rep.entries.push_back(check_shifted_trinomial(ctx));
    rep.entries.push_back(check_odd_power_separable(ctx));
    rep.entries.push_back(check_two_prime_powers(ctx));
    return rep;
}

}  // namespace arbordyn::dynamics

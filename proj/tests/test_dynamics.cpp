#include <random>

#include "arbordyn/dynamics.hpp"
#include "doctest.h"

using namespace arbordyn;
using namespace arbordyn::dynamics;
using exactalg::PolyQ;
using exactalg::poly_compose;
using exactalg::poly_iterate;
using exactalg::poly_pow;

namespace {

PolyQ make_poly(std::initializer_list<long> coeffs_low_first) {
    std::vector<Rat> c;
    for (long v : coeffs_low_first) c.emplace_back(v);
    return PolyQ(std::move(c));
}

const PolyQ kOneMinusCube = make_poly({1, 0, 0, -1});
const PolyQ kSquarePlusOne = make_poly({1, 0, 1});
const PolyQ kDickson = make_poly({0, -3, 0, 1});  // X^3 - 3X

}  // namespace

TEST_SUITE_BEGIN("dynamics");

TEST_CASE("multiplicity_under") {
    CHECK(multiplicity_under(kDickson, Rat(1)) == 2);
    CHECK(multiplicity_under(make_poly({0, 0, 0, 0, 1}), Rat(0)) == 4);
    CHECK(multiplicity_under(kSquarePlusOne, Rat(5)) == 1);
}

TEST_CASE("multiplicity matches derivative multiplicity plus one") {
    std::mt19937_64 rng(5);
    int seen = 0;
    for (int trial = 0; trial < 100 && seen < 100; ++trial) {
        std::vector<Rat> c(4 + rng() % 2);
        for (auto& v : c) v = Rat(long(rng() % 9) - 4);
        if (c.back() == 0) c.back() = 1;
        PolyQ f(c);
        if (f.degree() < 3) continue;
        for (auto& [alpha, mult] : exactalg::rational_roots(f.derivative())) {
            CHECK(multiplicity_under(f, alpha) == mult + 1);
            ++seen;
        }
    }
}

TEST_CASE("escape bound is sound near the threshold") {
    std::mt19937_64 rng(9);
    for (const PolyQ& f : {kSquarePlusOne, kDickson, make_poly({2, -6, 5, 1}),
                           PolyQ({Rat(1, 3), Rat(2), Rat(0), Rat(0), Rat(5)})}) {
        EscapeBound bound = escape_height(f);
        Int hmin;
        mpz_root(hmin.get_mpz_t(), bound.threshold.get_mpz_t(),
                 bound.exponent);
        hmin += 2;
        for (int i = 0; i < 2500; ++i) {
            // heights in (threshold, threshold * e^5]
            Int span = hmin * 147;
            Int num = hmin + Int(rng() % 1000) * span / 1000;
            Int den = 1 + Int(rng() % 1000) * num / 1001;
            Rat x(num, den);
            x.canonicalize();
            if (rng() % 2) x = -x;
            if (!bound.certifies(x)) continue;
            CHECK(height(f.eval(x)) > height(x));
        }
    }
}

TEST_CASE("escape bound for pure powers is zero") {
    EscapeBound b = escape_height(make_poly({0, 0, 1}));
    CHECK(b.threshold == 1);
    CHECK(b.log_value() == 0.0);
}

TEST_CASE("orbit classification examples") {
    auto o1 = orbit_classify(kOneMinusCube, Rat(0));
    REQUIRE(o1.is_preperiodic());
    CHECK(std::get<Preperiodic>(o1.status) == Preperiodic{0, 2});

    auto o2 = orbit_classify(kSquarePlusOne, Rat(0));
    REQUIRE(o2.is_wandering());
    CHECK(std::get<Wandering>(o2.status).certified_at_step <= 6);

    auto o3 = orbit_classify(kDickson, Rat(-2));
    REQUIRE(o3.is_preperiodic());
    CHECK(std::get<Preperiodic>(o3.status) == Preperiodic{0, 1});
}

TEST_CASE("wandering certification is sound: heights keep increasing") {
    auto rec = orbit_classify(kSquarePlusOne, Rat(0));
    REQUIRE(rec.is_wandering());
    Rat x = rec.trajectory.back();
    Int h = height(x);
    for (int i = 0; i < 20; ++i) {
        x = kSquarePlusOne.eval(x);
        Int h2 = height(x);
        CHECK(h2 > h);
        h = h2;
    }
}

TEST_CASE("orbit corresponds under linear shift") {
    std::mt19937_64 rng(13);
    // escape bounds are coefficient-dependent, so the certification step can
    // differ between f and its conjugate; escalate until both sides resolve
    auto resolve = [](const PolyQ& g, const Rat& y) {
        OrbitRecord rec;
        for (int steps : {24, 96, 384, 1536}) {
            rec = orbit_classify(g, y, steps);
            if (!std::holds_alternative<Undetermined>(rec.status)) break;
        }
        return rec;
    };
    int resolved = 0;
    for (int trial = 0; trial < 60; ++trial) {
        std::vector<Rat> c(3 + rng() % 2);
        for (auto& v : c) v = Rat(long(rng() % 7) - 3);
        if (c.back() == 0) c.back() = 1;
        PolyQ f(c);
        if (f.degree() < 2) continue;
        Rat a(long(rng() % 7) - 3);
        Rat x0(long(rng() % 5) - 2);
        auto direct = resolve(f, x0);
        auto shifted = resolve(linear_shift(f, a), x0 - a);
        if (std::holds_alternative<Undetermined>(direct.status) ||
            std::holds_alternative<Undetermined>(shifted.status))
            continue;
        CHECK(direct.status.index() == shifted.status.index());
        if (direct.is_preperiodic()) {
            CHECK(std::get<Preperiodic>(direct.status) ==
                  std::get<Preperiodic>(shifted.status));
        }
        ++resolved;
    }
    CHECK(resolved >= 40);
}

TEST_CASE("linear shift identities") {
    CHECK(linear_shift(make_poly({0, 0, 1}), Rat(0)) == make_poly({0, 0, 1}));
    CHECK(linear_shift(kSquarePlusOne, Rat(1)) == make_poly({1, 2, 1}));
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<Rat> c(3 + rng() % 2);
        for (auto& v : c) v = Rat(long(rng() % 7) - 3);
        if (c.back() == 0) c.back() = 1;
        PolyQ f(c);
        if (f.degree() < 1) continue;
        Rat a(long(rng() % 9) - 4);
        CHECK(linear_shift(linear_shift(f, a), -a) == f);
        // f_a^(2) = f^(2)(X+a) - a
        PolyQ lhs = poly_iterate(linear_shift(f, a), 2, 1000000);
        PolyQ rhs = poly_compose(poly_iterate(f, 2, 1000000),
                                 PolyQ({a, Rat(1)})) -
                    PolyQ::constant(a);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("critical structure examples") {
    auto r1 = critical_structure(kDickson);
    REQUIRE(r1.rational_points.size() == 2);
    CHECK(r1.rational_points[0].point == -1);
    CHECK(r1.rational_points[0].mult_under_f == 2);
    CHECK(r1.rational_points[1].point == 1);
    CHECK(r1.rational_points[1].mult_under_f == 2);
    CHECK(r1.irrational_part.empty());
    REQUIRE(r1.critical_values.size() == 2);
    CHECK(r1.critical_values[0].value == -2);
    CHECK(r1.critical_values[0].fiber_type ==
          wreath::CycleType({2, 1}));
    CHECK(r1.critical_values[1].value == 2);

    auto r2 = critical_structure(kOneMinusCube);
    REQUIRE(r2.rational_points.size() == 1);
    CHECK(r2.rational_points[0].point == 0);
    CHECK(r2.rational_points[0].mult_under_f == 3);
    REQUIRE(r2.critical_values.size() == 1);
    CHECK(r2.critical_values[0].value == 1);
    CHECK(r2.critical_values[0].fiber_type == wreath::CycleType({3}));

    auto r3 = critical_structure(kSquarePlusOne);
    REQUIRE(r3.rational_points.size() == 1);
    CHECK(r3.rational_points[0].mult_under_f == 2);
    CHECK(r3.critical_values[0].value == 1);
    CHECK(r3.critical_values[0].fiber_type == wreath::CycleType({2}));
}

TEST_CASE("fiber types sum to the degree") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<Rat> c(3 + rng() % 3);
        for (auto& v : c) v = Rat(long(rng() % 9) - 4);
        if (c.back() == 0) c.back() = 1;
        PolyQ f(c);
        if (f.degree() < 2) continue;
        auto rep = critical_structure(f);
        for (auto& cv : rep.critical_values)
            CHECK(cv.fiber_type.degree() == f.degree());
        // a non-critical value has fiber type (1^deg)
        Rat v(1000003);
        auto type = wreath::CycleType(
            std::vector<long>(f.degree(), 1));
        bool is_critical_value = false;
        for (auto& cv : rep.critical_values)
            if (cv.value == v) is_critical_value = true;
        if (!is_critical_value) {
            auto sf = exactalg::squarefree_decomposition(
                f - PolyQ::constant(v));
            std::vector<long> parts;
            for (auto& [g, m] : sf.parts)
                for (int i = 0; i < g.degree(); ++i) parts.push_back(m);
            CHECK(wreath::CycleType(parts) == type);
        }
    }
}

TEST_CASE("critical multiplicity bookkeeping covers deg f - 1") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<Rat> c(4 + rng() % 2);
        for (auto& v : c) v = Rat(long(rng() % 9) - 4);
        if (c.back() == 0) c.back() = 1;
        PolyQ f(c);
        if (f.degree() < 2) continue;
        auto rep = critical_structure(f);
        long total = 0;
        for (auto& rc : rep.rational_points) total += rc.mult_under_f - 1;
        for (auto& ic : rep.irrational_part)
            total += ic.mult_in_derivative * ic.min_poly.degree();
        CHECK(total == f.degree() - 1);
    }
}

TEST_CASE("pcf classification") {
    CHECK(classify_pcf(kDickson) == PcfStatus::PCF);
    CHECK(classify_pcf(make_poly({-2, 0, 1})) == PcfStatus::PCF);
    CHECK(classify_pcf(make_poly({0, 0, 1})) == PcfStatus::PCF);
    CHECK(classify_pcf(kOneMinusCube) == PcfStatus::PCF);
    CHECK(classify_pcf(kSquarePlusOne) ==
          PcfStatus::PostcriticallyInfinite);
    CHECK(classify_pcf(make_poly({1, 1, 1})) ==
          PcfStatus::PostcriticallyInfinite);
    CHECK(classify_pcf(make_poly({0, 1, 0, 1})) == PcfStatus::Undetermined);
}

TEST_CASE("hypothesis report for X^2+1") {
    auto rep = check_hypotheses(kSquarePlusOne);
    CHECK(rep[Criterion::CoprimeMultiplicity].verdict ==
          Verdict::DoesNotApply);
    CHECK(rep[Criterion::PrimeDegree].verdict == Verdict::Applies);
    CHECK(rep[Criterion::PrimeDegree].witness["route"] == "unicritical");
}

TEST_CASE("hypothesis report for the Dickson cubic (PCF)") {
    auto rep = check_hypotheses(kDickson);
    for (auto& entry : rep.entries)
        CHECK(entry.verdict != Verdict::Applies);
    CHECK(rep[Criterion::PrimeDegree].verdict == Verdict::DoesNotApply);
    CHECK(rep[Criterion::CoprimeMultiplicity].verdict ==
          Verdict::DoesNotApply);
}

TEST_CASE("hypothesis report for (X^2-2)(X-1)^3 + 5") {
    PolyQ f = make_poly({-2, 0, 1}) * poly_pow(make_poly({-1, 1}), 3) +
              PolyQ::constant(Rat(5));
    auto rep = check_hypotheses(f);
    auto& main = rep[Criterion::CoprimeMultiplicity];
    CHECK(main.verdict == Verdict::Applies);
    CHECK(main.witness["prime"] == 3);
    auto& odd = rep[Criterion::OddPowerSeparable];
    CHECK(odd.verdict == Verdict::Applies);
    CHECK(odd.witness["k"] == 3);
    CHECK(odd.witness["a"] == "1");
    CHECK(rep[Criterion::PowerFactor].verdict == Verdict::Applies);
    CHECK(rep[Criterion::ShiftedTrinomial].verdict != Verdict::Applies);
    // odd-multiplicity part of f' is an irreducible quadratic
    CHECK(rep[Criterion::EvenSquarefreePart].verdict ==
          Verdict::Undetermined);
}

TEST_CASE("hypothesis report for a trinomial shape") {
    // f = 2(X-1)^5 + 3(X-1)^2 + 4: d = 5 odd, k = 2 coprime, gamma analysis
    PolyQ f = Rat(2) * poly_pow(make_poly({-1, 1}), 5) +
              Rat(3) * poly_pow(make_poly({-1, 1}), 2) +
              PolyQ::constant(Rat(4));
    auto rep = check_hypotheses(f);
    auto& tri = rep[Criterion::ShiftedTrinomial];
    // gamma_0 = 1 has f(1) = 4, orbit 4 -> 2*3^5+3*9+4 = 517 -> ... wanders
    CHECK(tri.verdict == Verdict::Applies);
    CHECK(tri.witness["k"] == 2);
}

TEST_CASE("hypothesis report for two prime-power factors") {
    // f = (X-1)^3 (X+1)^5 + 3: k=3, m=5 prime, k <= m-2, c = 3 wandering
    PolyQ f = poly_pow(make_poly({-1, 1}), 3) *
                  poly_pow(make_poly({1, 1}), 5) +
              PolyQ::constant(Rat(3));
    auto rep = check_hypotheses(f);
    auto& two = rep[Criterion::TwoPrimePowers];
    CHECK(two.verdict == Verdict::Applies);
    CHECK(two.witness["k"] == 3);
    CHECK(two.witness["m"] == 5);
}

TEST_SUITE_END();

// Forward orbits over Q, wandering/preperiodic certification, critical-point
// structure, and recognition of the density-zero criteria hypotheses.
#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "arbordyn/cycle_type.hpp"
#include "arbordyn/factor.hpp"
#include "arbordyn/poly_q.hpp"
#include "json.hpp"

namespace arbordyn::dynamics {

using exactalg::PolyQ;

struct Preperiodic {
    int tail_length;
    int cycle_length;
    bool operator==(const Preperiodic&) const = default;
};
struct Wandering {
    int certified_at_step;
    bool operator==(const Wandering&) const = default;
};
struct Undetermined {
    int steps_used;
    bool operator==(const Undetermined&) const = default;
};
using OrbitStatus = std::variant<Preperiodic, Wandering, Undetermined>;

struct OrbitRecord {
    Rat start;
    std::vector<Rat> trajectory;  // distinct states visited, starting at start
    OrbitStatus status;

    bool is_wandering() const {
        return std::holds_alternative<Wandering>(status);
    }
    bool is_preperiodic() const {
        return std::holds_alternative<Preperiodic>(status);
    }
};

// Escape certificate: once height(x)^exponent > threshold, heights increase
// strictly forever, so the orbit cannot repeat.
struct EscapeBound {
    Int threshold;  // integer M with h(f(x)) >= d*h(x) - log M
    int exponent;   // d - 1
    bool certifies(const Rat& x) const;
    double log_value() const;  // log(M)/(d-1), for reporting
};

EscapeBound escape_height(const PolyQ& f);

// Multiplicity of alpha as a root of f(X) - f(alpha); >= 2 iff critical.
int multiplicity_under(const PolyQ& f, const Rat& alpha);

OrbitRecord orbit_classify(const PolyQ& f, const Rat& x0, int max_steps = 64);

// The conjugate (X-a) o f o (X+a); iterating it tracks f shifted by a.
PolyQ linear_shift(const PolyQ& f, const Rat& a);

struct RationalCritical {
    Rat point;
    int mult_under_f;  // multiplicity in f' plus one
    OrbitRecord orbit;
};
struct IrrationalCritical {
    PolyQ min_poly;        // irreducible factor of f' of degree >= 2
    int mult_in_derivative;
    std::optional<Rat> rational_value;  // f mod min_poly when constant
};
struct RationalCriticalValue {
    Rat value;
    wreath::CycleType fiber_type;  // multiplicities of the preimages
};
struct CriticalReport {
    int degree = 0;
    std::vector<RationalCritical> rational_points;
    std::vector<IrrationalCritical> irrational_part;
    std::vector<RationalCriticalValue> critical_values;
};

CriticalReport critical_structure(const PolyQ& f, int max_steps = 64);

enum class PcfStatus { PCF, PostcriticallyInfinite, Undetermined };
PcfStatus classify_pcf(const PolyQ& f, int max_steps = 64);

// Density-zero criteria, named by the hypothesis shape they recognize.
enum class Criterion {
    CoprimeMultiplicity,  // wandering critical point, multiplicity divisible
                          // by a prime coprime to deg f
    PrimeDegree,          // postcritically infinite of prime degree
    EvenSquarefreePart,   // odd-multiplicity part of f' of even degree with a
                          // wandering root
    PowerFactor,          // g(X)(X-a)^k + b, q | k coprime to deg g
    ShiftedTrinomial,     // r(X-a)^d + s(X-a)^k + b, d odd, gcd(k,d)=1
    OddPowerSeparable,    // g separable, k odd not dividing deg f
    TwoPrimePowers,       // (X-a)^k (X-b)^m g + c, k,m prime, k <= m-2
};
enum class Verdict { Applies, DoesNotApply, Undetermined };

const char* criterion_name(Criterion c);
const char* verdict_name(Verdict v);

struct CriterionResult {
    Criterion id;
    Verdict verdict;
    nlohmann::json witness;  // structured, re-checkable data when Applies
};
struct HypothesisReport {
    std::vector<CriterionResult> entries;
    const CriterionResult& operator[](Criterion c) const;
};

HypothesisReport check_hypotheses(const PolyQ& f, int max_steps = 64);

}  // namespace arbordyn::dynamics

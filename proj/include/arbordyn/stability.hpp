// Mod-p stability engines: the depth-bounded polynomial test, the exact
// terminating unicritical test, the good-prime filter and ramification
// predictor for specializations of f(X) - t, and the valuation-witness
// searches over dynamical sequences.
#pragma once

#include <optional>
#include <set>
#include <variant>
#include <vector>

#include "arbordyn/cycle_type.hpp"
#include "arbordyn/factor.hpp"
#include "arbordyn/poly_q.hpp"

namespace arbordyn::stability {

using exactalg::PolyQ;

enum class FailReason { Reducible, DegreeDrop, Undefined };

struct StabilityVerdict {
    enum class Mode { DepthBounded, ExactUnicritical };
    enum class Status { StableUpTo, StableExact, UnstableAt };

    Mode mode = Mode::DepthBounded;
    Status status = Status::StableUpTo;
    int depth = 0;  // N for StableUpTo, the failing level for UnstableAt
    FailReason reason = FailReason::Reducible;     // when UnstableAt
    std::optional<long> orbit_period_mod_p;        // exact mode

    bool stable() const { return status != Status::UnstableAt; }
    static StabilityVerdict stable_up_to(int n);
    static StabilityVerdict stable_exact(long period);
    static StabilityVerdict unstable_at(Mode m, int level, FailReason r);
};

// Test irreducibility of f^(n)(X) - a mod p for n = 1..N by explicit
// composition over F_p, with early exit.  Levels have degree deg(f)^n; the
// cap guards the blowup.
StabilityVerdict depth_stable(const PolyQ& f, const Rat& a, long p, int N,
                              long degree_cap = 65536);

// Exact stability of (uX^d + v, a) mod p, decided in finite time: congruence
// gate p = 1 mod q for all primes q | d (and mod 4 when 4 | d), then the
// residue checks (a-v)/u at level 1 and (f^(n)(v)-a)/u at level n+1, run
// until the orbit of v mod p repeats.  Failure levels match the depth
// engine's levels exactly.
StabilityVerdict unicritical_exact_stable(const Rat& u, int d, const Rat& v,
                                          const Rat& a, long p);

// Recognize f = uX^d + v; nullopt otherwise.
struct UnicriticalShape {
    Rat u;
    int d;
    Rat v;
};
std::optional<UnicriticalShape> unicritical_shape(const PolyQ& f);

// ---- specialization inertia --------------------------------------------------

enum class BadPrimeReason {
    DenominatorPrime,     // p divides a denominator of the monic model
    DiscriminantContent,  // p divides the content of Delta(t)
    RootCollision,        // mod-p reduction loses roots of Delta
    SmallPrime,           // p <= deg f (p could divide the Galois group order)
};
const char* bad_prime_reason_name(BadPrimeReason r);

// Per-polynomial invariants for the good-prime test, computed once.
class GoodPrimeFilter {
  public:
    explicit GoodPrimeFilter(const PolyQ& f);
    bool good(const Int& p) const;
    std::vector<BadPrimeReason> reasons(const Int& p) const;
    const PolyQ& discriminant_t() const { return disc_t_; }

  private:
    long degree_;
    Int denominator_lcm_;   // of the monic-normalized coefficients
    Int content_num_;       // numerator and denominator of content(Delta)
    Int content_den_;
    Int sf_leading_;        // leading coefficient of the squarefree part
    Int sf_discriminant_;   // discriminant of the squarefree part
    PolyQ disc_t_;
};

struct GoodPrimeResult {
    bool good;
    std::vector<BadPrimeReason> reasons;
};
GoodPrimeResult good_prime(const PolyQ& f, const Int& p);

// Intersection multiplicity: nu_p(a - t) for rational t, nu_p(mu(a)) for an
// irrational branch point with monic p-integral minimal polynomial mu.
long intersection_mult(const Rat& a, const Rat& t, const Int& p);
long intersection_mult(const Rat& a, const PolyQ& min_poly, const Int& p);

struct InertiaData {
    std::variant<Rat, PolyQ> branch_point;  // value, or its minimal polynomial
    std::optional<wreath::CycleType> cycle_type;  // known for rational points
    long order = 0;  // lcm of the type's parts; 0 when unknown
};
struct RamificationPrediction {
    InertiaData inertia;
    long intersection_multiplicity;
    std::optional<long> predicted_index;  // |I| / gcd(|I|, m_p)
};
// Branch points with positive intersection multiplicity at p and the
// predicted ramification indices; empty means "unramified predicted".
std::vector<RamificationPrediction> predict_ramification(const PolyQ& f,
                                                         const Rat& a,
                                                         long p);

// ---- valuation witnesses ------------------------------------------------------

struct ValuationWitness {
    int n;
    Int p;
    long valuation;
    long target_e;
};
struct WitnessLevel {
    int n;
    long gcd_with_e;   // gcd of e and all found positive valuations
    bool complete;     // numerator fully factored
    bool gcd_condition_holds;  // gcd == 1 among the found primes
};
struct WitnessSearchResult {
    std::vector<ValuationWitness> witnesses;  // mode a: nu not divisible by e
    std::vector<WitnessLevel> levels;         // mode b: per-n gcd summary
};
WitnessSearchResult find_valuation_witnesses(const PolyQ& f, const Rat& t,
                                             long e,
                                             const std::set<Int>& exclude,
                                             int n_max, long trial_bound,
                                             bool use_rho = true);

// Diagnostic scan mirroring the kernel-element construction: good primes p
// with nu_p(f^(n-1)(v)) positive and coprime to q, each used at its minimal
// n, reported with the predicted inertia order (divisible by q).
struct KernelWitness {
    int n;
    Int p;
    long valuation;
    long predicted_order;
};
struct KernelScanReport {
    Rat critical_point;
    Rat critical_value;
    int multiplicity;           // multiplicity of the point under f
    bool block_stabilizer_mode; // q shares a factor with deg f
    wreath::CycleType fiber_type;
    long inertia_order;
    std::vector<KernelWitness> witnesses;
};
std::vector<KernelScanReport> kernel_witness_scan(const PolyQ& f, long q,
                                                  int n_max,
                                                  long trial_bound);

}  // namespace arbordyn::stability

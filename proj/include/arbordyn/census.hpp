// Prime-census orchestration: prime generation, parallel per-prime stability
// evaluation with a deterministic merge, streaming density statistics, and
// comparison against predicted densities.
#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "arbordyn/stability.hpp"
#include "json.hpp"

namespace arbordyn::census {

using exactalg::PolyQ;

// All primes <= bound, ascending, by segmented sieve.  bound <= 10^8.
std::vector<long> prime_stream(long bound);

struct Scenario {
    PolyQ f;
    Rat a;
    long prime_bound = 100000;
    enum class Mode { DepthBounded, ExactUnicritical } mode = Mode::DepthBounded;
    int depth = 4;                  // DepthBounded only
    std::set<long> extra_exclusions;

    std::string mode_string() const;
};

enum class PrimeOutcome { Stable, Unstable, Undefined, DegreeDrop, Excluded };

struct PrimeRecord {
    long prime;
    PrimeOutcome outcome;
    int fail_level;               // 0 when stable/excluded
    std::optional<long> orbit_period;
};

struct CensusReport {
    Scenario scenario;
    long primes_tested = 0;  // excluded primes are reported, not counted
    long stable_count = 0;
    Rat density;             // stable_count / primes_tested
    double wilson_lo = 0, wilson_hi = 1;
    std::map<int, long> failure_histogram;  // level -> count (reducible)
    long undefined_count = 0;
    long degree_drop_count = 0;
    std::vector<long> excluded_primes;
    std::optional<Rat> expected;
    std::optional<bool> expectation_met;

    nlohmann::json to_json() const;
};

// Runs the selected engine over every non-excluded prime <= bound; the merge
// is in ascending prime order, so the report is identical for any worker
// count.  `rows` (optional) receives one record per prime, ascending.
CensusReport run_census(const Scenario& scenario, int workers = 1,
                        std::vector<PrimeRecord>* rows = nullptr);

enum class Comparison { Pass, Fail };
Comparison compare_predicted(const CensusReport& report, const Rat& predicted,
                             const Rat& tol);

// Density of depth-N-stable primes for N = 1..n_max (one engine pass at
// n_max; nonincreasing by construction).
std::vector<Rat> density_decay_profile(const PolyQ& f, const Rat& a,
                                       long prime_bound, int n_max,
                                       int workers = 1);

void write_csv(const std::vector<PrimeRecord>& rows, std::ostream& os);

}  // namespace arbordyn::census

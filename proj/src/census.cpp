#include "arbordyn/census.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <thread>

namespace arbordyn::census {

using stability::FailReason;
using stability::GoodPrimeFilter;
using stability::StabilityVerdict;

std::vector<long> prime_stream(long bound) {
    if (bound > 100000000) throw BoundTooLarge("prime bound capped at 10^8");
    std::vector<long> primes;
    if (bound < 2) return primes;
    long sqrt_bound = static_cast<long>(std::sqrt(double(bound))) + 1;
    std::vector<char> small = [&] {
        std::vector<char> is_comp(sqrt_bound + 1, 0);
        for (long i = 2; i * i <= sqrt_bound; ++i)
            if (!is_comp[i])
                for (long j = i * i; j <= sqrt_bound; j += i) is_comp[j] = 1;
        return is_comp;
    }();
    std::vector<long> base;
    for (long i = 2; i <= sqrt_bound; ++i)
        if (!small[i]) base.push_back(i);

    const long segment = 1 << 18;
    std::vector<char> sieve(segment);
    for (long low = 2; low <= bound; low += segment) {
        long high = std::min(low + segment - 1, bound);
        std::fill(sieve.begin(), sieve.end(), 1);
        for (long p : base) {
            if (p * p > high) break;
            long start = std::max(p * p, (low + p - 1) / p * p);
            for (long j = start; j <= high; j += p) sieve[j - low] = 0;
        }
        for (long i = low; i <= high; ++i)
            if (sieve[i - low] && i >= 2) primes.push_back(i);
    }
    return primes;
}

std::string Scenario::mode_string() const {
    return mode == Mode::DepthBounded
               ? "depth_bounded(" + std::to_string(depth) + ")"
               : "exact_unicritical";
}

namespace {

struct WilsonInterval {
    double lo, hi;
};

WilsonInterval wilson95(long successes, long trials) {
    if (trials == 0) return {0.0, 1.0};
    const double z = 1.959963984540054;
    double n = static_cast<double>(trials);
    double phat = static_cast<double>(successes) / n;
    double z2 = z * z;
    double denom = 1 + z2 / n;
    double center = phat + z2 / (2 * n);
    double spread =
        z * std::sqrt(phat * (1 - phat) / n + z2 / (4 * n * n));
    return {(center - spread) / denom, (center + spread) / denom};
}

PrimeRecord evaluate_prime(const Scenario& s, long p,
                           const std::optional<stability::UnicriticalShape>&
                               shape,
                           int depth, long degree_cap) {
    PrimeRecord rec{p, PrimeOutcome::Unstable, 0, std::nullopt};
    StabilityVerdict verdict =
        s.mode == Scenario::Mode::ExactUnicritical
            ? stability::unicritical_exact_stable(shape->u, shape->d,
                                                  shape->v, s.a, p)
            : stability::depth_stable(s.f, s.a, p, depth, degree_cap);
    rec.orbit_period = verdict.orbit_period_mod_p;
    if (verdict.stable()) {
        rec.outcome = PrimeOutcome::Stable;
        return rec;
    }
    rec.fail_level = verdict.depth;
    switch (verdict.reason) {
        case FailReason::Reducible: rec.outcome = PrimeOutcome::Unstable; break;
        case FailReason::DegreeDrop:
            rec.outcome = PrimeOutcome::DegreeDrop;
            break;
        case FailReason::Undefined:
            rec.outcome = PrimeOutcome::Undefined;
            break;
    }
    return rec;
}

}  // namespace

CensusReport run_census(const Scenario& scenario, int workers,
                        std::vector<PrimeRecord>* rows) {
    CensusReport report;
    report.scenario = scenario;
    if (scenario.f.degree() < 2)
        throw ArbordynError("census needs deg f >= 2");

    std::optional<stability::UnicriticalShape> shape;
    if (scenario.mode == Scenario::Mode::ExactUnicritical) {
        shape = stability::unicritical_shape(scenario.f);
        if (!shape)
            throw ArbordynError(
                "exact mode requires a polynomial of shape u*x^d + v");
    }
    long degree_cap = 1;
    if (scenario.mode == Scenario::Mode::DepthBounded) {
        degree_cap = 1;
        for (int i = 0; i < scenario.depth; ++i) {
            degree_cap *= scenario.f.degree();
            if (degree_cap > 65536)
                throw DegreeCapExceeded(
                    "depth census level degree exceeds 65536");
        }
    }

    GoodPrimeFilter filter(scenario.f);
    std::vector<long> primes = prime_stream(scenario.prime_bound);
    std::vector<PrimeRecord> records(primes.size());

    auto work = [&](size_t begin, size_t end) {
        for (size_t i = begin; i < end; ++i) {
            long p = primes[i];
            if (scenario.extra_exclusions.count(p) || !filter.good(Int(p)) ||
                valuation(scenario.a, Int(p)) < 0) {
                records[i] = {p, PrimeOutcome::Excluded, 0, std::nullopt};
                continue;
            }
            records[i] =
                evaluate_prime(scenario, p, shape, scenario.depth, 65536);
        }
    };
    int nworkers = std::max(1, workers);
    if (nworkers == 1 || primes.size() < 64) {
        work(0, primes.size());
    } else {
        std::vector<std::thread> pool;
        std::atomic<size_t> next{0};
        const size_t chunk = 256;
        for (int w = 0; w < nworkers; ++w)
            pool.emplace_back([&] {
                while (true) {
                    size_t begin = next.fetch_add(chunk);
                    if (begin >= primes.size()) break;
                    work(begin, std::min(begin + chunk, primes.size()));
                }
            });
        for (auto& t : pool) t.join();
    }

    for (const PrimeRecord& rec : records) {
        switch (rec.outcome) {
            case PrimeOutcome::Excluded:
                report.excluded_primes.push_back(rec.prime);
                continue;
            case PrimeOutcome::Stable: report.stable_count++; break;
            case PrimeOutcome::Unstable:
                report.failure_histogram[rec.fail_level]++;
                break;
            case PrimeOutcome::Undefined: report.undefined_count++; break;
            case PrimeOutcome::DegreeDrop: report.degree_drop_count++; break;
        }
        report.primes_tested++;
    }
    report.density = report.primes_tested
                         ? Rat(report.stable_count, report.primes_tested)
                         : Rat(0);
    report.density.canonicalize();
    auto wilson = wilson95(report.stable_count, report.primes_tested);
    report.wilson_lo = wilson.lo;
    report.wilson_hi = wilson.hi;
    if (rows) *rows = std::move(records);
    return report;
}

Comparison compare_predicted(const CensusReport& report, const Rat& predicted,
                             const Rat& tol) {
    Rat diff = report.density - predicted;
    if (diff < 0) diff = -diff;
    return diff <= tol ? Comparison::Pass : Comparison::Fail;
}

std::vector<Rat> density_decay_profile(const PolyQ& f, const Rat& a,
                                       long prime_bound, int n_max,
                                       int workers) {
    Scenario s;
    s.f = f;
    s.a = a;
    s.prime_bound = prime_bound;
    s.mode = Scenario::Mode::DepthBounded;
    s.depth = n_max;
    std::vector<PrimeRecord> rows;
    CensusReport report = run_census(s, workers, &rows);
    std::vector<Rat> out;
    for (int n = 1; n <= n_max; ++n) {
        long stable_at_n = report.stable_count;
        for (auto& [level, count] : report.failure_histogram)
            if (level > n) stable_at_n += count;
        Rat d = report.primes_tested
                    ? Rat(stable_at_n, report.primes_tested)
                    : Rat(0);
        d.canonicalize();
        out.push_back(d);
    }
    return out;
}

nlohmann::json CensusReport::to_json() const {
    nlohmann::json j;
    j["scenario"] = {{"f", scenario.f.str()},
                     {"a", scenario.a.get_str()},
                     {"pmax", scenario.prime_bound},
                     {"mode", scenario.mode_string()}};
    j["primes_tested"] = primes_tested;
    j["stable_count"] = stable_count;
    j["density_num"] = density.get_num().get_str();
    j["density_den"] = density.get_den().get_str();
    j["wilson_lo"] = wilson_lo;
    j["wilson_hi"] = wilson_hi;
    nlohmann::json hist = nlohmann::json::object();
    for (auto& [level, count] : failure_histogram)
        hist[std::to_string(level)] = count;
    if (undefined_count) hist["undefined"] = undefined_count;
    if (degree_drop_count) hist["degree_drop"] = degree_drop_count;
    j["histogram"] = hist;
    j["excluded_primes"] = excluded_primes;
    if (expected) {
        j["expected"] = expected->get_str();
        j["verdict"] = *expectation_met ? "pass" : "fail";
    }
    return j;
}

void write_csv(const std::vector<PrimeRecord>& rows, std::ostream& os) {
    os << "prime,verdict,fail_level,orbit_period\n";
    for (const PrimeRecord& rec : rows) {
        if (rec.outcome == PrimeOutcome::Excluded) continue;
        os << rec.prime << ",";
        switch (rec.outcome) {
            case PrimeOutcome::Stable: os << "stable"; break;
            case PrimeOutcome::Unstable: os << "unstable"; break;
            case PrimeOutcome::Undefined: os << "undefined"; break;
            case PrimeOutcome::DegreeDrop: os << "degree_drop"; break;
            case PrimeOutcome::Excluded: break;
        }
        os << ",";
        if (rec.outcome != PrimeOutcome::Stable && rec.fail_level > 0)
            os << rec.fail_level;
        os << ",";
        if (rec.orbit_period) os << *rec.orbit_period;
        os << "\n";
    }
}

}  // namespace arbordyn::census

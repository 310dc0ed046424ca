// arbordyn: stability of polynomial iterates over Q and mod p.
//
// Subcommands: analyze, stability, witnesses, wreath, dickson, census.
// Exit codes: 0 ok / expectation met, 1 expectation failed, 2 input error.
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "arbordyn/census.hpp"
#include "arbordyn/dickson.hpp"
#include "arbordyn/dynamics.hpp"
#include "arbordyn/poly_parse.hpp"
#include "arbordyn/stability.hpp"
#include "arbordyn/wreath.hpp"
#include "json.hpp"

using namespace arbordyn;
using exactalg::parse_poly;
using exactalg::parse_rational;
using exactalg::PolyQ;
using nlohmann::json;

namespace {

json orbit_json(const dynamics::OrbitRecord& rec) {
    json j;
    j["start"] = rec.start.get_str();
    json traj = json::array();
    for (const Rat& x : rec.trajectory) traj.push_back(x.get_str());
    j["trajectory"] = traj;
    if (auto* pre = std::get_if<dynamics::Preperiodic>(&rec.status)) {
        j["status"] = "preperiodic";
        j["tail_length"] = pre->tail_length;
        j["cycle_length"] = pre->cycle_length;
    } else if (auto* wan = std::get_if<dynamics::Wandering>(&rec.status)) {
        j["status"] = "wandering";
        j["certified_at_step"] = wan->certified_at_step;
    } else {
        j["status"] = "undetermined";
        j["steps_used"] =
            std::get<dynamics::Undetermined>(rec.status).steps_used;
    }
    return j;
}

std::string orbit_brief(const dynamics::OrbitRecord& rec) {
    if (auto* pre = std::get_if<dynamics::Preperiodic>(&rec.status))
        return "preperiodic(tail " + std::to_string(pre->tail_length) +
               ", cycle " + std::to_string(pre->cycle_length) + ")";
    if (auto* wan = std::get_if<dynamics::Wandering>(&rec.status))
        return "wandering(step " + std::to_string(wan->certified_at_step) +
               ")";
    return "undetermined";
}

json verdict_json(const stability::StabilityVerdict& v, long p) {
    json j;
    j["prime"] = p;
    j["mode"] = v.mode == stability::StabilityVerdict::Mode::DepthBounded
                    ? "depth_bounded"
                    : "exact_unicritical";
    switch (v.status) {
        case stability::StabilityVerdict::Status::StableUpTo:
            j["status"] = "stable_up_to";
            j["depth"] = v.depth;
            break;
        case stability::StabilityVerdict::Status::StableExact:
            j["status"] = "stable_exact";
            break;
        case stability::StabilityVerdict::Status::UnstableAt:
            j["status"] = "unstable_at";
            j["level"] = v.depth;
            switch (v.reason) {
                case stability::FailReason::Reducible:
                    j["reason"] = "reducible";
                    break;
                case stability::FailReason::DegreeDrop:
                    j["reason"] = "degree_drop";
                    break;
                case stability::FailReason::Undefined:
                    j["reason"] = "undefined";
                    break;
            }
            break;
    }
    if (v.orbit_period_mod_p) j["orbit_period"] = *v.orbit_period_mod_p;
    return j;
}

json type_tree_json(const wreath::TypeTree& tree) {
    json j;
    j["type"] = tree.type.str();
    if (!tree.children.empty()) {
        json kids = json::array();
        for (auto& child : tree.children) kids.push_back(type_tree_json(*child));
        j["children"] = kids;
    }
    return j;
}

int run_analyze(const std::string& poly_text, int steps, bool as_json) {
    PolyQ f = parse_poly(poly_text);
    auto crit = dynamics::critical_structure(f, steps);
    auto hyp = dynamics::check_hypotheses(f, steps);
    auto pcf = dynamics::classify_pcf(f, steps);
    const char* pcf_name = pcf == dynamics::PcfStatus::PCF
                               ? "postcritically_finite"
                               : pcf == dynamics::PcfStatus::
                                             PostcriticallyInfinite
                                     ? "postcritically_infinite"
                                     : "undetermined";
    if (as_json) {
        json j;
        j["f"] = f.str();
        j["degree"] = crit.degree;
        j["postcritical"] = pcf_name;
        json pts = json::array();
        for (auto& rc : crit.rational_points) {
            json pt;
            pt["point"] = rc.point.get_str();
            pt["multiplicity"] = rc.mult_under_f;
            pt["orbit"] = orbit_json(rc.orbit);
            pts.push_back(pt);
        }
        j["rational_critical_points"] = pts;
        json irr = json::array();
        for (auto& ic : crit.irrational_part) {
            json e;
            e["min_poly"] = ic.min_poly.str();
            e["multiplicity_in_derivative"] = ic.mult_in_derivative;
            if (ic.rational_value)
                e["rational_critical_value"] = ic.rational_value->get_str();
            irr.push_back(e);
        }
        j["irrational_critical_part"] = irr;
        json values = json::array();
        for (auto& cv : crit.critical_values) {
            json e;
            e["value"] = cv.value.get_str();
            e["fiber_cycle_type"] = cv.fiber_type.str();
            values.push_back(e);
        }
        j["critical_values"] = values;
        json crits = json::array();
        for (auto& entry : hyp.entries) {
            json e;
            e["criterion"] = dynamics::criterion_name(entry.id);
            e["verdict"] = dynamics::verdict_name(entry.verdict);
            if (!entry.witness.is_null()) e["witness"] = entry.witness;
            crits.push_back(e);
        }
        j["criteria"] = crits;
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << "f = " << f.str() << "  (degree " << crit.degree << ", "
              << pcf_name << ")\n";
    std::cout << "rational critical points:\n";
    for (auto& rc : crit.rational_points)
        std::cout << "  " << rc.point.get_str() << "  multiplicity "
                  << rc.mult_under_f << "  orbit " << orbit_brief(rc.orbit)
                  << "\n";
    if (crit.rational_points.empty()) std::cout << "  (none)\n";
    if (!crit.irrational_part.empty()) {
        std::cout << "irrational critical part:\n";
        for (auto& ic : crit.irrational_part) {
            std::cout << "  min poly " << ic.min_poly.str()
                      << "  multiplicity " << ic.mult_in_derivative;
            if (ic.rational_value)
                std::cout << "  value " << ic.rational_value->get_str();
            std::cout << "\n";
        }
    }
    std::cout << "rational critical values:\n";
    for (auto& cv : crit.critical_values)
        std::cout << "  " << cv.value.get_str() << "  fiber type ("
                  << cv.fiber_type.str() << ")\n";
    std::cout << "density-zero criteria:\n";
    for (auto& entry : hyp.entries) {
        std::cout << "  " << dynamics::criterion_name(entry.id) << ": "
                  << dynamics::verdict_name(entry.verdict);
        if (entry.verdict == dynamics::Verdict::Applies)
            std::cout << "  witness " << entry.witness.dump();
        std::cout << "\n";
    }
    return 0;
}

int run_census_scenario(census::Scenario& scenario,
                        const std::optional<Rat>& expect, const Rat& tol,
                        const std::string& out_path,
                        const std::string& csv_path, int workers) {
    std::vector<census::PrimeRecord> rows;
    census::CensusReport report = census::run_census(
        scenario, workers, csv_path.empty() ? nullptr : &rows);
    if (expect) {
        report.expected = *expect;
        report.expectation_met =
            census::compare_predicted(report, *expect, tol) ==
            census::Comparison::Pass;
    }
    json j = report.to_json();
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        out << j.dump(2) << "\n";
    }
    if (!csv_path.empty()) {
        std::ofstream csv(csv_path);
        census::write_csv(rows, csv);
    }
    std::cout << j.dump(2) << "\n";
    return (expect && !*report.expectation_met) ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stable primes of polynomial iterates"};
    app.require_subcommand(1);

    // analyze
    std::string analyze_poly;
    int analyze_steps = 64;
    bool analyze_json = false;
    auto* analyze = app.add_subcommand(
        "analyze", "critical structure and density-zero criteria");
    analyze->add_option("poly", analyze_poly, "polynomial in x")->required();
    analyze->add_option("--steps", analyze_steps, "orbit step budget");
    analyze->add_flag("--json", analyze_json, "JSON output");

    // stability
    std::string st_f, st_a = "0";
    long st_p = 0;
    int st_depth = 0;
    bool st_exact = false;
    auto* stab = app.add_subcommand("stability",
                                    "single-prime stability verdict");
    stab->add_option("--f", st_f, "polynomial")->required();
    stab->add_option("--a", st_a, "target value");
    stab->add_option("--p", st_p, "prime")->required();
    stab->add_option("--depth", st_depth, "depth-bounded test to level N");
    stab->add_flag("--exact-unicritical", st_exact,
                   "exact test for u*x^d + v");

    // witnesses
    std::string wit_f, wit_t = "0";
    long wit_e = 2, wit_trial = 1000000;
    int wit_nmax = 12;
    auto* wit = app.add_subcommand(
        "witnesses", "valuation witnesses along the orbit of t");
    wit->add_option("--f", wit_f, "polynomial")->required();
    wit->add_option("--t", wit_t, "orbit start (wandering point)")
        ->required();
    wit->add_option("--e", wit_e, "target exponent e >= 2")->required();
    wit->add_option("--nmax", wit_nmax, "iterate levels");
    wit->add_option("--trial-bound", wit_trial, "trial division bound");

    // wreath
    auto* wr = app.add_subcommand("wreath", "cycle-type calculus");
    wr->require_subcommand(1);
    std::string wr_type;
    long wr_n = 0;
    std::string wr_tower;
    auto* wr_real = wr->add_subcommand(
        "realizable", "realizability in affine towers over n");
    wr_real->add_option("--type", wr_type, "cycle type, e.g. 3,3,1x43")
        ->required();
    wr_real->add_option("--n", wr_n, "degree")->required();
    wr_real->add_option("--tower", wr_tower,
                        "specific tower, e.g. agl7,agl7 (top first)");
    std::string wr_ptower;
    auto* wr_prop = wr->add_subcommand("proportion",
                                       "full-cycle proportion of a tower");
    wr_prop->add_option("--tower", wr_ptower, "tower, e.g. agl3,agl3")
        ->required();

    // dickson
    long dk_c = 1;
    int dk_count = 5;
    auto* dk = app.add_subcommand("dickson",
                                  "cubic Dickson family and target values");
    dk->add_option("--c", dk_c, "parameter c >= 1")->required();
    dk->add_option("--count", dk_count, "number of candidate values");

    // census
    std::string cs_f, cs_a = "0", cs_out, cs_csv, cs_batch, cs_expect,
                       cs_tol = "3/200";
    long cs_pmax = 100000;
    int cs_depth = 0, cs_workers = 1;
    bool cs_exact = false;
    auto* cs = app.add_subcommand("census", "stable-prime density census");
    cs->add_option("--f", cs_f, "polynomial");
    cs->add_option("--a", cs_a, "target value");
    cs->add_option("--pmax", cs_pmax, "prime bound");
    cs->add_option("--depth", cs_depth, "depth-bounded mode to level N");
    cs->add_flag("--exact-unicritical", cs_exact, "exact unicritical mode");
    cs->add_option("--expect", cs_expect, "predicted density");
    cs->add_option("--tol", cs_tol, "tolerance for --expect");
    cs->add_option("--out", cs_out, "JSON report path");
    cs->add_option("--csv", cs_csv, "per-prime CSV path");
    cs->add_option("--workers", cs_workers, "worker threads");
    cs->add_option("--batch", cs_batch, "JSON array of scenarios");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*analyze) return run_analyze(analyze_poly, analyze_steps,
                                         analyze_json);

        if (*stab) {
            if (st_exact == (st_depth > 0))
                throw ArbordynError(
                    "choose exactly one of --depth and --exact-unicritical");
            PolyQ f = parse_poly(st_f);
            Rat a = parse_rational(st_a);
            stability::StabilityVerdict v;
            if (st_exact) {
                auto shape = stability::unicritical_shape(f);
                if (!shape)
                    throw ArbordynError("--exact-unicritical needs u*x^d+v");
                v = stability::unicritical_exact_stable(shape->u, shape->d,
                                                        shape->v, a, st_p);
            } else {
                v = stability::depth_stable(f, a, st_p, st_depth);
            }
            std::cout << verdict_json(v, st_p).dump(2) << "\n";
            return 0;
        }

        if (*wit) {
            PolyQ f = parse_poly(wit_f);
            Rat t = parse_rational(wit_t);
            auto res = stability::find_valuation_witnesses(
                f, t, wit_e, {}, wit_nmax, wit_trial, true);
            std::cout << "n,p,valuation,complete_factorization\n";
            for (auto& w : res.witnesses) {
                bool complete = true;
                for (auto& lvl : res.levels)
                    if (lvl.n == w.n) complete = lvl.complete;
                std::cout << w.n << "," << w.p.get_str() << ","
                          << w.valuation << "," << (complete ? "yes" : "no")
                          << "\n";
            }
            return 0;
        }

        if (*wr_real) {
            wreath::CycleType tau = wreath::CycleType::parse(wr_type);
            json j;
            j["type"] = tau.str();
            j["n"] = wr_n;
            std::optional<wreath::TypeTree> witness;
            if (!wr_tower.empty()) {
                wreath::Tower tower;
                std::stringstream ss(wr_tower);
                std::string tok;
                while (std::getline(ss, tok, ','))
                    tower.members.push_back(wreath::parse_group(tok));
                witness = wreath::realizable_in_tower(tau, tower);
                j["tower"] = wr_tower;
                j["realizable"] = witness.has_value();
            } else {
                j["realizable"] = !wreath::obstruction_all_towers(tau, wr_n);
                if (j["realizable"].get<bool>()) {
                    // rebuild the first witnessing ordering for the report
                    std::vector<long> primes;
                    long m = wr_n;
                    for (long p = 2; p * p <= m; ++p)
                        while (m % p == 0) {
                            primes.push_back(p);
                            m /= p;
                        }
                    if (m > 1) primes.push_back(m);
                    std::sort(primes.begin(), primes.end());
                    do {
                        wreath::Tower tower;
                        for (long p : primes)
                            tower.members.push_back(wreath::AGL1{p});
                        witness = wreath::realizable_in_tower(tau, tower);
                        if (witness) {
                            std::string name;
                            for (long p : primes)
                                name += (name.empty() ? "" : ",") +
                                        std::string("agl") +
                                        std::to_string(p);
                            j["tower"] = name;
                            break;
                        }
                    } while (std::next_permutation(primes.begin(),
                                                   primes.end()));
                }
            }
            if (witness) j["witness"] = type_tree_json(*witness);
            // parity applies when the parts are {1, q} for a single q
            long q = 0;
            bool uniform = true;
            for (long part : tau.parts)
                if (part != 1) {
                    if (q == 0)
                        q = part;
                    else if (q != part)
                        uniform = false;
                }
            if (uniform && q > 0) {
                switch (wreath::parity_necessary(tau, wr_n, q)) {
                    case wreath::ParityCheck::Pass: j["parity"] = "pass"; break;
                    case wreath::ParityCheck::Fail: j["parity"] = "fail"; break;
                    case wreath::ParityCheck::Inapplicable:
                        j["parity"] = "inapplicable";
                }
            } else {
                j["parity"] = "inapplicable";
            }
            std::cout << j.dump(2) << "\n";
            return 0;
        }

        if (*wr_prop) {
            wreath::Tower tower;
            std::stringstream ss(wr_ptower);
            std::string tok;
            while (std::getline(ss, tok, ','))
                tower.members.push_back(wreath::parse_group(tok));
            Rat prop = wreath::full_cycle_proportion(tower);
            json j;
            j["tower"] = wr_ptower;
            j["degree"] = tower.degree();
            j["proportion"] = prop.get_str();
            std::cout << j.dump(2) << "\n";
            return 0;
        }

        if (*dk) {
            auto rep = dickson::represent_c(Int(dk_c));
            json j;
            j["c"] = dk_c;
            if (!rep) {
                j["representable"] = false;
            } else {
                j["representable"] = true;
                j["alpha"] = rep->first.get_str();
                j["beta"] = rep->second.get_str();
                j["f"] =
                    dickson::dickson_poly({Int(dk_c), +1, rep}).str();
                json cands = json::array();
                for (auto& cand :
                     dickson::maximal_density_candidates(Int(dk_c),
                                                         dk_count)) {
                    json e;
                    e["a"] = cand.a.get_str();
                    e["eligible"] = cand.eligible;
                    cands.push_back(e);
                }
                j["candidates"] = cands;
            }
            std::cout << j.dump(2) << "\n";
            return 0;
        }

        if (*cs) {
            if (!cs_batch.empty()) {
                std::ifstream in(cs_batch);
                if (!in) throw ArbordynError("cannot open " + cs_batch);
                json batch = json::parse(in);
                if (!batch.is_array())
                    throw ArbordynError("batch file must be a JSON array");
                int rc = 0;
                for (auto& item : batch) {
                    census::Scenario s;
                    s.f = parse_poly(item.at("f").get<std::string>());
                    s.a = parse_rational(
                        item.value("a", std::string("0")));
                    s.prime_bound = item.value("pmax", 100000L);
                    std::string mode = item.value("mode", "depth");
                    if (mode == "exact" || mode == "exact_unicritical") {
                        s.mode = census::Scenario::Mode::ExactUnicritical;
                    } else {
                        s.mode = census::Scenario::Mode::DepthBounded;
                        s.depth = item.value("depth", 4);
                    }
                    std::optional<Rat> expect;
                    if (item.contains("expect"))
                        expect = parse_rational(
                            item["expect"].get<std::string>());
                    Rat tol = parse_rational(
                        item.value("tol", std::string("3/200")));
                    rc |= run_census_scenario(s, expect, tol,
                                              item.value("out", ""),
                                              item.value("csv", ""),
                                              cs_workers);
                }
                return rc;
            }
            if (cs_f.empty())
                throw ArbordynError("census needs --f (or --batch)");
            if (cs_exact == (cs_depth > 0))
                throw ArbordynError(
                    "choose exactly one of --depth and --exact-unicritical");
            census::Scenario s;
            s.f = parse_poly(cs_f);
            s.a = parse_rational(cs_a);
            s.prime_bound = cs_pmax;
            if (cs_exact) {
                s.mode = census::Scenario::Mode::ExactUnicritical;
            } else {
                s.mode = census::Scenario::Mode::DepthBounded;
                s.depth = cs_depth;
            }
            std::optional<Rat> expect;
            if (!cs_expect.empty()) expect = parse_rational(cs_expect);
            return run_census_scenario(s, expect, parse_rational(cs_tol),
                                       cs_out, cs_csv, cs_workers);
        }
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const ArbordynError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

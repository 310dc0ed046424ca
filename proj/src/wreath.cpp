#include "arbordyn/wreath.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace arbordyn::wreath {

// ---- CycleType ---------------------------------------------------------------

CycleType::CycleType(std::vector<long> p) : parts(std::move(p)) {
    for (long v : parts)
        if (v < 1) throw ArbordynError("cycle type parts must be >= 1");
    std::sort(parts.begin(), parts.end(), std::greater<long>());
}

long CycleType::degree() const {
    return std::accumulate(parts.begin(), parts.end(), 0L);
}

long CycleType::order() const {
    long acc = 1;
    for (long v : parts) acc = std::lcm(acc, v);
    return acc;
}

long CycleType::count(long part) const {
    return std::count(parts.begin(), parts.end(), part);
}

CycleType CycleType::parse(const std::string& text) {
    std::vector<long> parts;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        size_t xpos = tok.find('x');
        long part, count = 1;
        try {
            if (xpos == std::string::npos) {
                part = std::stol(tok);
            } else {
                part = std::stol(tok.substr(0, xpos));
                count = std::stol(tok.substr(xpos + 1));
            }
        } catch (const std::exception&) {
            throw ParseError("bad cycle type token: " + tok);
        }
        if (part < 1 || count < 1)
            throw ParseError("bad cycle type token: " + tok);
        for (long i = 0; i < count; ++i) parts.push_back(part);
    }
    if (parts.empty()) throw ParseError("empty cycle type");
    return CycleType(std::move(parts));
}

std::string CycleType::str() const {
    std::ostringstream os;
    size_t i = 0;
    bool first = true;
    while (i < parts.size()) {
        size_t j = i;
        while (j < parts.size() && parts[j] == parts[i]) ++j;
        if (!first) os << ",";
        first = false;
        os << parts[i];
        if (j - i > 1) os << "x" << (j - i);
        i = j;
    }
    return os.str();
}

// ---- group descriptors -------------------------------------------------------

long group_degree(const GroupDescriptor& g) {
    return std::visit(
        [](const auto& v) -> long {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, AGL1>) return v.p;
            else if constexpr (std::is_same_v<T, Cyclic>) return v.m;
            else if constexpr (std::is_same_v<T, Symmetric>) return v.n;
            else if constexpr (std::is_same_v<T, Holomorph>) return v.m;
            else return v.degree;
        },
        g);
}

namespace {

CycleType perm_cycle_type(const Permutation& perm) {
    std::vector<long> parts;
    std::vector<char> seen(perm.size(), 0);
    for (size_t i = 0; i < perm.size(); ++i) {
        if (seen[i]) continue;
        long len = 0;
        size_t j = i;
        while (!seen[j]) {
            seen[j] = 1;
            j = perm[j];
            ++len;
        }
        parts.push_back(len);
    }
    return CycleType(std::move(parts));
}

Permutation compose_perm(const Permutation& a, const Permutation& b) {
    // (a after b): x -> a[b[x]]
    Permutation r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[b[i]];
    return r;
}

std::vector<Permutation> explicit_elements(const Explicit& g, long cap) {
    for (auto& perm : g.generators) {
        if (static_cast<long>(perm.size()) != g.degree)
            throw ArbordynError("generator degree mismatch");
        Permutation sorted = perm;
        std::sort(sorted.begin(), sorted.end());
        for (long i = 0; i < g.degree; ++i)
            if (sorted[i] != i) throw ArbordynError("not a permutation");
    }
    Permutation id(g.degree);
    std::iota(id.begin(), id.end(), 0);
    std::set<Permutation> known{id};
    std::vector<Permutation> queue{id};
    for (size_t head = 0; head < queue.size(); ++head) {
        for (auto& gen : g.generators) {
            Permutation next = compose_perm(gen, queue[head]);
            if (known.insert(next).second) {
                if (static_cast<long>(known.size()) > cap)
                    throw TooLarge("explicit group exceeds enumeration cap");
                queue.push_back(std::move(next));
            }
        }
    }
    // transitivity of the natural action
    std::vector<char> reach(g.degree, 0);
    std::vector<int> stack{0};
    reach[0] = 1;
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        for (auto& gen : g.generators)
            if (!reach[gen[x]]) {
                reach[gen[x]] = 1;
                stack.push_back(gen[x]);
            }
    }
    if (std::count(reach.begin(), reach.end(), 1) != g.degree)
        throw ArbordynError("explicit group is not transitive");
    return queue;
}

std::vector<Permutation> group_elements(const GroupDescriptor& g, long cap) {
    std::vector<Permutation> out;
    if (auto* a = std::get_if<AGL1>(&g)) {
        long p = a->p;
        if (p * (p - 1) > cap) throw TooLarge("AGL1 too large to enumerate");
        for (long mul = 1; mul < p; ++mul)
            for (long add = 0; add < p; ++add) {
                Permutation perm(p);
                for (long x = 0; x < p; ++x) perm[x] = (mul * x + add) % p;
                out.push_back(std::move(perm));
            }
    } else if (auto* c = std::get_if<Cyclic>(&g)) {
        for (long k = 0; k < c->m; ++k) {
            Permutation perm(c->m);
            for (long x = 0; x < c->m; ++x) perm[x] = (x + k) % c->m;
            out.push_back(std::move(perm));
        }
    } else if (auto* s = std::get_if<Symmetric>(&g)) {
        if (s->n > 8) throw TooLarge("symmetric degree capped at 8");
        Permutation perm(s->n);
        std::iota(perm.begin(), perm.end(), 0);
        do {
            out.push_back(perm);
        } while (std::next_permutation(perm.begin(), perm.end()));
    } else if (auto* h = std::get_if<Holomorph>(&g)) {
        for (long mul = 1; mul < std::max(2L, h->m); ++mul) {
            if (std::gcd(mul, h->m) != 1) continue;
            for (long add = 0; add < h->m; ++add) {
                Permutation perm(h->m);
                for (long x = 0; x < h->m; ++x)
                    perm[x] = (mul * x + add) % h->m;
                out.push_back(std::move(perm));
            }
        }
    } else {
        out = explicit_elements(std::get<Explicit>(g), cap);
    }
    return out;
}

}  // namespace

Int group_order(const GroupDescriptor& g) {
    if (auto* a = std::get_if<AGL1>(&g)) return Int(a->p) * (a->p - 1);
    if (auto* c = std::get_if<Cyclic>(&g)) return Int(c->m);
    if (auto* s = std::get_if<Symmetric>(&g)) {
        Int f = 1;
        for (long i = 2; i <= s->n; ++i) f *= i;
        return f;
    }
    if (auto* h = std::get_if<Holomorph>(&g))
        return Int(h->m) * euler_phi_long(h->m);
    return Int(static_cast<long>(
        group_elements(g, 10000000).size()));
}

std::string group_name(const GroupDescriptor& g) {
    if (auto* a = std::get_if<AGL1>(&g)) return "agl" + std::to_string(a->p);
    if (auto* c = std::get_if<Cyclic>(&g)) return "c" + std::to_string(c->m);
    if (auto* s = std::get_if<Symmetric>(&g)) return "s" + std::to_string(s->n);
    if (auto* h = std::get_if<Holomorph>(&g))
        return "hol" + std::to_string(h->m);
    return "explicit" +
           std::to_string(std::get<Explicit>(g).degree);
}

GroupDescriptor parse_group(const std::string& token) {
    auto num = [&](size_t off) -> long {
        try {
            return std::stol(token.substr(off));
        } catch (const std::exception&) {
            throw ParseError("bad group token: " + token);
        }
    };
    if (token.rfind("agl", 0) == 0) {
        long p = num(3);
        if (!is_prime(Int(p)) || p > 10000)
            throw ParseError("agl needs a prime <= 10^4: " + token);
        return AGL1{p};
    }
    if (token.rfind("hol", 0) == 0) {
        long m = num(3);
        if (m < 1 || m > 64) throw ParseError("hol needs 1 <= m <= 64");
        return Holomorph{m};
    }
    if (token.rfind("c", 0) == 0) {
        long m = num(1);
        if (m < 1) throw ParseError("cyclic degree must be positive");
        return Cyclic{m};
    }
    if (token.rfind("s", 0) == 0) {
        long n = num(1);
        if (n < 1 || n > 8) throw ParseError("symmetric degree capped at 8");
        return Symmetric{n};
    }
    throw ParseError("unknown group token: " + token);
}

std::vector<std::pair<CycleType, long>> agl1_types(long p) {
    if (!is_prime(Int(p)) || p > 10000)
        throw ArbordynError("agl1_types needs a prime <= 10^4");
    std::vector<std::pair<CycleType, long>> out;
    out.emplace_back(CycleType(std::vector<long>(p, 1)), 1);  // identity
    out.emplace_back(CycleType({p}), p - 1);                  // translations
    for (long d = 2; d <= p - 1; ++d) {
        if ((p - 1) % d != 0) continue;
        std::vector<long> parts{1};
        for (long i = 0; i < (p - 1) / d; ++i) parts.push_back(d);
        out.emplace_back(CycleType(std::move(parts)), p * euler_phi_long(d));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::pair<CycleType, long>> group_cycle_index(
    const GroupDescriptor& g) {
    if (group_order(g) > 1000000)
        throw TooLarge("group order exceeds enumeration cap");
    std::map<CycleType, long> tally;
    for (auto& perm : group_elements(g, 1000000)) tally[perm_cycle_type(perm)]++;
    return {tally.begin(), tally.end()};
}

// Full-cycle proportion of x -> ax+b on Z/m.  Below the enumeration
// threshold we count directly; above it we use the full-period criterion
// (b a unit, a = 1 mod every prime of m, a = 1 mod 4 when 4 | m), which the
// unit tests check against enumeration on the full shared range.
Rat holomorph_full_cycles(long m) {
    if (m < 1 || m > 10000)
        throw ArbordynError("holomorph_full_cycles needs 1 <= m <= 10^4");
    if (m == 1) return Rat(1);
    if (m <= 512) {
        long full = 0, total = 0;
        for (auto& perm : group_elements(Holomorph{m}, 10000000)) {
            ++total;
            if (perm_cycle_type(perm).is_full_cycle()) ++full;
        }
        Rat r(full, total);
        r.canonicalize();
        return r;
    }
    long r = 1;
    for (long q : prime_factors_long(m)) r *= q;
    if (m % 4 == 0) r = std::lcm(r, 4L);
    return Rat(1, r);
}

// ---- towers -------------------------------------------------------------------

long Tower::degree() const {
    long d = 1;
    for (auto& g : members) d *= group_degree(g);
    return d;
}

Int Tower::wreath_order() const {
    Int order = 1;
    for (auto it = members.rbegin(); it != members.rend(); ++it) {
        Int next = group_order(*it);
        long deg = group_degree(*it);
        Int pw;
        mpz_pow_ui(pw.get_mpz_t(), order.get_mpz_t(),
                   static_cast<unsigned long>(deg));
        order = next * pw;
    }
    return order;
}

CycleType TypeTree::flatten() const {
    if (children.empty()) return type;
    std::vector<long> parts;
    for (size_t j = 0; j < type.parts.size(); ++j) {
        CycleType sub = children[j]->flatten();
        for (long c : sub.parts) parts.push_back(type.parts[j] * c);
    }
    return CycleType(std::move(parts));
}

namespace {

std::vector<CycleType> group_type_support(const GroupDescriptor& g) {
    std::vector<CycleType> out;
    if (auto* a = std::get_if<AGL1>(&g)) {
        for (auto& [t, cnt] : agl1_types(a->p)) out.push_back(t);
        return out;
    }
    if (auto* c = std::get_if<Cyclic>(&g)) {
        for (long d = 1; d <= c->m; ++d) {
            if (c->m % d != 0) continue;
            out.push_back(CycleType(std::vector<long>(c->m / d, d)));
        }
        return out;
    }
    if (auto* s = std::get_if<Symmetric>(&g)) {
        // all partitions of n
        std::vector<long> cur;
        auto rec = [&](auto&& self, long rest, long maxpart) -> void {
            if (rest == 0) {
                out.push_back(CycleType(cur));
                return;
            }
            for (long v = std::min(rest, maxpart); v >= 1; --v) {
                cur.push_back(v);
                self(self, rest - v, v);
                cur.pop_back();
            }
        };
        rec(rec, s->n, s->n);
        return out;
    }
    for (auto& [t, cnt] : group_cycle_index(g)) out.push_back(t);
    return out;
}

struct RealizeContext {
    const Tower* tower;
    std::vector<std::vector<CycleType>> supports;
    std::vector<long> suffix_degree;
    std::map<std::pair<size_t, std::vector<long>>,
             std::shared_ptr<TypeTree>> memo;
    std::set<std::pair<size_t, std::vector<long>>> known_failures;

    std::shared_ptr<TypeTree> realize(size_t level,
                                      const std::vector<long>& tau);

    // Assign sub-multisets of `remaining` to the parts of lambda,
    // larger parts first; equal parts take canonically non-increasing
    // choices to avoid symmetric duplicates.
    bool assign(size_t level, const CycleType& lambda, size_t j,
                std::multiset<long, std::greater<long>>& remaining,
                std::vector<std::shared_ptr<TypeTree>>& children,
                const std::vector<long>* prev_choice);

    bool enumerate_choice(size_t level, const CycleType& lambda, size_t j,
                          std::multiset<long, std::greater<long>>& remaining,
                          std::vector<long>& chosen, long target,
                          std::multiset<long, std::greater<long>>::iterator it,
                          std::vector<std::shared_ptr<TypeTree>>& children,
                          const std::vector<long>* prev_choice);
};

std::shared_ptr<TypeTree> RealizeContext::realize(
    size_t level, const std::vector<long>& tau) {
    auto key = std::make_pair(level, tau);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    if (known_failures.count(key)) return nullptr;

    std::shared_ptr<TypeTree> result;
    if (level + 1 == tower->members.size()) {
        CycleType t{std::vector<long>(tau)};
        auto& sup = supports[level];
        if (std::find(sup.begin(), sup.end(), t) != sup.end())
            result = std::make_shared<TypeTree>(TypeTree{t, {}});
    } else {
        for (const CycleType& lambda : supports[level]) {
            std::multiset<long, std::greater<long>> remaining(tau.begin(),
                                                              tau.end());
            std::vector<std::shared_ptr<TypeTree>> children;
            if (assign(level, lambda, 0, remaining, children, nullptr)) {
                result = std::make_shared<TypeTree>(
                    TypeTree{lambda, std::move(children)});
                break;
            }
        }
    }
    if (result)
        memo.emplace(key, result);
    else
        known_failures.insert(key);
    return result;
}

bool RealizeContext::assign(
    size_t level, const CycleType& lambda, size_t j,
    std::multiset<long, std::greater<long>>& remaining,
    std::vector<std::shared_ptr<TypeTree>>& children,
    const std::vector<long>* prev_choice) {
    if (j == lambda.parts.size()) return remaining.empty();
    long ell = lambda.parts[j];
    long target = ell * suffix_degree[level + 1];
    std::vector<long> chosen;
    const std::vector<long>* bound =
        (j > 0 && lambda.parts[j - 1] == ell) ? prev_choice : nullptr;
    return enumerate_choice(level, lambda, j, remaining, chosen, target,
                            remaining.begin(), children, bound);
}

bool RealizeContext::enumerate_choice(
    size_t level, const CycleType& lambda, size_t j,
    std::multiset<long, std::greater<long>>& remaining,
    std::vector<long>& chosen, long target,
    std::multiset<long, std::greater<long>>::iterator it,
    std::vector<std::shared_ptr<TypeTree>>& children,
    const std::vector<long>* prev_choice) {
    long ell = lambda.parts[j];
    if (target == 0) {
        // canonical ordering within a run of equal top parts
        if (prev_choice && chosen > *prev_choice) return false;
        std::vector<long> sub(chosen);
        for (long& v : sub) v /= ell;
        auto child = realize(level + 1, sub);
        if (!child) return false;
        children.push_back(child);
        std::vector<long> my_choice = chosen;
        if (assign(level, lambda, j + 1, remaining, children, &my_choice))
            return true;
        children.pop_back();
        return false;
    }
    // choose the next (largest available) part for this block
    while (it != remaining.end()) {
        long v = *it;
        if (v <= target && v % ell == 0 &&
            (chosen.empty() || v <= chosen.back())) {
            auto node = remaining.extract(it);
            chosen.push_back(v);
            // further picks may reuse the same value, so resume at <= v
            if (enumerate_choice(level, lambda, j, remaining, chosen,
                                 target - v, remaining.lower_bound(v),
                                 children, prev_choice))
                return true;
            chosen.pop_back();
            remaining.insert(std::move(node));
            it = remaining.upper_bound(v);  // skip duplicates of v
        } else {
            ++it;
        }
    }
    return false;
}

}  // namespace

std::optional<TypeTree> realizable_in_tower(const CycleType& tau,
                                            const Tower& tower) {
    if (tower.members.empty()) throw ArbordynError("empty tower");
    long deg = tower.degree();
    if (tau.degree() != deg)
        throw DegreeMismatch("type degree " + std::to_string(tau.degree()) +
                             " != tower degree " + std::to_string(deg));
    if (deg > 1000000) throw TooLarge("tower degree exceeds symbolic cap");
    RealizeContext ctx;
    ctx.tower = &tower;
    ctx.supports.reserve(tower.members.size());
    for (auto& g : tower.members) ctx.supports.push_back(group_type_support(g));
    ctx.suffix_degree.assign(tower.members.size() + 1, 1);
    for (size_t i = tower.members.size(); i-- > 0;)
        ctx.suffix_degree[i] =
            ctx.suffix_degree[i + 1] * group_degree(tower.members[i]);
    auto result = ctx.realize(0, tau.parts);
    if (!result) return std::nullopt;
    return *result;
}

bool obstruction_all_towers(const CycleType& tau, long n) {
    if (n < 2) throw ArbordynError("obstruction needs n >= 2");
    if (tau.degree() != n)
        throw DegreeMismatch("type degree does not match n");
    std::vector<long> primes;
    {
        long m = n;
        for (long p = 2; p * p <= m; ++p)
            while (m % p == 0) {
                primes.push_back(p);
                m /= p;
            }
        if (m > 1) primes.push_back(m);
    }
    std::sort(primes.begin(), primes.end());
    do {
        Tower tower;
        for (long p : primes) tower.members.push_back(AGL1{p});
        if (realizable_in_tower(tau, tower)) return false;
    } while (std::next_permutation(primes.begin(), primes.end()));
    return true;
}

ParityCheck parity_necessary(const CycleType& tau, long n, long q) {
    if (tau.degree() != n)
        throw DegreeMismatch("type degree does not match n");
    auto qfac = prime_factors_long(q);
    if (q < 3 || qfac.size() != 1) return ParityCheck::Inapplicable;
    long p = qfac[0];
    if (p == 2) return ParityCheck::Inapplicable;
    if (n % q == 0) return ParityCheck::Inapplicable;
    for (long part : tau.parts)
        if (part != 1 && part != q) return ParityCheck::Inapplicable;
    return tau.count(q) % 2 == 1 ? ParityCheck::Fail : ParityCheck::Pass;
}

Rat full_cycle_proportion(const GroupDescriptor& g) {
    if (auto* a = std::get_if<AGL1>(&g)) return Rat(1, a->p);
    if (auto* c = std::get_if<Cyclic>(&g))
        return Rat(euler_phi_long(c->m), c->m);
    if (auto* s = std::get_if<Symmetric>(&g)) return Rat(1, s->n);
    if (auto* h = std::get_if<Holomorph>(&g)) {
        long full = 0, total = 0;
        for (auto& perm : group_elements(g, 10000000)) {
            ++total;
            if (perm_cycle_type(perm).is_full_cycle()) ++full;
        }
        Rat r(full, total);
        r.canonicalize();
        return r;
    }
    long full = 0, total = 0;
    for (auto& perm : group_elements(g, 1000000)) {
        ++total;
        if (perm_cycle_type(perm).is_full_cycle()) ++full;
    }
    Rat r(full, total);
    r.canonicalize();
    return r;
}

Rat full_cycle_proportion(const Tower& tower) {
    // the cycle product around a top full cycle is uniformly distributed
    // over the lower wreath product, so the proportions multiply
    Rat acc(1);
    for (auto& g : tower.members) acc *= full_cycle_proportion(g);
    return acc;
}

namespace {

std::vector<Permutation> tower_elements(const Tower& tower, size_t from) {
    if (from + 1 == tower.members.size())
        return group_elements(tower.members[from], 10000000);
    auto top = group_elements(tower.members[from], 10000000);
    auto sub = tower_elements(tower, from + 1);
    long d1 = group_degree(tower.members[from]);
    long m = static_cast<long>(sub[0].size());
    std::vector<Permutation> out;
    std::vector<size_t> pick(d1, 0);
    while (true) {
        for (auto& sigma : top) {
            Permutation perm(d1 * m);
            for (long i = 0; i < d1; ++i)
                for (long jj = 0; jj < m; ++jj)
                    perm[i * m + jj] = sigma[i] * m + sub[pick[i]][jj];
            out.push_back(std::move(perm));
        }
        size_t i = 0;
        while (i < pick.size() && ++pick[i] == sub.size()) pick[i++] = 0;
        if (i == pick.size()) break;
    }
    return out;
}

}  // namespace

std::vector<std::pair<CycleType, long>> brute_force_tower(const Tower& tower) {
    if (tower.members.empty()) throw ArbordynError("empty tower");
    if (tower.degree() > 12)
        throw TooLarge("brute force capped at degree 12");
    if (tower.wreath_order() > 10000000)
        throw TooLarge("brute force capped at order 10^7");
    std::map<CycleType, long> tally;
    if (tower.members.size() == 1) {
        for (auto& perm : group_elements(tower.members[0], 10000000))
            tally[perm_cycle_type(perm)]++;
        return {tally.begin(), tally.end()};
    }
    // odometer over the top level so only the (small) subtower list is
    // materialized
    auto top = group_elements(tower.members[0], 10000000);
    auto sub = tower_elements(tower, 1);
    long d1 = group_degree(tower.members[0]);
    long m = static_cast<long>(sub[0].size());
    std::vector<size_t> pick(d1, 0);
    Permutation perm(d1 * m);
    while (true) {
        for (auto& sigma : top) {
            for (long i = 0; i < d1; ++i)
                for (long jj = 0; jj < m; ++jj)
                    perm[i * m + jj] = sigma[i] * m + sub[pick[i]][jj];
            tally[perm_cycle_type(perm)]++;
        }
        size_t i = 0;
        while (i < pick.size() && ++pick[i] == sub.size()) pick[i++] = 0;
        if (i == pick.size()) break;
    }
    return {tally.begin(), tally.end()};
}

}  // namespace arbordyn::wreath

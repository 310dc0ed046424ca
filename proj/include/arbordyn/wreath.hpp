// Cycle-type calculus for iterated imprimitive wreath products: the
// partition-tree composition model, realizability search with memoization,
// the affine-tower obstruction, the parity necessary condition, full-cycle
// proportions, and brute-force enumeration oracles.
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "arbordyn/cycle_type.hpp"

namespace arbordyn::wreath {

// Transitive permutation groups usable as tower members.
struct AGL1 {
    long p;  // prime <= 10^4; affine maps x -> ax+b on F_p
    bool operator==(const AGL1&) const = default;
};
struct Cyclic {
    long m;  // regular action of Z/m
    bool operator==(const Cyclic&) const = default;
};
struct Symmetric {
    long n;  // n <= 8
    bool operator==(const Symmetric&) const = default;
};
struct Holomorph {
    long m;  // m <= 64; maps x -> ax+b on Z/m with a a unit
    bool operator==(const Holomorph&) const = default;
};
using Permutation = std::vector<int>;
struct Explicit {
    long degree;  // <= 12
    std::vector<Permutation> generators;
    bool operator==(const Explicit&) const = default;
};
using GroupDescriptor = std::variant<AGL1, Cyclic, Symmetric, Holomorph,
                                     Explicit>;

long group_degree(const GroupDescriptor& g);
Int group_order(const GroupDescriptor& g);
std::string group_name(const GroupDescriptor& g);
// grammar: agl<p>, c<m>, s<n>, hol<m>
GroupDescriptor parse_group(const std::string& token);

// Cycle types of AGL_1(p) with element counts, by the closed formula:
// identity once, p-cycles p-1 times, and (1, d^((p-1)/d)) with count
// p*phi(d) for each divisor d > 1 of p-1.
std::vector<std::pair<CycleType, long>> agl1_types(long p);

// Exact cycle-type distribution by enumeration.
std::vector<std::pair<CycleType, long>> group_cycle_index(
    const GroupDescriptor& g);

// Proportion of maps x -> ax+b on Z/m acting as m-cycles.
Rat holomorph_full_cycles(long m);

// Tower of block actions, top (coarsest) first; degree = product.
struct Tower {
    std::vector<GroupDescriptor> members;
    long degree() const;
    Int wreath_order() const;
};

// Witness for realizability: the top cycle type and, per top cycle, the
// subtree realizing the part composition below it.  Leaves carry no children.
struct TypeTree {
    CycleType type;
    std::vector<std::shared_ptr<TypeTree>> children;  // one per part of type

    // Multiset of global cycle lengths this tree composes.
    CycleType flatten() const;
};

// Search with memoization over (canonical partition, tower suffix); larger
// parts first.  Child assignments are independent because every element of
// the lower group occurs as the cycle product around a top cycle.
std::optional<TypeTree> realizable_in_tower(const CycleType& tau,
                                            const Tower& tower);

// True iff tau is realizable in no tower AGL1(p_1) wr ... wr AGL1(p_r) over
// any ordered prime factorization p_1 * ... * p_r = n.
bool obstruction_all_towers(const CycleType& tau, long n);

enum class ParityCheck { Pass, Fail, Inapplicable };
// Necessary condition for types with parts in {1, q}: q = p^e with p odd and
// q not dividing n forces an even number of q-cycles in every AGL1-tower
// element over n.
ParityCheck parity_necessary(const CycleType& tau, long n, long q);

// Product of the members' full-cycle proportions.
Rat full_cycle_proportion(const Tower& tower);
Rat full_cycle_proportion(const GroupDescriptor& g);

// Exhaustive element enumeration of the iterated wreath product
// (order <= 10^7, degree <= 12), tallied by cycle type.
std::vector<std::pair<CycleType, long>> brute_force_tower(const Tower& tower);

}  // namespace arbordyn::wreath

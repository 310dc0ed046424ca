// Cycle types: partitions of a permutation degree, canonically sorted
// descending.  Shared between the wreath calculus, the ramification
// predictor and the critical-fiber reports.
#pragma once

#include <string>
#include <vector>

#include "arbordyn/numbers.hpp"

namespace arbordyn::wreath {

struct CycleType {
    std::vector<long> parts;  // descending, all >= 1

    CycleType() = default;
    explicit CycleType(std::vector<long> p);

    long degree() const;
    // lcm of the parts = order of a permutation of this type
    long order() const;
    bool is_full_cycle() const { return parts.size() == 1; }
    long count(long part) const;

    // grammar: comma list with `kxm` run-length, e.g. "3,3,1x43"
    static CycleType parse(const std::string& text);
    std::string str() const;

    auto operator<=>(const CycleType&) const = default;
};

}  // namespace arbordyn::wreath

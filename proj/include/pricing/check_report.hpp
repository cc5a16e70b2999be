#pragma once

#include <string>
#include <vector>

#include "pricing/rational.hpp"

namespace pricing::verify {

// Outcome of one exact inequality check. A failing report carries the first
// violating index (round/step, -1 if global) and the offending lhs/rhs pair.
struct CheckReport {
    std::string claim;
    bool pass = true;
    long index = -1;
    Rational lhs = 0;
    Rational rhs = 0;
    std::string detail;

    static CheckReport ok(std::string claim, std::string detail = {}) {
        CheckReport r;
        r.claim = std::move(claim);
        r.detail = std::move(detail);
        return r;
    }

    static CheckReport violation(std::string claim, long index, Rational lhs, Rational rhs,
                                 std::string detail = {}) {
        CheckReport r;
        r.claim = std::move(claim);
        r.pass = false;
        r.index = index;
        r.lhs = std::move(lhs);
        r.rhs = std::move(rhs);
        r.detail = std::move(detail);
        return r;
    }
};

inline bool all_pass(const std::vector<CheckReport>& reports) {
    for (const auto& r : reports) {
        if (!r.pass) return false;
    }
    return true;
}

} // namespace pricing::verify

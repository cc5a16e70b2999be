#pragma once

// Independent reference implementations used only by tests. These deliberately
// avoid the library's optimized paths: plain subset loops, no memoization, no
// incremental tables, and a from-scratch reading of the tie rule, so that an
// agreement with the product code is meaningful.

#include <algorithm>
#include <optional>
#include <vector>

#include "pricing/market.hpp"
#include "pricing/valuations.hpp"

namespace testoracle {

using pricing::Allocation;
using pricing::GoodSet;
using pricing::Instance;
using pricing::Prices;
using pricing::Rational;
using pricing::Valuation;

inline std::vector<int> ids_of(GoodSet s) {
    std::vector<int> out;
    for (int i = 0; i < pricing::kMaxGoods; ++i) {
        if ((s >> i) & 1u) out.push_back(i);
    }
    return out;
}

// Lexicographic comparison of ascending id sequences, written on plain vectors.
inline bool lex_ids_less(GoodSet a, GoodSet b) {
    return ids_of(a) < ids_of(b);
}

inline Rational price_of(const Prices& p, GoodSet t) {
    Rational total = 0;
    for (int i : ids_of(t)) total += *p[static_cast<std::size_t>(i)];
    return total;
}

// Demand by unstructured enumeration: every subset of `available`, utility
// via the public value oracle, ties by cardinality then id-sequence order.
inline GoodSet demand(const Valuation& v, const Prices& p, GoodSet available) {
    GoodSet best = 0;
    Rational best_u = 0;
    for (GoodSet t = 0;; t = (t - available) & available) {
        const Rational u = v.value(t) - price_of(p, t);
        const bool better =
            u > best_u ||
            (u == best_u && (pricing::set_size(t) < pricing::set_size(best) ||
                             (pricing::set_size(t) == pricing::set_size(best) &&
                              lex_ids_less(t, best))));
        if (better) {
            best = t;
            best_u = u;
        }
        if (t == available) break;
    }
    return best;
}

inline int quantity_demand(const Valuation& v, const Rational& p, int max_q, bool largest) {
    int best = 0;
    Rational best_u = 0;
    for (int q = 0; q <= max_q; ++q) {
        const Rational u = v.table()[static_cast<std::size_t>(q)] - p * q;
        if (u > best_u || (largest && u == best_u && q > best)) {
            best_u = u;
            best = q;
        }
    }
    return best;
}

// Maximum achievable welfare by raw recursion over all feasible bundle
// choices. No memoization or pruning; call only on tiny instances.
inline Rational max_welfare(const Instance& inst, std::vector<int>& remaining, int buyer) {
    if (buyer == inst.buyer_count()) return Rational(0);
    GoodSet open = 0;
    for (int i = 0; i < inst.m; ++i) {
        if (remaining[static_cast<std::size_t>(i)] > 0) open |= pricing::good_bit(i);
    }
    Rational best = 0;
    bool first = true;
    for (GoodSet t = 0;; t = (t - open) & open) {
        for (int i : ids_of(t)) --remaining[static_cast<std::size_t>(i)];
        Rational cand = inst.buyers[static_cast<std::size_t>(buyer)].value(t) +
                        max_welfare(inst, remaining, buyer + 1);
        for (int i : ids_of(t)) ++remaining[static_cast<std::size_t>(i)];
        if (first || cand > best) {
            best = cand;
            first = false;
        }
        if (t == open) break;
    }
    return best;
}

inline Rational max_welfare(const Instance& inst) {
    std::vector<int> remaining = inst.supply;
    return max_welfare(inst, remaining, 0);
}

// Exhaustive unit-demand assignment: every buyer takes nothing or one good she
// values positively, within supply. The first optimum in the per-buyer option
// order (goods ascending, nothing last) is the canonical one.
struct AssignmentResult {
    std::vector<int> assigned; // good id or -1 per buyer
    Rational welfare = 0;
};

inline void assignment_scan(const Instance& inst, std::vector<int>& remaining,
                            std::vector<int>& current, int buyer, Rational acc,
                            std::optional<AssignmentResult>& best) {
    if (buyer == inst.buyer_count()) {
        if (!best || acc > best->welfare) best = AssignmentResult{current, acc};
        return;
    }
    const Valuation& v = inst.buyers[static_cast<std::size_t>(buyer)];
    for (int i = 0; i < inst.m; ++i) {
        if (remaining[static_cast<std::size_t>(i)] == 0) continue;
        const Rational val = v.value(pricing::good_bit(i));
        if (sgn(val) <= 0) continue;
        --remaining[static_cast<std::size_t>(i)];
        current[static_cast<std::size_t>(buyer)] = i;
        assignment_scan(inst, remaining, current, buyer + 1, acc + val, best);
        ++remaining[static_cast<std::size_t>(i)];
    }
    current[static_cast<std::size_t>(buyer)] = -1;
    assignment_scan(inst, remaining, current, buyer + 1, acc, best);
}

inline AssignmentResult best_assignment(const Instance& inst) {
    std::vector<int> remaining = inst.supply;
    std::vector<int> current(static_cast<std::size_t>(inst.buyer_count()), -1);
    std::optional<AssignmentResult> best;
    assignment_scan(inst, remaining, current, 0, Rational(0), best);
    return *best;
}

// Direct envy test at prices p: no buyer strictly prefers any other subset of
// the finite-priced goods to her own bundle.
inline bool envy_free(const Instance& inst, const Prices& p, const Allocation& a) {
    GoodSet priced = 0;
    for (int i = 0; i < inst.m; ++i) {
        if (p[static_cast<std::size_t>(i)].has_value()) priced |= pricing::good_bit(i);
    }
    for (int j = 0; j < inst.buyer_count(); ++j) {
        const GoodSet got = a.bundles[static_cast<std::size_t>(j)];
        if ((got & ~priced) != 0) return false;
        const Valuation& v = inst.buyers[static_cast<std::size_t>(j)];
        const Rational mine = v.value(got) - price_of(p, got);
        for (GoodSet t = 0;; t = (t - priced) & priced) {
            if (v.value(t) - price_of(p, t) > mine) return false;
            if (t == priced) break;
        }
    }
    return true;
}

} // namespace testoracle

#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "pricing/errors.hpp"
#include "pricing/market.hpp"
#include "pricing/rational.hpp"
#include "pricing/valuations.hpp"

namespace pricing::multiunit {

// All goods in this module are interchangeable: instances have one copy of
// each of m goods and every buyer's value depends only on her quantity.

inline void validate_multiunit(const Instance& inst) {
    inst.validate();
    require(inst.m >= 2, ErrorKind::Input, "need at least two goods");
    for (int k : inst.supply)
        require(k == 1, ErrorKind::Input, "every good must have exactly one copy");
    for (const auto& b : inst.buyers)
        require(b.cls() == ValuationClass::MultiUnit, ErrorKind::Unsupported,
                "every buyer must value quantities only");
}

// No buyer gains anything beyond floor(m/2) units.
inline bool check_no_overwhelming(const Instance& inst) {
    const int half = inst.m / 2;
    for (const auto& b : inst.buyers) {
        const auto& w = b.table();
        for (int q = half + 1; q <= inst.m; ++q) {
            if (w[static_cast<std::size_t>(q)] != w[static_cast<std::size_t>(half)])
                return false;
        }
    }
    return true;
}

// Total units demanded at a single per-unit price.
inline long total_demand(const Instance& inst, const Rational& p, TieMode tie) {
    long total = 0;
    for (const auto& b : inst.buyers)
        total += valuations::demand_quantity(b, p, inst.m, tie);
    return total;
}

// Every per-unit price at which some buyer is indifferent between two
// quantities: all pairwise slopes (w(q1)-w(q2))/(q1-q2), plus zero.
// Sorted ascending, deduplicated. Demands are constant between candidates.
inline std::vector<Rational> indifference_candidates(const Instance& inst) {
    std::vector<Rational> out{Rational(0)};
    for (const auto& b : inst.buyers) {
        const auto& w = b.table();
        for (int q1 = 1; q1 <= inst.m; ++q1) {
            for (int q2 = 0; q2 < q1; ++q2) {
                out.push_back((w[static_cast<std::size_t>(q1)] -
                               w[static_cast<std::size_t>(q2)]) /
                              Rational(q1 - q2));
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Smallest candidate price at which cautious (smallest-tie) demand fits the
// m available units. The largest candidate always qualifies, since at the
// top slope every buyer's cautious demand is zero.
inline Rational threshold_price(const Instance& inst) {
    for (const Rational& p : indifference_candidates(inst)) {
        if (total_demand(inst, p, TieMode::Smallest) <= inst.m) return p;
    }
    fail(ErrorKind::Internal, "no candidate price cleared the market");
}

// Start from cautious demands and grow buyers (ascending index) to larger
// quantities they are exactly indifferent to, while everything still fits.
// At the fixed point no buyer has an equally good larger quantity that fits.
inline std::vector<int> locally_maximal_alloc(const Instance& inst, const Rational& p) {
    const int n = inst.buyer_count();
    std::vector<int> q(static_cast<std::size_t>(n), 0);
    long total = 0;
    for (int j = 0; j < n; ++j) {
        q[static_cast<std::size_t>(j)] = valuations::demand_quantity(
            inst.buyers[static_cast<std::size_t>(j)], p, inst.m, TieMode::Smallest);
        total += q[static_cast<std::size_t>(j)];
    }
    require(total <= inst.m, ErrorKind::Input,
            "cautious demand must fit the supply before enlarging");
    bool changed = true;
    while (changed) {
        changed = false;
        for (int j = 0; j < n; ++j) {
            const auto& w = inst.buyers[static_cast<std::size_t>(j)].table();
            const int cur = q[static_cast<std::size_t>(j)];
            const Rational cur_u = w[static_cast<std::size_t>(cur)] - p * cur;
            for (int big = inst.m; big > cur; --big) {
                if (total - cur + big > inst.m) continue;
                const Rational u = w[static_cast<std::size_t>(big)] - p * big;
                if (u == cur_u) {
                    total += big - cur;
                    q[static_cast<std::size_t>(j)] = big;
                    changed = true;
                    break;
                }
            }
        }
    }
    return q;
}

// ---------------------------------------------------------------------------
// The single-price mechanism
// ---------------------------------------------------------------------------

enum class MultiUnitCase { Threshold, Halving, HalvingTail };

inline const char* case_name(MultiUnitCase c) {
    switch (c) {
        case MultiUnitCase::Threshold: return "threshold";
        case MultiUnitCase::Halving: return "halving";
        case MultiUnitCase::HalvingTail: return "halving-tail";
    }
    return "?";
}

struct MultiUnitSolution {
    Rational price;
    std::vector<int> quantities;
    MultiUnitCase mode = MultiUnitCase::Threshold;
};

struct MultiUnitRound {
    std::vector<int> benchmark;
    Rational price;
    std::vector<int> sold;
};

struct MultiUnitTrace {
    int gamma = 1;
    Rational probe_price = 0;     // SW(A) / (2 * gamma * theta(A))
    long probe_demand = 0;        // cautious total demand at the probe price
    MultiUnitCase mode = MultiUnitCase::Threshold;
    Rational threshold = 0;       // clearing price when mode == Threshold
    std::vector<MultiUnitRound> rounds; // halving rounds (plus tail if reached)
    int selected = -1;            // index into rounds when halving
    Rational epsilon = 0;         // tail discount when mode == HalvingTail
    int tail_buyer = -1;
};

struct MultiUnitResult {
    MultiUnitSolution solution;
    MultiUnitTrace trace;
};

inline int gamma_multiunit(const Instance& inst) {
    const long g = ceil_log2(Rational(inst.m));
    return static_cast<int>(g < 1 ? 1 : g);
}

namespace detail {

inline std::vector<int> quantities_of(const Allocation& a) {
    std::vector<int> q;
    q.reserve(a.bundles.size());
    for (GoodSet t : a.bundles) q.push_back(set_size(t));
    return q;
}

inline Rational quantity_welfare(const Instance& inst, const std::vector<int>& q) {
    Rational total = 0;
    for (std::size_t j = 0; j < q.size(); ++j)
        total += inst.buyers[j].table()[static_cast<std::size_t>(q[j])];
    return total;
}

inline long quantity_sum(const std::vector<int>& q) {
    long total = 0;
    for (int x : q) total += x;
    return total;
}

} // namespace detail

// Single-price seller for interchangeable units. Starting from an allocation
// whose bundles each fit in half the supply, either a probe shows the market
// is hot (demand overshoots) and a clearing threshold price is posted, or
// prices rise round by round against a shrinking benchmark until at least
// half the benchmark sells.
inline MultiUnitResult solve_multiunit(const Instance& inst, const Allocation& a,
                                       int gamma_override = 0,
                                       const Rational& epsilon_scale = pow2(-20)) {
    validate_multiunit(inst);
    require(check_no_overwhelming(inst), ErrorKind::Assumption,
            "a buyer keeps gaining beyond half the units");
    require(market::feasible(inst, a), ErrorKind::Input,
            "starting allocation must be feasible for the instance");
    for (GoodSet t : a.bundles)
        require(set_size(t) <= inst.m / 2, ErrorKind::Assumption,
                "a starting bundle exceeds half the units");
    require(market::theta(a) >= 1, ErrorKind::Degenerate,
            "starting allocation must sell at least one unit");
    require(sgn(epsilon_scale) > 0 && epsilon_scale < 1, ErrorKind::Input,
            "price discount scale must be in (0, 1)");

    MultiUnitResult out;
    MultiUnitTrace& trace = out.trace;
    trace.gamma = gamma_override >= 1 ? gamma_override : gamma_multiunit(inst);
    const Rational sw_a = market::social_welfare(inst, a);
    require(sgn(sw_a) > 0, ErrorKind::Degenerate,
            "starting allocation must carry positive welfare");
    const long theta_a = market::theta(a);
    trace.probe_price = sw_a / (Rational(2 * trace.gamma) * Rational(theta_a));
    trace.probe_demand = total_demand(inst, trace.probe_price, TieMode::Smallest);

    if (trace.probe_demand > inst.m) {
        trace.mode = MultiUnitCase::Threshold;
        trace.threshold = threshold_price(inst);
        out.solution.mode = MultiUnitCase::Threshold;
        out.solution.price = trace.threshold;
        out.solution.quantities = locally_maximal_alloc(inst, trace.threshold);
        return out;
    }

    trace.mode = MultiUnitCase::Halving;
    std::vector<int> benchmark = detail::quantities_of(a);
    for (int t = 1; t <= trace.gamma; ++t) {
        const long theta_b = detail::quantity_sum(benchmark);
        if (theta_b <= 0) fail(ErrorKind::Internal, "benchmark emptied before stopping");
        MultiUnitRound round;
        round.benchmark = benchmark;
        round.price = detail::quantity_welfare(inst, benchmark) /
                      (Rational(2 * trace.gamma) * Rational(theta_b));
        for (int j = 0; j < inst.buyer_count(); ++j)
            round.sold.push_back(valuations::demand_quantity(
                inst.buyers[static_cast<std::size_t>(j)], round.price, inst.m,
                TieMode::Smallest));
        const long theta_s = detail::quantity_sum(round.sold);
        trace.rounds.push_back(round);
        if (theta_b <= 2 * theta_s) {
            trace.selected = static_cast<int>(trace.rounds.size()) - 1;
            out.solution.mode = MultiUnitCase::Halving;
            out.solution.price = round.price;
            out.solution.quantities = round.sold;
            return out;
        }
        benchmark = round.sold;
    }

    // Unreachable when the starting welfare is positive: cautious demand sells
    // at least one unit per round, so the stop rule fires within gamma rounds.
    // Kept for contract completeness: sell a single unit to the buyer with the
    // highest one-unit value, priced just below that value.
    trace.mode = MultiUnitCase::HalvingTail;
    int star = 0;
    for (int j = 1; j < inst.buyer_count(); ++j) {
        if (inst.buyers[static_cast<std::size_t>(j)].table()[1] >
            inst.buyers[static_cast<std::size_t>(star)].table()[1])
            star = j;
    }
    const Rational star_value = inst.buyers[static_cast<std::size_t>(star)].table()[1];
    trace.epsilon = star_value * epsilon_scale;
    trace.tail_buyer = star;
    MultiUnitRound tail;
    tail.benchmark = benchmark;
    tail.price = star_value - trace.epsilon;
    tail.sold.assign(static_cast<std::size_t>(inst.buyer_count()), 0);
    tail.sold[static_cast<std::size_t>(star)] = 1;
    trace.rounds.push_back(tail);
    trace.selected = static_cast<int>(trace.rounds.size()) - 1;
    out.solution.mode = MultiUnitCase::HalvingTail;
    out.solution.price = tail.price;
    out.solution.quantities = tail.sold;
    return out;
}

} // namespace pricing::multiunit

namespace pricing {
using multiunit::MultiUnitCase;
using multiunit::MultiUnitResult;
using multiunit::MultiUnitSolution;
using multiunit::MultiUnitTrace;
} // namespace pricing

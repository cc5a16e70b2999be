#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "pricing/errors.hpp"
#include "pricing/market.hpp"
#include "pricing/rng.hpp"

namespace pricing::mechanisms {

using market::Allocation;
using market::Instance;

// A permutation of the buyer indices [0, N).
using ArrivalOrder = std::vector<int>;

inline constexpr int kDefaultFactorialCap = 8;

inline void check_order(const ArrivalOrder& order, int buyer_count) {
    require(static_cast<int>(order.size()) == buyer_count, ErrorKind::Input,
            "arrival order length must equal the buyer count");
    std::vector<bool> seen(static_cast<std::size_t>(buyer_count), false);
    for (int j : order) {
        require(j >= 0 && j < buyer_count && !seen[static_cast<std::size_t>(j)],
                ErrorKind::Input, "arrival order is not a permutation");
        seen[static_cast<std::size_t>(j)] = true;
    }
}

// Sequential posted-price mechanism: buyers arrive in `order`; each purchases
// her demanded bundle from the goods still in stock (sold < q_i) at finite
// prices. The stock snapshot is fixed within a buyer's turn.
inline Allocation sequential_run(const Instance& inst, const Prices& p,
                                 const std::vector<int>& caps, const ArrivalOrder& order,
                                 int demand_cap = kDefaultDemandCap) {
    check_order(order, inst.buyer_count());
    require(static_cast<int>(caps.size()) == inst.m, ErrorKind::Input,
            "cap vector length must equal the good count");
    for (int i = 0; i < inst.m; ++i) {
        require(caps[static_cast<std::size_t>(i)] >= 0 &&
                    caps[static_cast<std::size_t>(i)] <= inst.supply[static_cast<std::size_t>(i)],
                ErrorKind::Input, "cap outside [0, k_i] for good " + std::to_string(i));
    }

    Allocation out = Allocation::none(inst.buyer_count());
    std::vector<int> sold(static_cast<std::size_t>(inst.m), 0);
    for (int j : order) {
        GoodSet available = 0;
        for (int i = 0; i < inst.m; ++i) {
            if (p[static_cast<std::size_t>(i)].has_value() &&
                sold[static_cast<std::size_t>(i)] < caps[static_cast<std::size_t>(i)])
                available |= good_bit(i);
        }
        const GoodSet bought =
            valuations::demand(inst.buyers[static_cast<std::size_t>(j)], p, available, demand_cap);
        out.bundles[static_cast<std::size_t>(j)] = bought;
        GoodSet s = bought;
        for (int i = 0; s != 0; ++i, s >>= 1) {
            if (s & 1u) ++sold[static_cast<std::size_t>(i)];
        }
    }
    return out;
}

// Validity report for the simultaneous mechanism: the outcome is valid iff it
// is supply-feasible and every buyer's bundle maximizes her utility over ALL
// finite-priced goods (supply is not a constraint on envy).
struct ValidityReport {
    bool valid = true;
    std::string message;
    int buyer = -1;
    int good = -1;
};

inline ValidityReport simultaneous_check(const Instance& inst, const Prices& p,
                                         const Allocation& a,
                                         int demand_cap = kDefaultDemandCap) {
    for (int i = 0; i < inst.m; ++i) {
        if (copies_allocated(a, i) > inst.supply[static_cast<std::size_t>(i)]) {
            return {false, "good " + std::to_string(i) + " is over-allocated", -1, i};
        }
    }
    GoodSet priced = 0;
    for (int i = 0; i < inst.m; ++i) {
        if (p[static_cast<std::size_t>(i)].has_value()) priced |= good_bit(i);
    }
    for (int j = 0; j < inst.buyer_count(); ++j) {
        const GoodSet got = a.bundles[static_cast<std::size_t>(j)];
        if ((got & ~priced) != 0) {
            return {false, "buyer " + std::to_string(j) + " holds an unavailable good", j,
                    set_elements(got & ~priced)[0]};
        }
        const Valuation& v = inst.buyers[static_cast<std::size_t>(j)];
        const GoodSet ideal = valuations::demand(v, p, priced, demand_cap);
        const Rational got_u = v.value(got) - valuations::price_sum(p, got);
        const Rational best_u = v.value(ideal) - valuations::price_sum(p, ideal);
        if (got_u < best_u) {
            return {false,
                    "buyer " + std::to_string(j) + " envies bundle {" +
                        [&] {
                            std::string ids;
                            for (int i : set_elements(ideal)) {
                                if (!ids.empty()) ids += ",";
                                ids += std::to_string(i);
                            }
                            return ids;
                        }() +
                        "}",
                    j, -1};
        }
    }
    return {};
}

// All N! arrival orders in lexicographic order, guarded by a factorial cap.
inline std::vector<ArrivalOrder> all_orders(int buyer_count,
                                            int factorial_cap = kDefaultFactorialCap) {
    require(buyer_count >= 1, ErrorKind::Input, "need at least one buyer");
    require(buyer_count <= factorial_cap, ErrorKind::CapExceeded,
            "buyer count exceeds the factorial cap for full order enumeration");
    ArrivalOrder base(static_cast<std::size_t>(buyer_count));
    std::iota(base.begin(), base.end(), 0);
    std::vector<ArrivalOrder> out;
    do {
        out.push_back(base);
    } while (std::next_permutation(base.begin(), base.end()));
    return out;
}

// Result of scanning a set of orders for the revenue minimizer.
struct WorstOrderOutcome {
    ArrivalOrder order;
    Allocation alloc;
    Rational revenue;
};

// Runs every order in pi_set and returns the minimum-revenue one (ties: the
// earliest order in the listed sequence).
inline WorstOrderOutcome worst_order_outcome(const Instance& inst, const Prices& p,
                                             const std::vector<int>& caps,
                                             const std::vector<ArrivalOrder>& pi_set,
                                             int demand_cap = kDefaultDemandCap) {
    require(!pi_set.empty(), ErrorKind::Input, "order set must be non-empty");
    WorstOrderOutcome best;
    bool first = true;
    for (const ArrivalOrder& order : pi_set) {
        Allocation a = sequential_run(inst, p, caps, order, demand_cap);
        Rational rev = market::revenue(p, a);
        if (first || rev < best.revenue) {
            best = {order, std::move(a), std::move(rev)};
            first = false;
        }
    }
    return best;
}

// A distribution over arrival orders. Explicit weights are exact rationals;
// sampling consumes one 64-bit draw and inverts the CDF with integer
// comparisons only.
struct OrderSampler {
    enum class Kind { Uniform, Explicit };
    Kind kind = Kind::Uniform;
    std::vector<ArrivalOrder> orders; // Explicit
    std::vector<Rational> weights;    // Explicit, positive

    static OrderSampler uniform() { return {}; }

    static OrderSampler explicit_orders(std::vector<ArrivalOrder> orders,
                                        std::vector<Rational> weights) {
        require(!orders.empty() && orders.size() == weights.size(), ErrorKind::Input,
                "explicit sampler needs matching non-empty orders and weights");
        for (const auto& w : weights)
            require(sgn(w) > 0, ErrorKind::Input, "sampler weights must be positive");
        OrderSampler s;
        s.kind = Kind::Explicit;
        s.orders = std::move(orders);
        s.weights = std::move(weights);
        return s;
    }
};

inline ArrivalOrder sample_order(const OrderSampler& sampler, int buyer_count, Rng& rng) {
    if (sampler.kind == OrderSampler::Kind::Uniform) {
        return rng.permutation(buyer_count);
    }
    Rational total = 0;
    for (const auto& w : sampler.weights) total += w;
    // Draw u uniform over [0, 2^64) and pick the first prefix with
    // cum/total > u/2^64, i.e. cum * 2^64 > u * total.
    const Rational scale = pow2(64);
    const Rational u(Integer(static_cast<unsigned long>(rng.next())));
    Rational cum = 0;
    for (std::size_t idx = 0; idx < sampler.orders.size(); ++idx) {
        cum += sampler.weights[idx];
        if (cum * scale > u * total) {
            check_order(sampler.orders[idx], buyer_count);
            return sampler.orders[idx];
        }
    }
    check_order(sampler.orders.back(), buyer_count);
    return sampler.orders.back();
}

} // namespace pricing::mechanisms

namespace pricing {
using mechanisms::ArrivalOrder;
using mechanisms::OrderSampler;
} // namespace pricing

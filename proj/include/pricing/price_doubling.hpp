#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pricing/check_report.hpp"
#include "pricing/errors.hpp"
#include "pricing/market.hpp"
#include "pricing/rational.hpp"
#include "pricing/valuations.hpp"

namespace pricing::doubling {

// ---------------------------------------------------------------------------
// Welfare black boxes for unit-demand markets
// ---------------------------------------------------------------------------

// A subroutine that returns an envy-free priced outcome whose welfare is
// within the declared factor of optimal. alpha = 1 means exactly optimal.
struct WelfareBlackBox {
    std::string name;
    Rational alpha = 1;
    std::function<std::pair<Prices, Allocation>(const Instance&)> run;
};

namespace detail {

inline void require_unit_demand(const Instance& inst) {
    for (const auto& b : inst.buyers) {
        require(b.cls() == ValuationClass::UnitDemand, ErrorKind::Unsupported,
                "this subroutine handles unit-demand buyers only");
    }
}

// Buyer j's options in deterministic order: positive-value goods ascending,
// then the empty hand. Zero-value goods are never assigned.
inline std::vector<int> buyer_options(const Instance& inst, int j) {
    std::vector<int> opts;
    for (int i = 0; i < inst.m; ++i) {
        if (sgn(inst.buyers[static_cast<std::size_t>(j)].value(good_bit(i))) > 0)
            opts.push_back(i);
    }
    opts.push_back(-1);
    return opts;
}

// Least prices supporting the assignment: every unassigned buyer affords
// nothing, and no assigned buyer prefers another good. Computed by raising
// prices along the envy constraints until they stabilize.
inline Prices minimal_supporting_prices(const Instance& inst, const std::vector<int>& assigned) {
    std::vector<Rational> p(static_cast<std::size_t>(inst.m), Rational(0));
    for (int j = 0; j < inst.buyer_count(); ++j) {
        if (assigned[static_cast<std::size_t>(j)] >= 0) continue;
        for (int i = 0; i < inst.m; ++i) {
            const Rational v = inst.buyers[static_cast<std::size_t>(j)].value(good_bit(i));
            if (v > p[static_cast<std::size_t>(i)]) p[static_cast<std::size_t>(i)] = v;
        }
    }
    bool changed = true;
    for (int sweep = 0; changed && sweep <= inst.m + 1; ++sweep) {
        changed = false;
        for (int j = 0; j < inst.buyer_count(); ++j) {
            const int g = assigned[static_cast<std::size_t>(j)];
            if (g < 0) continue;
            const Rational vg = inst.buyers[static_cast<std::size_t>(j)].value(good_bit(g));
            for (int i = 0; i < inst.m; ++i) {
                if (i == g) continue;
                const Rational lower =
                    p[static_cast<std::size_t>(g)] +
                    inst.buyers[static_cast<std::size_t>(j)].value(good_bit(i)) - vg;
                if (p[static_cast<std::size_t>(i)] < lower) {
                    p[static_cast<std::size_t>(i)] = lower;
                    changed = true;
                }
            }
        }
    }
    if (changed) fail(ErrorKind::Internal, "price propagation failed to stabilize");
    for (int j = 0; j < inst.buyer_count(); ++j) {
        const int g = assigned[static_cast<std::size_t>(j)];
        if (g < 0) continue;
        if (p[static_cast<std::size_t>(g)] >
            inst.buyers[static_cast<std::size_t>(j)].value(good_bit(g)))
            fail(ErrorKind::Internal, "supporting price exceeds the holder's value");
    }
    Prices out(static_cast<std::size_t>(inst.m));
    for (int i = 0; i < inst.m; ++i) out[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(i)];
    return out;
}

inline Allocation to_allocation(const Instance& inst, const std::vector<int>& assigned) {
    Allocation a = Allocation::none(inst.buyer_count());
    for (int j = 0; j < inst.buyer_count(); ++j) {
        if (assigned[static_cast<std::size_t>(j)] >= 0)
            a.bundles[static_cast<std::size_t>(j)] =
                good_bit(assigned[static_cast<std::size_t>(j)]);
    }
    return a;
}

} // namespace detail

// Exactly optimal unit-demand outcome via a table over remaining supply,
// with the least envy-free prices supporting it. Ties resolve buyer by buyer:
// the smallest positive-value good first, keeping a good over going home.
inline std::pair<Prices, Allocation> unit_demand_walrasian(const Instance& inst) {
    inst.validate();
    detail::require_unit_demand(inst);
    const int n = inst.buyer_count();

    std::vector<std::uint64_t> stride(static_cast<std::size_t>(inst.m), 1);
    std::uint64_t states = 1;
    for (int i = 0; i < inst.m; ++i) {
        stride[static_cast<std::size_t>(i)] = states;
        states *= static_cast<std::uint64_t>(inst.supply[static_cast<std::size_t>(i)] + 1);
        require(states <= 2000000, ErrorKind::CapExceeded,
                "supply grid too large for the exact assignment table");
    }
    auto has_copy = [&](std::uint64_t state, int good) {
        return (state / stride[static_cast<std::size_t>(good)]) %
                   static_cast<std::uint64_t>(
                       inst.supply[static_cast<std::size_t>(good)] + 1) >
               0;
    };

    std::vector<std::vector<Rational>> best(
        static_cast<std::size_t>(n) + 1,
        std::vector<Rational>(static_cast<std::size_t>(states), Rational(0)));
    std::vector<std::vector<int>> options(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) options[static_cast<std::size_t>(j)] = detail::buyer_options(inst, j);

    for (int j = n - 1; j >= 0; --j) {
        for (std::uint64_t s = 0; s < states; ++s) {
            Rational cur = best[static_cast<std::size_t>(j) + 1][s];
            for (int i : options[static_cast<std::size_t>(j)]) {
                if (i < 0 || !has_copy(s, i)) continue;
                Rational cand =
                    inst.buyers[static_cast<std::size_t>(j)].value(good_bit(i)) +
                    best[static_cast<std::size_t>(j) + 1][s - stride[static_cast<std::size_t>(i)]];
                if (cand > cur) cur = cand;
            }
            best[static_cast<std::size_t>(j)][s] = cur;
        }
    }

    std::vector<int> assigned(static_cast<std::size_t>(n), -1);
    std::uint64_t state = states - 1;
    for (int j = 0; j < n; ++j) {
        const Rational target = best[static_cast<std::size_t>(j)][state];
        for (int i : options[static_cast<std::size_t>(j)]) {
            if (i < 0) {
                if (best[static_cast<std::size_t>(j) + 1][state] == target) break;
                fail(ErrorKind::Internal, "assignment reconstruction out of sync");
            }
            if (!has_copy(state, i)) continue;
            const Rational cand =
                inst.buyers[static_cast<std::size_t>(j)].value(good_bit(i)) +
                best[static_cast<std::size_t>(j) + 1][state - stride[static_cast<std::size_t>(i)]];
            if (cand == target) {
                assigned[static_cast<std::size_t>(j)] = i;
                state -= stride[static_cast<std::size_t>(i)];
                break;
            }
        }
    }

    return {detail::minimal_supporting_prices(inst, assigned),
            detail::to_allocation(inst, assigned)};
}

// Same contract as unit_demand_walrasian but by plain exhaustive search over
// assignment vectors; meant as an independent cross-check on small inputs.
inline std::pair<Prices, Allocation> brute_walrasian(const Instance& inst,
                                                     std::uint64_t leaf_cap = 2000000) {
    inst.validate();
    detail::require_unit_demand(inst);
    const int n = inst.buyer_count();
    std::vector<std::vector<int>> options(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) options[static_cast<std::size_t>(j)] = detail::buyer_options(inst, j);

    std::vector<int> remaining = inst.supply;
    std::vector<int> cur(static_cast<std::size_t>(n), -1);
    std::vector<int> best_assign(static_cast<std::size_t>(n), -1);
    Rational best_welfare = -1;
    std::uint64_t leaves = 0;

    auto dfs = [&](auto&& self, int j, const Rational& acc) -> void {
        if (j == n) {
            ++leaves;
            require(leaves <= leaf_cap, ErrorKind::CapExceeded,
                    "exhaustive assignment search exceeded its leaf budget");
            if (acc > best_welfare) { // strict: first-found optimum wins ties
                best_welfare = acc;
                best_assign = cur;
            }
            return;
        }
        for (int i : options[static_cast<std::size_t>(j)]) {
            if (i < 0) {
                cur[static_cast<std::size_t>(j)] = -1;
                self(self, j + 1, acc);
                continue;
            }
            if (remaining[static_cast<std::size_t>(i)] == 0) continue;
            --remaining[static_cast<std::size_t>(i)];
            cur[static_cast<std::size_t>(j)] = i;
            self(self, j + 1,
                 acc + inst.buyers[static_cast<std::size_t>(j)].value(good_bit(i)));
            cur[static_cast<std::size_t>(j)] = -1;
            ++remaining[static_cast<std::size_t>(i)];
        }
    };
    dfs(dfs, 0, Rational(0));

    return {detail::minimal_supporting_prices(inst, best_assign),
            detail::to_allocation(inst, best_assign)};
}

inline WelfareBlackBox walrasian_box() {
    return {"unit_demand_walrasian", 1,
            [](const Instance& inst) { return unit_demand_walrasian(inst); }};
}

inline WelfareBlackBox brute_walrasian_box() {
    return {"brute_walrasian", 1, [](const Instance& inst) { return brute_walrasian(inst); }};
}

inline WelfareBlackBox black_box_by_name(const std::string& name) {
    if (name == "unit_demand_walrasian") return walrasian_box();
    if (name == "brute_walrasian") return brute_walrasian_box();
    fail(ErrorKind::Input, "unknown welfare subroutine: " + name);
}

// ---------------------------------------------------------------------------
// Reserve-price augmentation
// ---------------------------------------------------------------------------

// Adds k_i + 1 unit-demand buyers per good, each valuing only that good at
// the reserve r. Original buyers keep indices 0..N-1; dummies follow grouped
// by good in ascending order.
inline Instance augment_with_dummies(const Instance& inst, const Rational& reserve) {
    inst.validate();
    require(sgn(reserve) >= 0, ErrorKind::Input, "reserve price must be non-negative");
    Instance aug = inst;
    for (int i = 0; i < inst.m; ++i) {
        std::vector<Rational> v(static_cast<std::size_t>(inst.m), Rational(0));
        v[static_cast<std::size_t>(i)] = reserve;
        for (int c = 0; c <= inst.supply[static_cast<std::size_t>(i)]; ++c)
            aug.buyers.push_back(Valuation::unit_demand(v));
    }
    return aug;
}

// Drops the dummy bundles, keeping the first original_buyers entries.
inline Allocation strip_dummies(const Allocation& a, int original_buyers) {
    require(static_cast<std::size_t>(original_buyers) <= a.bundles.size(), ErrorKind::Input,
            "cannot keep more bundles than the allocation has");
    Allocation out;
    out.bundles.assign(a.bundles.begin(), a.bundles.begin() + original_buyers);
    return out;
}

// ---------------------------------------------------------------------------
// The doubling run
// ---------------------------------------------------------------------------

struct ReductionStep {
    Rational reserve;
    Prices prices;
    Allocation full;     // black-box outcome on the augmented market
    Allocation stripped; // original buyers only
};

struct ReductionTrace {
    Rational sw0 = 0;   // welfare of the unaugmented black-box outcome
    Rational alpha = 1; // the black box's declared factor
    int gamma = 1;
    std::vector<ReductionStep> steps;
    int selected = -1; // step index whose prices are kept
};

struct ReductionResult {
    PricingSolution solution;
    ReductionTrace trace;
};

// Runs the black box with geometrically doubling reserve prices and keeps the
// earliest step whose revenue (from original buyers) reaches a 1/(6*gamma)
// share of the first step's welfare.
inline ReductionResult price_doubling_run(const Instance& inst, const WelfareBlackBox& bb) {
    inst.validate();
    detail::require_unit_demand(inst);
    require(bb.alpha >= 1, ErrorKind::Input, "welfare factor must be at least 1");
    require(static_cast<bool>(bb.run), ErrorKind::Input, "welfare subroutine is missing");

    ReductionResult out;
    ReductionTrace& trace = out.trace;
    trace.alpha = bb.alpha;

    const auto [p0, s0] = bb.run(inst);
    trace.sw0 = market::social_welfare(inst, s0);
    require(sgn(trace.sw0) > 0, ErrorKind::Degenerate,
            "the market has no welfare to price against");

    const Rational scale = Rational(bb.alpha) * Rational(inst.m) *
                           Rational(ceil_to_integer(inst.avg_supply()));
    const long g = ceil_log2(scale) + 1;
    trace.gamma = static_cast<int>(g < 1 ? 1 : g);

    const Rational total_copies = Rational(inst.total_supply());
    for (int t = 1; t <= trace.gamma; ++t) {
        ReductionStep step;
        step.reserve = pow2(t - 1) * trace.sw0 / (2 * total_copies);
        const Instance aug = augment_with_dummies(inst, step.reserve);
        auto [p, full] = bb.run(aug);
        step.prices = std::move(p);
        step.stripped = strip_dummies(full, inst.buyer_count());
        step.full = std::move(full);
        trace.steps.push_back(std::move(step));
    }

    const Rational threshold = market::social_welfare(inst, trace.steps.front().stripped) /
                               Rational(6 * trace.gamma);
    trace.selected = -1;
    for (std::size_t t = 0; t < trace.steps.size(); ++t) {
        if (market::revenue(trace.steps[t].prices, trace.steps[t].stripped) >= threshold) {
            trace.selected = static_cast<int>(t);
            break;
        }
    }
    require(trace.selected >= 0, ErrorKind::ChargingViolation,
            "no doubling step reached the revenue threshold");

    const ReductionStep& kept = trace.steps[static_cast<std::size_t>(trace.selected)];
    out.solution = PricingSolution{kept.prices, inst.supply, kept.stripped};
    return out;
}

// ---------------------------------------------------------------------------
// Geometric-decay charging over a solution sequence
// ---------------------------------------------------------------------------

// Verifies, over outcomes S^1..S^gamma at their prices:
//   per-step decay   SW(S^t) - SW(S^{t+1}) <= alpha * Rev(S^t)
//   final step       SW(S^gamma)           <= alpha * Rev(S^gamma)
// and the two selection guarantees these imply: the max-revenue step earns at
// least SW(S^1)/(gamma*alpha), and the earliest step with revenue at least
// SW(S^1)/(3*gamma*alpha) still holds two thirds of SW(S^1) as welfare.
inline verify::CheckReport check_simple_charging(
    const Instance& inst, const std::vector<std::pair<Prices, Allocation>>& steps,
    const Rational& alpha) {
    using verify::CheckReport;
    const char* claim = "simple-charging";
    require(!steps.empty(), ErrorKind::Input, "need at least one step");
    require(sgn(alpha) > 0, ErrorKind::Input, "charging factor must be positive");
    const long gamma = static_cast<long>(steps.size());

    std::vector<Rational> sw, rev;
    for (const auto& [p, a] : steps) {
        sw.push_back(market::social_welfare(inst, a));
        rev.push_back(market::revenue(p, a));
    }
    for (long t = 0; t + 1 < gamma; ++t) {
        const Rational lhs = sw[static_cast<std::size_t>(t)] - sw[static_cast<std::size_t>(t) + 1];
        const Rational rhs = alpha * rev[static_cast<std::size_t>(t)];
        if (lhs > rhs)
            return CheckReport::violation(claim, t, lhs, rhs, "per-step welfare decay");
    }
    if (sw.back() > alpha * rev.back())
        return CheckReport::violation(claim, gamma - 1, sw.back(), alpha * rev.back(),
                                      "final-step welfare cover");

    // Max-revenue selection earns a 1/(gamma*alpha) share of SW(S^1).
    std::size_t best = 0;
    for (std::size_t t = 1; t < rev.size(); ++t) {
        if (rev[t] > rev[best]) best = t;
    }
    const Rational share = sw.front() / (Rational(gamma) * alpha);
    if (rev[best] < share)
        return CheckReport::violation(claim, static_cast<long>(best), rev[best], share,
                                      "max-revenue selection share");

    // Earliest step earning a (1 - 1/c) share at c = 3/2 keeps 1/c of the
    // welfare: threshold SW(S^1)/(3*gamma*alpha), welfare floor 2/3 * SW(S^1).
    const Rational third_share = sw.front() / (Rational(3 * gamma) * alpha);
    std::size_t pick = 0;
    bool found = false;
    for (std::size_t t = 0; t < rev.size(); ++t) {
        if (rev[t] >= third_share) {
            pick = t;
            found = true;
            break;
        }
    }
    if (!found)
        return CheckReport::violation(claim, -1, rev[best], third_share,
                                      "no step reached the constant-factor revenue share");
    const Rational floor = Rational(2) * sw.front() / 3;
    if (sw[pick] < floor)
        return CheckReport::violation(claim, static_cast<long>(pick), sw[pick], floor,
                                      "constant-factor welfare floor");

    return CheckReport::ok(claim,
                           "per-step decay, final cover, and both selection shares verified");
}

} // namespace pricing::doubling

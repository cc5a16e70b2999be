#pragma once

// Inequality checkers that certify, with exact rational arithmetic, every
// guarantee the solvers claim: the item-halving chain, the charging
// inequalities and their revenue/welfare conclusions, the dichotomy
// classifier, arrival-order universality, the min-of-samples estimator, the
// reserve-doubling propositions, and the single-price market properties.
// Each checker is a pure function returning a CheckReport; bundles gather
// everything a trace can witness into one list.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "pricing/brute_force.hpp"
#include "pricing/check_report.hpp"
#include "pricing/errors.hpp"
#include "pricing/item_halving.hpp"
#include "pricing/market.hpp"
#include "pricing/mechanisms.hpp"
#include "pricing/multiunit.hpp"
#include "pricing/price_doubling.hpp"
#include "pricing/rational.hpp"
#include "pricing/rng.hpp"
#include "pricing/valuations.hpp"

namespace pricing::verify {

namespace detail {

// Exact per-round quantities re-derived from the instance, never trusted
// from the solver.
struct RoundView {
    Rational rev;
    Rational surp;
    Rational sw_b;
    Rational sw_s;
    long theta_b = 0;
    long theta_s = 0;
};

inline std::vector<RoundView> round_views(const Instance& inst,
                                          const halving::CoreTrace& trace) {
    std::vector<RoundView> views;
    views.reserve(trace.rounds.size());
    for (const auto& round : trace.rounds) {
        RoundView v;
        v.rev = market::revenue(round.prices, round.sold);
        v.surp = market::surplus(inst, round.prices, round.sold);
        v.sw_b = market::social_welfare(inst, round.benchmark);
        v.sw_s = market::social_welfare(inst, round.sold);
        v.theta_b = market::theta(round.benchmark);
        v.theta_s = market::theta(round.sold);
        views.push_back(std::move(v));
    }
    return views;
}

inline void require_trace(const halving::CoreTrace& trace) {
    require(!trace.rounds.empty(), ErrorKind::Input, "trace has no rounds");
    require(trace.gamma == static_cast<int>(trace.rounds.size()), ErrorKind::Input,
            "trace round count disagrees with its loop length");
}

} // namespace detail

// Successive benchmarks hold at most half as many units; once the loop is
// long enough to exhaust the starting count, the final benchmark holds at
// most two units.
inline CheckReport check_halving(const Instance& inst,
                                 const halving::CoreTrace& trace) {
    detail::require_trace(trace);
    const auto views = detail::round_views(inst, trace);
    const char* claim = "item-halving";
    for (std::size_t t = 0; t + 1 < views.size(); ++t) {
        if (Rational(2 * views[t + 1].theta_b) > Rational(views[t].theta_b))
            return CheckReport::violation(claim, static_cast<long>(t),
                                          Rational(2 * views[t + 1].theta_b),
                                          Rational(views[t].theta_b),
                                          "unit count failed to halve");
    }
    if (Rational(views.front().theta_b) <= 2 * pow2(trace.gamma - 1) &&
        views.back().theta_b > 2)
        return CheckReport::violation(claim, trace.gamma - 1,
                                      Rational(views.back().theta_b), Rational(2),
                                      "final benchmark exceeds two units");
    return CheckReport::ok(claim, "halving chain and terminal unit bound verified");
}

// Per-step welfare drops are covered by revenue plus a 1/beta welfare leak,
// the final benchmark is covered outright, and the max-revenue round earns
// at least SW(B1)*(1-(gamma-1)/beta)/(gamma*alpha).
inline CheckReport check_generalized_charging(const Instance& inst,
                                              const halving::CoreTrace& trace,
                                              const Rational& alpha,
                                              const Rational& beta) {
    detail::require_trace(trace);
    require(sgn(alpha) > 0 && sgn(beta) > 0, ErrorKind::Input,
            "charging parameters must be positive");
    const auto views = detail::round_views(inst, trace);
    const char* claim = "generalized-charging";
    for (std::size_t t = 0; t + 1 < views.size(); ++t) {
        const Rational lhs = views[t].sw_b - views[t + 1].sw_b;
        const Rational rhs = alpha * views[t].rev + views[t].sw_b / beta;
        if (lhs > rhs)
            return CheckReport::violation(claim, static_cast<long>(t), lhs, rhs,
                                          "per-step welfare drop exceeds cover");
    }
    if (views.back().sw_b > alpha * views.back().rev)
        return CheckReport::violation(claim, trace.gamma - 1, views.back().sw_b,
                                      alpha * views.back().rev,
                                      "final benchmark welfare uncovered");
    std::size_t best = 0;
    for (std::size_t t = 1; t < views.size(); ++t)
        if (views[t].rev > views[best].rev) best = t;
    const Rational gamma(trace.gamma);
    const Rational bound =
        views.front().sw_b * (Rational(1) - (gamma - 1) / beta) / (gamma * alpha);
    if (views[best].rev < bound)
        return CheckReport::violation(claim, static_cast<long>(best),
                                      views[best].rev, bound,
                                      "max-revenue round misses the charging share");
    return CheckReport::ok(claim,
                           "per-step cover, final cover, and revenue share verified");
}

// Every round leaves buyers at least a (1-1/alpha) share of the benchmark
// welfare once revenue is paid for: SW(B) - Surp <= alpha*Rev + SW(B)/alpha.
inline CheckReport check_surplus_charging(const Instance& inst,
                                          const halving::CoreTrace& trace,
                                          const Rational& alpha) {
    detail::require_trace(trace);
    require(sgn(alpha) > 0, ErrorKind::Input, "charging parameter must be positive");
    const auto views = detail::round_views(inst, trace);
    const char* claim = "surplus-charging";
    for (std::size_t t = 0; t < views.size(); ++t) {
        const Rational lhs = views[t].sw_b - views[t].surp;
        const Rational rhs = alpha * views[t].rev + views[t].sw_b / alpha;
        if (lhs > rhs)
            return CheckReport::violation(claim, static_cast<long>(t), lhs, rhs,
                                          "buyer surplus misses the benchmark share");
    }
    return CheckReport::ok(claim, "surplus cover verified on every round");
}

// On rounds that rebuilt the benchmark from unsold copies, the welfare drop
// is covered by revenue alone (no leak term).
inline CheckReport check_unsold_branch(const Instance& inst,
                                       const halving::CoreTrace& trace,
                                       const Rational& alpha) {
    detail::require_trace(trace);
    require(sgn(alpha) > 0, ErrorKind::Input, "charging parameter must be positive");
    const auto views = detail::round_views(inst, trace);
    const char* claim = "unsold-branch";
    for (std::size_t t = 0; t + 1 < views.size(); ++t) {
        if (trace.rounds[t].branch != halving::RoundBranch::AllocUnsold) continue;
        const Rational lhs = views[t].sw_b - views[t + 1].sw_b;
        const Rational rhs = alpha * views[t].rev;
        if (lhs > rhs)
            return CheckReport::violation(claim, static_cast<long>(t), lhs, rhs,
                                          "unsold rebuild dropped uncovered welfare");
    }
    return CheckReport::ok(claim, "every unsold rebuild covered by revenue alone");
}

// The last round sells the single best item just under its value, covering
// the residual benchmark: Rev = v* - eps and SW(B_final) <= 2*gamma*Rev;
// when the loop was long enough, additionally theta <= 2 and SW <= 2 v*.
inline CheckReport check_tail(const Instance& inst,
                              const halving::CoreTrace& trace) {
    detail::require_trace(trace);
    const auto views = detail::round_views(inst, trace);
    const char* claim = "tail-round";
    const auto& last = trace.rounds.back();
    if (last.branch != halving::RoundBranch::Tail)
        return CheckReport::violation(claim, trace.gamma - 1, Rational(0), Rational(0),
                                      "final round is not a tail round");
    const Rational expect_rev = trace.tail_value - trace.epsilon;
    if (views.back().rev != expect_rev)
        return CheckReport::violation(claim, trace.gamma - 1, views.back().rev,
                                      expect_rev, "tail revenue is not v* - eps");
    const Rational cover = Rational(2 * trace.gamma) * views.back().rev;
    if (views.back().sw_b > cover)
        return CheckReport::violation(claim, trace.gamma - 1, views.back().sw_b, cover,
                                      "tail benchmark welfare uncovered");
    if (Rational(views.front().theta_b) <= 2 * pow2(trace.gamma - 1)) {
        if (views.back().theta_b > 2)
            return CheckReport::violation(claim, trace.gamma - 1,
                                          Rational(views.back().theta_b), Rational(2),
                                          "tail benchmark exceeds two units");
        if (views.back().sw_b > 2 * trace.tail_value)
            return CheckReport::violation(claim, trace.gamma - 1, views.back().sw_b,
                                          2 * trace.tail_value,
                                          "tail benchmark welfare exceeds 2 v*");
    }
    return CheckReport::ok(claim, "tail revenue and residual cover verified");
}

// Bicriteria conclusions with the instance constant c: the first round whose
// revenue reaches SW(B1)*(1-(gamma-1)/beta)/(2*gamma*alpha) defines
// c >= 1 via Rev = c * base / (2*gamma*alpha), keeps half the base welfare
// in its benchmark, and sells welfare at least
// base * ((1-1/beta)/2 - c/(2*gamma) + c/(2*gamma*alpha)).
inline CheckReport check_bicriteria_constant(const Instance& inst,
                                           const halving::CoreTrace& trace,
                                           const Rational& alpha,
                                           const Rational& beta) {
    detail::require_trace(trace);
    require(sgn(alpha) > 0 && sgn(beta) > 0, ErrorKind::Input,
            "charging parameters must be positive");
    const auto views = detail::round_views(inst, trace);
    const char* claim = "bicriteria-constant";
    const Rational gamma(trace.gamma);
    for (std::size_t t = 0; t < views.size(); ++t) {
        const Rational lhs = views[t].sw_b * (Rational(1) - Rational(1) / beta);
        const Rational rhs = alpha * views[t].rev + views[t].surp;
        if (lhs > rhs)
            return CheckReport::violation(claim, static_cast<long>(t), lhs, rhs,
                                          "surplus premise fails");
    }
    const Rational base = views.front().sw_b * (Rational(1) - (gamma - 1) / beta);
    if (sgn(base) <= 0)
        return CheckReport::ok(claim, "vacuous: non-positive welfare base");
    const Rational threshold = base / (2 * gamma * alpha);
    long sel = -1;
    for (std::size_t t = 0; t < views.size(); ++t) {
        if (views[t].rev >= threshold) {
            sel = static_cast<long>(t);
            break;
        }
    }
    if (sel < 0)
        return CheckReport::violation(claim, trace.gamma - 1, views.back().rev,
                                      threshold, "no round reaches the revenue threshold");
    const auto& v = views[static_cast<std::size_t>(sel)];
    const Rational c = v.rev * 2 * gamma * alpha / base;
    if (c < 1)
        return CheckReport::violation(claim, sel, c, Rational(1),
                                      "instance constant fell below one");
    if (2 * v.sw_b < base)
        return CheckReport::violation(claim, sel, 2 * v.sw_b, base,
                                      "selected benchmark lost half the base welfare");
    const Rational welfare_floor =
        base * ((Rational(1) - Rational(1) / beta) / 2 - c / (2 * gamma) +
                c / (2 * gamma * alpha));
    if (v.sw_s < welfare_floor)
        return CheckReport::violation(claim, sel, v.sw_s, welfare_floor,
                                      "sold welfare misses the bicriteria floor");
    if (v.rev < c * base / (2 * gamma * alpha))
        return CheckReport::violation(claim, sel, v.rev,
                                      c * base / (2 * gamma * alpha),
                                      "revenue misses its own constant share");
    return CheckReport::ok(claim, "premise, constant, and both conclusions verified");
}

// Dichotomy classifier: the first round whose revenue reaches
// sw_a/(8*gamma^2) either also sells a constant welfare share (small c) or
// earns a 1/gamma revenue share (large c). Requires the benchmark welfare to
// stay dominated by the starting allocation, which holds whenever the start
// is welfare-optimal.
inline CheckReport check_dichotomy(const Instance& inst,
                                   const halving::CoreTrace& trace,
                                   const Rational& sw_a) {
    detail::require_trace(trace);
    const auto views = detail::round_views(inst, trace);
    const char* claim = "welfare-revenue-dichotomy";
    if (sgn(sw_a) <= 0)
        return CheckReport::ok(claim, "vacuous: non-positive starting welfare");
    const Rational gamma(trace.gamma);
    const Rational half_share = Rational(1) - Rational(1) / (2 * gamma);
    for (std::size_t t = 0; t < views.size(); ++t) {
        if (views[t].sw_b > sw_a)
            return CheckReport::violation(claim, static_cast<long>(t), views[t].sw_b,
                                          sw_a, "benchmark welfare exceeds the start");
        const Rational lhs = views[t].sw_b * half_share;
        const Rational rhs = 2 * gamma * views[t].rev + views[t].surp;
        if (lhs > rhs)
            return CheckReport::violation(claim, static_cast<long>(t), lhs, rhs,
                                          "surplus premise fails");
    }
    const Rational threshold = sw_a / (8 * gamma * gamma);
    long sel = -1;
    for (std::size_t t = 0; t < views.size(); ++t) {
        if (views[t].rev >= threshold) {
            sel = static_cast<long>(t);
            break;
        }
    }
    if (sel < 0)
        return CheckReport::violation(claim, trace.gamma - 1, views.back().rev,
                                      threshold, "no round reaches the revenue threshold");
    const auto& v = views[static_cast<std::size_t>(sel)];
    const Rational c = 8 * gamma * gamma * v.rev / sw_a;
    if (c < 1)
        return CheckReport::violation(claim, sel, c, Rational(1),
                                      "instance constant fell below one");
    const Rational sold_floor =
        sw_a / 4 * (half_share - c / gamma + c / (2 * gamma * gamma));
    if (v.sw_s < sold_floor)
        return CheckReport::violation(claim, sel, v.sw_s, sold_floor,
                                      "sold welfare misses the distilled floor");
    if (c <= (gamma - 1) / 2) {
        if (8 * v.sw_s < sw_a)
            return CheckReport::violation(claim, sel, 8 * v.sw_s, sw_a,
                                          "branch 1: welfare share misses 1/8");
        if (v.rev < threshold)
            return CheckReport::violation(claim, sel, v.rev, threshold,
                                          "branch 1: revenue share misses 1/(8 gamma^2)");
        return CheckReport::ok(claim, "branch 1: constant welfare and revenue shares");
    }
    const Rational rev_floor =
        (Rational(1, 2) - Rational(1) / (2 * gamma)) * sw_a / (8 * gamma);
    if (v.rev < rev_floor)
        return CheckReport::violation(claim, sel, v.rev, rev_floor,
                                      "branch 2: revenue share misses 1/gamma scale");
    return CheckReport::ok(claim, "branch 2: near-1/gamma revenue share");
}

// Every arrival order in the given family earns at least the stated revenue
// at the posted prices and caps.
inline CheckReport check_universality(const Instance& inst, const Prices& p,
                                               const std::vector<int>& caps,
                                               const std::vector<ArrivalOrder>& pi_set,
                                               const Rational& bound) {
    require(!pi_set.empty(), ErrorKind::Input, "order family is empty");
    const char* claim = "order-universality";
    for (std::size_t idx = 0; idx < pi_set.size(); ++idx) {
        const Allocation sold = mechanisms::sequential_run(inst, p, caps, pi_set[idx]);
        const Rational rev = market::revenue(p, sold);
        if (rev < bound)
            return CheckReport::violation(claim, static_cast<long>(idx), rev, bound,
                                          "an arrival order fell below the bound");
    }
    return CheckReport::ok(claim, "all listed arrival orders meet the revenue bound");
}

// Buyers left empty-handed value every bundle of not-sold-out goods at zero.
inline CheckReport check_locally_welfare_maximizing(const Instance& inst,
                                                    const Prices& p,
                                                    const Allocation& a) {
    require(static_cast<int>(a.bundles.size()) == inst.buyer_count(), ErrorKind::Input,
            "allocation size disagrees with the buyer count");
    (void)p;
    const char* claim = "local-welfare-maximization";
    GoodSet open = 0;
    for (int i = 0; i < inst.m; ++i)
        if (market::copies_allocated(a, i) <
            inst.supply[static_cast<std::size_t>(i)])
            open |= (GoodSet{1} << i);
    for (int j = 0; j < inst.buyer_count(); ++j) {
        if (a.bundles[static_cast<std::size_t>(j)] != 0) continue;
        const auto& v = inst.buyers[static_cast<std::size_t>(j)];
        for (GoodSet t = open;; t = (t - 1) & open) {
            if (t != 0 && sgn(v.value(t)) != 0)
                return CheckReport::violation(claim, j, v.value(t), Rational(0),
                                              "an empty-handed buyer values open goods");
            if (t == 0) break;
        }
    }
    return CheckReport::ok(claim, "empty-handed buyers value all open goods at zero");
}

// Exact expectation of an order statistic under a sampler: uniform samplers
// average over the full order enumeration, explicit samplers over their list.
inline Rational expected_value(const OrderSampler& sampler, int buyer_count,
                               const std::function<Rational(const ArrivalOrder&)>& f) {
    require(static_cast<bool>(f), ErrorKind::Input, "no order statistic given");
    if (sampler.kind == OrderSampler::Kind::Uniform) {
        const auto orders = mechanisms::all_orders(buyer_count);
        Rational sum = 0;
        for (const auto& pi : orders) sum += f(pi);
        return sum / Rational(static_cast<long>(orders.size()));
    }
    Rational total = 0, sum = 0;
    for (std::size_t idx = 0; idx < sampler.orders.size(); ++idx) {
        total += sampler.weights[idx];
        sum += sampler.weights[idx] * f(sampler.orders[idx]);
    }
    return sum / total;
}

// Mean revenue of the posted prices over every arrival order.
inline Rational expected_revenue(const Instance& inst, const Prices& p,
                                 const std::vector<int>& caps) {
    const auto orders = mechanisms::all_orders(inst.buyer_count());
    Rational sum = 0;
    for (const auto& pi : orders)
        sum += market::revenue(p, mechanisms::sequential_run(inst, p, caps, pi));
    return sum / Rational(static_cast<long>(orders.size()));
}

// Empirical frequency of {min of T draws > 2 E[f]} over seeded repetitions.
// The minimum of T independent draws exceeds twice the mean with probability
// at most 2^-T; callers compare the returned rate against that plus slack.
inline Rational check_min_estimator(const OrderSampler& sampler, int buyer_count,
                                    const std::function<Rational(const ArrivalOrder&)>& f,
                                    int draws, long trials,
                                    std::uint64_t seed = 0) {
    require(draws >= 1, ErrorKind::Input, "need at least one draw per trial");
    require(trials >= 1, ErrorKind::Input, "need at least one trial");
    const Rational twice_mean = 2 * expected_value(sampler, buyer_count, f);
    Rng rng(seed);
    long exceed = 0;
    for (long rep = 0; rep < trials; ++rep) {
        bool any_low = false;
        for (int d = 0; d < draws; ++d) {
            const ArrivalOrder pi = mechanisms::sample_order(sampler, buyer_count, rng);
            if (f(pi) <= twice_mean) any_low = true;
        }
        if (!any_low) ++exceed;
    }
    return Rational(exceed) / Rational(trials);
}

// Exact-rational acceptance test for the empirical rate: pass when the rate
// is at most 2^-T, or within three binomial standard deviations of it.
inline bool min_estimator_within_slack(const Rational& rate, int draws, long trials) {
    require(draws >= 1 && trials >= 1, ErrorKind::Input,
            "need at least one draw and one trial");
    const Rational p = pow2(-draws);
    if (rate <= p) return true;
    const Rational gap = rate - p;
    return gap * gap <= 9 * p * (Rational(1) - p) / Rational(trials);
}

// Everything a core trace can witness, using the charging parameters the
// solver ran with (alpha = beta = 2*gamma).
inline std::vector<CheckReport> verify_core_bundle(const Instance& inst,
                                                   const Allocation& initial,
                                                   const halving::CoreTrace& trace) {
    const Rational two_gamma(2 * trace.gamma);
    const Rational sw_a = market::social_welfare(inst, initial);
    std::vector<CheckReport> reports;
    reports.push_back(check_halving(inst, trace));
    reports.push_back(check_generalized_charging(inst, trace, two_gamma, two_gamma));
    reports.push_back(check_surplus_charging(inst, trace, two_gamma));
    reports.push_back(check_unsold_branch(inst, trace, two_gamma));
    reports.push_back(check_bicriteria_constant(inst, trace, two_gamma, two_gamma));
    reports.push_back(check_tail(inst, trace));
    reports.push_back(check_dichotomy(inst, trace, sw_a));
    return reports;
}

// Reserve-doubling reduction: the ladder itself, the per-step price floor,
// saturation bookkeeping, consecutive-price control, the first-step welfare
// guarantee, simple charging at alpha = 2, and the end-to-end selection bounds.
inline std::vector<CheckReport> verify_reduction_bundle(
    const Instance& inst, const doubling::ReductionTrace& trace,
    const Rational& black_box_alpha, const Rational& opt_welfare) {
    require(!trace.steps.empty(), ErrorKind::Input, "reduction trace has no steps");
    std::vector<CheckReport> reports;

    {
        const char* claim = "reserve-ladder";
        CheckReport rep = CheckReport::ok(claim, "reserves start right and double");
        const Rational r1 = trace.sw0 / Rational(2 * inst.total_supply());
        if (trace.steps.front().reserve != r1)
            rep = CheckReport::violation(claim, 0, trace.steps.front().reserve, r1,
                                         "first reserve is off scale");
        else
            for (std::size_t t = 0; t + 1 < trace.steps.size(); ++t)
                if (trace.steps[t + 1].reserve != 2 * trace.steps[t].reserve) {
                    rep = CheckReport::violation(
                        claim, static_cast<long>(t + 1), trace.steps[t + 1].reserve,
                        2 * trace.steps[t].reserve, "reserve failed to double");
                    break;
                }
        reports.push_back(std::move(rep));
    }

    {
        const char* claim = "price-floor";
        CheckReport rep = CheckReport::ok(claim, "every price is at least the reserve");
        for (std::size_t t = 0; rep.pass && t < trace.steps.size(); ++t) {
            const auto& step = trace.steps[t];
            for (int i = 0; i < inst.m; ++i) {
                const auto& pi = step.prices[static_cast<std::size_t>(i)];
                if (!pi.has_value() || *pi < step.reserve) {
                    rep = CheckReport::violation(
                        claim, static_cast<long>(t),
                        pi.has_value() ? *pi : Rational(0), step.reserve,
                        "a good is priced below the reserve");
                    break;
                }
            }
        }
        reports.push_back(std::move(rep));
    }

    {
        const char* claim = "saturated-sold-out";
        CheckReport rep =
            CheckReport::ok(claim, "goods priced above the reserve sell out");
        for (std::size_t t = 0; rep.pass && t < trace.steps.size(); ++t) {
            const auto& step = trace.steps[t];
            for (int i = 0; i < inst.m; ++i) {
                const auto& pi = step.prices[static_cast<std::size_t>(i)];
                if (!pi.has_value() || *pi <= step.reserve) continue;
                const int sold = market::copies_allocated(step.full, i);
                if (sold != inst.supply[static_cast<std::size_t>(i)]) {
                    rep = CheckReport::violation(
                        claim, static_cast<long>(t), Rational(sold),
                        Rational(inst.supply[static_cast<std::size_t>(i)]),
                        "a saturated good kept unsold copies");
                    break;
                }
            }
        }
        reports.push_back(std::move(rep));
    }

    {
        const char* claim = "consecutive-price-doubling";
        CheckReport rep = CheckReport::ok(
            claim, "unsaturated goods at most double their previous price");
        for (std::size_t t = 1; rep.pass && t < trace.steps.size(); ++t) {
            const auto& prev = trace.steps[t - 1];
            const auto& step = trace.steps[t];
            for (int i = 0; i < inst.m; ++i) {
                const auto& pi = step.prices[static_cast<std::size_t>(i)];
                const auto& qi = prev.prices[static_cast<std::size_t>(i)];
                if (!pi.has_value() || !qi.has_value()) continue;
                if (*pi > step.reserve) continue; // saturated: not covered
                if (*pi > 2 * *qi) {
                    rep = CheckReport::violation(claim, static_cast<long>(t), *pi,
                                                 2 * *qi,
                                                 "an unsaturated price more than doubled");
                    break;
                }
            }
        }
        reports.push_back(std::move(rep));
    }

    {
        const char* claim = "first-step-welfare";
        const Rational sw1 = market::social_welfare(inst, trace.steps.front().stripped);
        if (2 * black_box_alpha * sw1 >= opt_welfare)
            reports.push_back(
                CheckReport::ok(claim, "first step keeps half the scaled optimum"));
        else
            reports.push_back(CheckReport::violation(claim, 0,
                                                     2 * black_box_alpha * sw1,
                                                     opt_welfare,
                                                     "first step lost the optimum"));
    }

    {
        std::vector<std::pair<Prices, Allocation>> sequence;
        for (const auto& step : trace.steps)
            sequence.emplace_back(step.prices, step.stripped);
        reports.push_back(doubling::check_simple_charging(inst, sequence, Rational(2)));
    }

    {
        const char* claim = "reduction-selection";
        CheckReport rep =
            CheckReport::ok(claim, "earliest qualifying step, both shares verified");
        const Rational sw1 = market::social_welfare(inst, trace.steps.front().stripped);
        const Rational threshold = sw1 / Rational(6 * trace.gamma);
        long expect = -1;
        for (std::size_t t = 0; t < trace.steps.size(); ++t) {
            const Rational rev = market::revenue(trace.steps[t].prices,
                                                 trace.steps[t].stripped);
            if (rev >= threshold) {
                expect = static_cast<long>(t);
                break;
            }
        }
        if (trace.selected != expect) {
            rep = CheckReport::violation(claim, trace.selected,
                                         Rational(trace.selected), Rational(expect),
                                         "selection is not the earliest qualifying step");
        } else {
            const auto& kept = trace.steps[static_cast<std::size_t>(trace.selected)];
            const Rational rev = market::revenue(kept.prices, kept.stripped);
            const Rational sw = market::social_welfare(inst, kept.stripped);
            if (rev < threshold)
                rep = CheckReport::violation(claim, trace.selected, rev, threshold,
                                             "kept revenue misses the 1/(6 gamma) share");
            else if (3 * sw < 2 * sw1)
                rep = CheckReport::violation(claim, trace.selected, 3 * sw, 2 * sw1,
                                             "kept welfare misses two thirds of step one");
            else if (3 * black_box_alpha * sw < opt_welfare)
                rep = CheckReport::violation(claim, trace.selected,
                                             3 * black_box_alpha * sw, opt_welfare,
                                             "kept welfare misses the scaled optimum");
        }
        reports.push_back(std::move(rep));
    }

    return reports;
}

// Single-price outcome: fits the stock, leaves every buyer at an optimal
// quantity, earns its case's revenue share, and (when the walk ran) keeps
// half the starting welfare in the final benchmark.
inline std::vector<CheckReport> verify_multiunit_bundle(const Instance& inst,
                                                        const MultiUnitResult& result,
                                                        const Rational& sw_a) {
    multiunit::validate_multiunit(inst);
    std::vector<CheckReport> reports;
    const auto& sol = result.solution;
    require(sol.quantities.size() == static_cast<std::size_t>(inst.buyer_count()),
            ErrorKind::Input, "quantity vector disagrees with the buyer count");
    const Rational gamma(result.trace.gamma);

    long total = 0;
    for (int q : sol.quantities) total += q;
    if (total <= inst.m)
        reports.push_back(
            CheckReport::ok("single-price-feasibility", "quantities fit the stock"));
    else
        reports.push_back(CheckReport::violation("single-price-feasibility", 0,
                                                 Rational(total), Rational(inst.m),
                                                 "quantities exceed the stock"));

    {
        const char* claim = "single-price-envy-freeness";
        CheckReport rep =
            CheckReport::ok(claim, "every buyer holds a utility-maximizing quantity");
        for (int j = 0; j < inst.buyer_count(); ++j) {
            const auto& table = inst.buyers[static_cast<std::size_t>(j)].table();
            const int q = sol.quantities[static_cast<std::size_t>(j)];
            if (q < 0 || q > inst.m) {
                rep = CheckReport::violation(claim, j, Rational(q), Rational(inst.m),
                                             "a quantity lies outside the table");
                break;
            }
            const Rational mine =
                table[static_cast<std::size_t>(q)] - sol.price * q;
            for (int alt = 0; alt <= inst.m; ++alt) {
                const Rational other =
                    table[static_cast<std::size_t>(alt)] - sol.price * alt;
                if (other > mine) {
                    rep = CheckReport::violation(claim, j, mine, other,
                                                 "a buyer prefers another quantity");
                    break;
                }
            }
            if (!rep.pass) break;
        }
        reports.push_back(std::move(rep));
    }

    {
        const char* claim = "single-price-revenue";
        const Rational rev = sol.price * Rational(total);
        const Rational share = sol.mode == MultiUnitCase::Threshold
                                   ? Rational(4) * gamma
                                   : Rational(8) * gamma;
        if (share * rev >= sw_a)
            reports.push_back(CheckReport::ok(claim, "case revenue share verified"));
        else
            reports.push_back(CheckReport::violation(claim, 0, share * rev, sw_a,
                                                     "revenue misses the case share"));
    }

    if (sol.mode != MultiUnitCase::Threshold && !result.trace.rounds.empty()) {
        const char* claim = "single-price-benchmark-floor";
        const auto& last = result.trace.rounds.back();
        Rational sw_b = 0;
        for (int j = 0; j < inst.buyer_count(); ++j)
            sw_b += inst.buyers[static_cast<std::size_t>(j)]
                        .table()[static_cast<std::size_t>(
                            last.benchmark[static_cast<std::size_t>(j)])];
        if (2 * sw_b >= sw_a)
            reports.push_back(
                CheckReport::ok(claim, "final benchmark keeps half the start"));
        else
            reports.push_back(CheckReport::violation(claim,
                                                     result.trace.selected, 2 * sw_b,
                                                     sw_a,
                                                     "final benchmark lost the start"));
    }

    return reports;
}

} // namespace pricing::verify

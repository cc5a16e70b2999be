#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pricing/brute_force.hpp"
#include "pricing/errors.hpp"
#include "pricing/market.hpp"
#include "pricing/mechanisms.hpp"
#include "pricing/rational.hpp"
#include "pricing/rng.hpp"
#include "pricing/valuations.hpp"

namespace pricing::halving {

// ---------------------------------------------------------------------------
// Round bookkeeping
// ---------------------------------------------------------------------------

enum class RoundBranch { SoldCarryover, AllocUnsold, Tail };

inline const char* branch_name(RoundBranch b) {
    switch (b) {
        case RoundBranch::SoldCarryover: return "sold-carryover";
        case RoundBranch::AllocUnsold: return "alloc-unsold";
        case RoundBranch::Tail: return "tail";
    }
    return "?";
}

// One round: the benchmark allocation entering the round, the prices and
// per-good caps posted, the arrival order used (empty in the final round,
// which assigns directly), what was sold, and how the next benchmark was
// formed.
struct CoreRound {
    Allocation benchmark;
    Prices prices;
    std::vector<int> caps;
    ArrivalOrder order;
    Allocation sold;
    RoundBranch branch = RoundBranch::SoldCarryover;
};

struct CoreTrace {
    int gamma = 1;
    Rational epsilon = 0;
    int tail_buyer = -1;
    int tail_good = -1;
    Rational tail_value = 0;
    std::vector<CoreRound> rounds; // exactly gamma entries
    int selected = -1;             // round index whose prices/caps are kept
};

// ---------------------------------------------------------------------------
// Per-round primitives
// ---------------------------------------------------------------------------

inline std::vector<int> benchmark_caps(const Instance& inst, const Allocation& b) {
    std::vector<int> caps(static_cast<std::size_t>(inst.m), 0);
    for (int i = 0; i < inst.m; ++i)
        caps[static_cast<std::size_t>(i)] = market::copies_allocated(b, i);
    return caps;
}

// Per-good prices: a good allocated k > 0 times in the benchmark is priced at
// its benchmark utility divided by 2*gamma*k; an unallocated good is
// unavailable.
inline Prices prices_fn(const Instance& inst, const Allocation& b, int gamma) {
    require(gamma >= 1, ErrorKind::Input, "round count must be at least 1");
    Prices p(static_cast<std::size_t>(inst.m));
    for (int i = 0; i < inst.m; ++i) {
        const int k = market::copies_allocated(b, i);
        if (k > 0)
            p[static_cast<std::size_t>(i)] =
                market::per_good_utility(inst, b, i) / (Rational(2 * gamma) * Rational(k));
    }
    return p;
}

// Redistributes the copies left unsold: each good's unsold copies go to the
// benchmark holders that value them most (witness utility, stable ties).
// Every resulting bundle is a subset of the buyer's benchmark bundle.
inline Allocation alloc_unsold(const Instance& inst, const Allocation& b, const Allocation& s) {
    require(b.bundles.size() == s.bundles.size(), ErrorKind::Input,
            "allocations must cover the same buyers");
    Allocation out = Allocation::none(inst.buyer_count());
    for (int i = 0; i < inst.m; ++i) {
        const int kb = market::copies_allocated(b, i);
        const int ks = market::copies_allocated(s, i);
        require(ks <= kb, ErrorKind::Inconsistent,
                "sold copies exceed the benchmark's copies for a good");
        const int q = kb - ks;
        if (q == 0) continue;
        for (int j : market::top_buyers(inst, b, i, q))
            out.bundles[static_cast<std::size_t>(j)] |= good_bit(i);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Round counts and order selection
// ---------------------------------------------------------------------------

// Number of rounds used for the cross-buyer mechanism:
// max(1, ceil(log2(m * ceil(avg supply))) + 1).
inline int gamma_xos(const Instance& inst) {
    inst.validate();
    const Integer k_ceil = ceil_to_integer(inst.avg_supply());
    const Rational product = Rational(Integer(inst.m) * k_ceil);
    const long g = ceil_log2(product) + 1;
    return static_cast<int>(g < 1 ? 1 : g);
}

// Default number of sampled orders per round when arrival is random:
// ceil(log2((log2 m + log2 avg_supply) * N * m)), clamped to at least 1.
// Double precision is fine here; the count only tunes a tail probability.
inline int default_sample_count(const Instance& inst) {
    inst.validate();
    const double m = static_cast<double>(inst.m);
    const double n = static_cast<double>(inst.buyer_count());
    const double k = inst.avg_supply().get_d();
    const double inner = (std::log2(m) + std::log2(k)) * n * m;
    if (!(inner > 1.0)) return 1;
    const double t = std::ceil(std::log2(inner));
    return t < 1.0 ? 1 : static_cast<int>(t);
}

// Draws `samples` arrival orders and returns the one whose sequential revenue
// at (p, caps) is smallest; ties keep the earliest draw.
inline ArrivalOrder gamma_random(const Instance& inst, const Prices& p,
                                 const std::vector<int>& caps, const OrderSampler& sampler,
                                 int samples, std::uint64_t seed) {
    require(samples >= 1, ErrorKind::Input, "need at least one sampled order");
    Rng rng(seed);
    ArrivalOrder best_order;
    Rational best_rev = 0;
    bool first = true;
    for (int s = 0; s < samples; ++s) {
        ArrivalOrder order = mechanisms::sample_order(sampler, inst.buyer_count(), rng);
        Allocation a = mechanisms::sequential_run(inst, p, caps, order);
        Rational rev = market::revenue(p, a);
        if (first || rev < best_rev) {
            best_order = std::move(order);
            best_rev = std::move(rev);
            first = false;
        }
    }
    return best_order;
}

// How the arrival order is chosen each round.
struct GammaStrategy {
    enum class Kind { Fixed, Adversarial, RandomSampling };
    Kind kind = Kind::Adversarial;
    ArrivalOrder order;                // Fixed
    std::vector<ArrivalOrder> pi_set;  // Adversarial; empty = all orders
    OrderSampler sampler;              // RandomSampling
    int samples = 0;                   // RandomSampling; 0 = default_sample_count
    std::uint64_t seed = 0;            // RandomSampling

    static GammaStrategy fixed(ArrivalOrder o) {
        GammaStrategy g;
        g.kind = Kind::Fixed;
        g.order = std::move(o);
        return g;
    }

    // Empty pi_set means "every permutation" (subject to the factorial cap).
    static GammaStrategy adversarial(std::vector<ArrivalOrder> orders = {}) {
        GammaStrategy g;
        g.kind = Kind::Adversarial;
        g.pi_set = std::move(orders);
        return g;
    }

    static GammaStrategy random_sampling(OrderSampler sampler, int samples, std::uint64_t seed) {
        GammaStrategy g;
        g.kind = Kind::RandomSampling;
        g.sampler = std::move(sampler);
        g.samples = samples;
        g.seed = seed;
        return g;
    }
};

// ---------------------------------------------------------------------------
// Round selection
// ---------------------------------------------------------------------------

// Round with the highest sequential revenue; ties keep the earliest round.
inline int select_max_revenue(const CoreTrace& trace) {
    require(!trace.rounds.empty(), ErrorKind::Input, "trace has no rounds");
    int best = 0;
    Rational best_rev = market::revenue(trace.rounds[0].prices, trace.rounds[0].sold);
    for (std::size_t t = 1; t < trace.rounds.size(); ++t) {
        Rational rev = market::revenue(trace.rounds[t].prices, trace.rounds[t].sold);
        if (rev > best_rev) {
            best_rev = std::move(rev);
            best = static_cast<int>(t);
        }
    }
    return best;
}

// Earliest round whose sequential revenue meets the bound.
inline int select_first_threshold(const CoreTrace& trace, const Rational& bound) {
    for (std::size_t t = 0; t < trace.rounds.size(); ++t) {
        if (market::revenue(trace.rounds[t].prices, trace.rounds[t].sold) >= bound)
            return static_cast<int>(t);
    }
    fail(ErrorKind::ChargingViolation, "no round reached the revenue bound");
}

// ---------------------------------------------------------------------------
// Core loop
// ---------------------------------------------------------------------------

// Runs gamma rounds starting from benchmark allocation a. Rounds 1..gamma-1
// post scaled-down per-good prices, run the sequential mechanism on the
// chosen arrival order, and shrink the benchmark: the sold allocation is
// carried over when it holds at most half the benchmark's copies, otherwise
// the unsold copies are redistributed. The final round prices one copy of the
// single most valuable item just below its value and assigns it directly.
inline CoreTrace core_run(const Instance& inst, const Allocation& a, int gamma,
                          const GammaStrategy& strategy,
                          const Rational& epsilon_scale = pow2(-20)) {
    inst.validate();
    for (const auto& buyer : inst.buyers) {
        require(buyer.xos_representable(), ErrorKind::Unsupported,
                "cross-buyer rounds support additive, unit-demand, and xos buyers only");
    }
    require(gamma >= 1, ErrorKind::Input, "round count must be at least 1");
    require(market::feasible(inst, a), ErrorKind::Input,
            "starting allocation must be feasible for the instance");
    require(market::theta(a) >= 1, ErrorKind::Degenerate,
            "starting allocation must sell at least one copy");
    require(sgn(epsilon_scale) > 0 && epsilon_scale < 1, ErrorKind::Input,
            "price discount scale must be in (0, 1)");

    CoreTrace trace;
    trace.gamma = gamma;
    trace.rounds.reserve(static_cast<std::size_t>(gamma));

    Rng seed_stream(strategy.seed);
    std::vector<ArrivalOrder> adversary_orders = strategy.pi_set;
    if (strategy.kind == GammaStrategy::Kind::Adversarial && adversary_orders.empty())
        adversary_orders = mechanisms::all_orders(inst.buyer_count());

    Allocation b = a;
    for (int t = 0; t + 1 < gamma; ++t) {
        CoreRound round;
        round.benchmark = b;
        round.prices = prices_fn(inst, b, gamma);
        round.caps = benchmark_caps(inst, b);
        switch (strategy.kind) {
            case GammaStrategy::Kind::Fixed:
                mechanisms::check_order(strategy.order, inst.buyer_count());
                round.order = strategy.order;
                break;
            case GammaStrategy::Kind::Adversarial:
                round.order =
                    mechanisms::worst_order_outcome(inst, round.prices, round.caps,
                                                    adversary_orders)
                        .order;
                break;
            case GammaStrategy::Kind::RandomSampling: {
                const int samples =
                    strategy.samples >= 1 ? strategy.samples : default_sample_count(inst);
                round.order = gamma_random(inst, round.prices, round.caps, strategy.sampler,
                                           samples, seed_stream.next());
                break;
            }
        }
        round.sold = mechanisms::sequential_run(inst, round.prices, round.caps, round.order);
        if (2 * market::theta(round.sold) <= market::theta(b)) {
            round.branch = RoundBranch::SoldCarryover;
            b = round.sold;
        } else {
            round.branch = RoundBranch::AllocUnsold;
            b = alloc_unsold(inst, round.benchmark, round.sold);
        }
        trace.rounds.push_back(std::move(round));
    }

    // Final round: sell one copy of the single most valuable item, priced just
    // below its value, directly to its highest-value buyer.
    const auto [star_buyer, star_good] = valuations::max_single_item(inst.buyers);
    const Rational star_value =
        inst.buyers[static_cast<std::size_t>(star_buyer)].value(good_bit(star_good));
    CoreRound tail;
    tail.benchmark = b;
    tail.prices.assign(static_cast<std::size_t>(inst.m), std::nullopt);
    trace.epsilon = star_value * epsilon_scale;
    tail.prices[static_cast<std::size_t>(star_good)] = star_value - trace.epsilon;
    tail.caps.assign(static_cast<std::size_t>(inst.m), 0);
    tail.caps[static_cast<std::size_t>(star_good)] = 1;
    tail.sold = Allocation::none(inst.buyer_count());
    tail.sold.bundles[static_cast<std::size_t>(star_buyer)] = good_bit(star_good);
    tail.branch = RoundBranch::Tail;
    trace.tail_buyer = star_buyer;
    trace.tail_good = star_good;
    trace.tail_value = star_value;
    trace.rounds.push_back(std::move(tail));

    trace.selected = select_max_revenue(trace);
    return trace;
}

// ---------------------------------------------------------------------------
// Starting allocations and the end-to-end solver
// ---------------------------------------------------------------------------

// Greedy start: goods in id order, each copy goes to the buyer with the
// largest positive marginal value (ties: smallest buyer id). Copies whose
// best marginal is non-positive stay unsold.
inline Allocation greedy_initial(const Instance& inst) {
    inst.validate();
    Allocation a = Allocation::none(inst.buyer_count());
    for (int i = 0; i < inst.m; ++i) {
        for (int copy = 0; copy < inst.supply[static_cast<std::size_t>(i)]; ++copy) {
            int best_j = -1;
            Rational best_gain = 0;
            for (int j = 0; j < inst.buyer_count(); ++j) {
                const GoodSet held = a.bundles[static_cast<std::size_t>(j)];
                if (set_contains(held, i)) continue;
                Rational gain = inst.buyers[static_cast<std::size_t>(j)].value(
                                    held | good_bit(i)) -
                                inst.buyers[static_cast<std::size_t>(j)].value(held);
                if (sgn(gain) > 0 && (best_j < 0 || gain > best_gain)) {
                    best_j = j;
                    best_gain = std::move(gain);
                }
            }
            if (best_j < 0) break;
            a.bundles[static_cast<std::size_t>(best_j)] |= good_bit(i);
        }
    }
    return a;
}

enum class InitialMode { Brute, Greedy };

struct XosResult {
    PricingSolution solution;
    CoreTrace trace;
    Allocation initial;
};

// End-to-end solver: pick a starting allocation, run the rounds, and keep the
// prices/caps of the max-revenue round together with what that round sold.
inline XosResult solve_xos(const Instance& inst, const GammaStrategy& strategy,
                           InitialMode initial = InitialMode::Brute, int gamma_override = 0,
                           const Rational& epsilon_scale = pow2(-20)) {
    inst.validate();
    for (const auto& buyer : inst.buyers) {
        require(buyer.xos_representable(), ErrorKind::Unsupported,
                "solver supports additive, unit-demand, and xos buyers only");
    }
    XosResult out;
    out.initial = initial == InitialMode::Brute ? verify::brute_optimal_welfare(inst).alloc
                                                : greedy_initial(inst);
    const int gamma = gamma_override >= 1 ? gamma_override : gamma_xos(inst);
    out.trace = core_run(inst, out.initial, gamma, strategy, epsilon_scale);
    const CoreRound& kept = out.trace.rounds[static_cast<std::size_t>(out.trace.selected)];
    out.solution = PricingSolution{kept.prices, kept.caps, kept.sold};
    return out;
}

} // namespace pricing::halving

namespace pricing {
using halving::CoreRound;
using halving::CoreTrace;
using halving::GammaStrategy;
} // namespace pricing

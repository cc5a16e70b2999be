#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "pricing/item_halving.hpp"
#include "pricing/brute_force.hpp"

#include "oracle_utils.hpp"

using namespace pricing;
namespace mkt = pricing::market;
namespace mech = pricing::mechanisms;
namespace hv = pricing::halving;
namespace vf = pricing::verify;

namespace {

std::vector<Rational> finite(std::initializer_list<long> xs) {
    return std::vector<Rational>(xs.begin(), xs.end());
}

Instance two_good_market() {
    Instance inst;
    inst.m = 2;
    inst.supply = {2, 1};
    inst.buyers.push_back(Valuation::additive(finite({4, 6})));
    inst.buyers.push_back(Valuation::additive(finite({2, 10})));
    return inst;
}

Instance split_market() { // two buyers, each wants one distinct good
    Instance inst;
    inst.m = 2;
    inst.supply = {1, 1};
    inst.buyers.push_back(Valuation::additive(finite({8, 0})));
    inst.buyers.push_back(Valuation::additive(finite({0, 6})));
    return inst;
}

Instance shared_good_market() { // one good, two copies, lopsided values
    Instance inst;
    inst.m = 1;
    inst.supply = {2};
    inst.buyers.push_back(Valuation::additive(finite({10})));
    inst.buyers.push_back(Valuation::additive(finite({1})));
    return inst;
}

Instance random_xos_instance(Rng& rng) {
    Instance inst;
    inst.m = static_cast<int>(rng.range(1, 4));
    for (int i = 0; i < inst.m; ++i)
        inst.supply.push_back(static_cast<int>(rng.range(1, 2)));
    const int n = static_cast<int>(rng.range(1, 3));
    for (int j = 0; j < n; ++j) {
        const long cls = rng.range(0, 2);
        auto entries = [&]() {
            std::vector<Rational> v;
            for (int i = 0; i < inst.m; ++i)
                v.push_back(rng.range(0, 3) == 0 ? Rational(0) : Rational(rng.range(1, 6)));
            return v;
        };
        if (cls == 0) {
            inst.buyers.push_back(Valuation::additive(entries()));
        } else if (cls == 1) {
            inst.buyers.push_back(Valuation::unit_demand(entries()));
        } else {
            std::vector<std::vector<Rational>> clauses;
            const long count = rng.range(1, 3);
            for (long c = 0; c < count; ++c) clauses.push_back(entries());
            inst.buyers.push_back(Valuation::xos(std::move(clauses)));
        }
    }
    return inst;
}

// Re-derives every structural property of a finished trace from scratch.
void check_trace_invariants(const Instance& inst, const hv::CoreTrace& trace,
                            const Allocation& initial) {
    const int gamma = trace.gamma;
    REQUIRE(trace.rounds.size() == static_cast<std::size_t>(gamma));
    REQUIRE(trace.rounds.front().benchmark == initial);
    const Rational alpha = Rational(2 * gamma);

    for (int t = 0; t + 1 < gamma; ++t) {
        const auto& round = trace.rounds[static_cast<std::size_t>(t)];
        const Allocation& b = round.benchmark;
        REQUIRE(round.branch != hv::RoundBranch::Tail);
        REQUIRE(round.caps == hv::benchmark_caps(inst, b));
        const Prices expect_prices = hv::prices_fn(inst, b, gamma);
        REQUIRE(round.prices == expect_prices);
        for (int i = 0; i < inst.m; ++i) {
            const bool available = round.prices[static_cast<std::size_t>(i)].has_value();
            REQUIRE(available == (round.caps[static_cast<std::size_t>(i)] > 0));
            REQUIRE(mkt::copies_allocated(round.sold, i) <=
                    round.caps[static_cast<std::size_t>(i)]);
        }
        REQUIRE(round.sold == mech::sequential_run(inst, round.prices, round.caps, round.order));

        const Allocation& next = trace.rounds[static_cast<std::size_t>(t) + 1].benchmark;
        if (2 * mkt::theta(round.sold) <= mkt::theta(b)) {
            REQUIRE(round.branch == hv::RoundBranch::SoldCarryover);
            REQUIRE(next == round.sold);
        } else {
            REQUIRE(round.branch == hv::RoundBranch::AllocUnsold);
            REQUIRE(next == hv::alloc_unsold(inst, b, round.sold));
        }
        REQUIRE(2 * mkt::theta(next) <= mkt::theta(b));

        const Rational rev = mkt::revenue(round.prices, round.sold);
        const Rational surp = mkt::surplus(inst, round.prices, round.sold);
        REQUIRE(mkt::social_welfare(inst, round.sold) == rev + surp);
        const Rational swb = mkt::social_welfare(inst, b);
        REQUIRE(swb - surp <= alpha * rev + swb / alpha);
    }

    const auto& tail = trace.rounds.back();
    REQUIRE(tail.branch == hv::RoundBranch::Tail);
    REQUIRE(trace.tail_buyer >= 0);
    REQUIRE(trace.tail_good >= 0);
    REQUIRE(trace.tail_value ==
            inst.buyers[static_cast<std::size_t>(trace.tail_buyer)].value(
                good_bit(trace.tail_good)));
    for (std::size_t j = 0; j < inst.buyers.size(); ++j) {
        for (int i = 0; i < inst.m; ++i)
            REQUIRE(inst.buyers[j].value(good_bit(i)) <= trace.tail_value);
    }
    REQUIRE(trace.epsilon == trace.tail_value * pow2(-20));
    for (int i = 0; i < inst.m; ++i) {
        const auto& p = tail.prices[static_cast<std::size_t>(i)];
        if (i == trace.tail_good) {
            REQUIRE(p.has_value());
            REQUIRE(*p == trace.tail_value - trace.epsilon);
            REQUIRE(tail.caps[static_cast<std::size_t>(i)] == 1);
        } else {
            REQUIRE_FALSE(p.has_value());
            REQUIRE(tail.caps[static_cast<std::size_t>(i)] == 0);
        }
    }
    for (int j = 0; j < inst.buyer_count(); ++j) {
        const GoodSet expect =
            j == trace.tail_buyer ? good_bit(trace.tail_good) : GoodSet{0};
        REQUIRE(tail.sold.bundles[static_cast<std::size_t>(j)] == expect);
    }
    REQUIRE(mkt::revenue(tail.prices, tail.sold) == trace.tail_value - trace.epsilon);
    REQUIRE(mkt::theta(tail.benchmark) <= 2);
    REQUIRE(mkt::social_welfare(inst, tail.benchmark) <= 2 * trace.tail_value);

    REQUIRE(trace.selected == hv::select_max_revenue(trace));
}

} // namespace

TEST_CASE("per-good prices scale benchmark utility by copies and round count") {
    const Instance inst = two_good_market();
    Allocation b = Allocation::none(2);
    b.bundles[0] = 0b11;
    b.bundles[1] = 0b01;

    const Prices p = hv::prices_fn(inst, b, 2);
    REQUIRE(p[0].has_value());
    REQUIRE(*p[0] == rat(3, 4));  // (4 + 2) / (2*2*2)
    REQUIRE(p[1].has_value());
    REQUIRE(*p[1] == rat(3, 2));  // 6 / (2*2*1)

    REQUIRE(hv::benchmark_caps(inst, b) == std::vector<int>{2, 1});

    SECTION("unallocated goods are unavailable") {
        Allocation only_good0 = Allocation::none(2);
        only_good0.bundles[0] = 0b01;
        const Prices q = hv::prices_fn(inst, only_good0, 2);
        REQUIRE(q[0].has_value());
        REQUIRE_FALSE(q[1].has_value());
    }

    SECTION("round count must be positive") {
        REQUIRE_THROWS_AS(hv::prices_fn(inst, b, 0), Error);
    }
}

TEST_CASE("unsold copies go to the benchmark holders that value them most") {
    const Instance inst = two_good_market();
    Allocation b = Allocation::none(2);
    b.bundles[0] = 0b11;
    b.bundles[1] = 0b01;

    SECTION("nothing sold: the whole benchmark comes back") {
        const Allocation c = hv::alloc_unsold(inst, b, Allocation::none(2));
        REQUIRE(c.bundles[0] == 0b11);
        REQUIRE(c.bundles[1] == 0b01);
    }

    SECTION("partial sale leaves the top remaining holders") {
        Allocation sold = Allocation::none(2);
        sold.bundles[0] = 0b10; // good 1 sold once
        const Allocation c = hv::alloc_unsold(inst, b, sold);
        // good 0: two unsold copies -> both benchmark holders keep it
        REQUIRE(c.bundles[0] == 0b01);
        REQUIRE(c.bundles[1] == 0b01);
    }

    SECTION("one unsold copy goes to the highest-utility holder") {
        Allocation sold = Allocation::none(2);
        sold.bundles[1] = 0b01; // good 0 sold once, good 1 unsold
        const Allocation c = hv::alloc_unsold(inst, b, sold);
        // good 0: one unsold copy; buyer 0's witness entry 4 > buyer 1's 2
        REQUIRE(c.bundles[0] == 0b11); // keeps good 0 and the unsold good 1
        REQUIRE(c.bundles[1] == 0);
    }

    SECTION("result bundles are subsets of the benchmark bundles") {
        Allocation sold = Allocation::none(2);
        sold.bundles[0] = 0b01;
        const Allocation c = hv::alloc_unsold(inst, b, sold);
        for (std::size_t j = 0; j < 2; ++j)
            REQUIRE((c.bundles[j] & ~b.bundles[j]) == 0);
    }

    SECTION("selling more than the benchmark held is inconsistent") {
        Allocation sold = Allocation::none(2);
        sold.bundles[0] = 0b10;
        sold.bundles[1] = 0b10; // two copies of good 1, benchmark held one
        REQUIRE_THROWS_AS(hv::alloc_unsold(inst, b, sold), Error);
    }
}

TEST_CASE("round count grows with goods and supply") {
    auto make = [](int m, std::vector<int> supply) {
        Instance inst;
        inst.m = m;
        inst.supply = std::move(supply);
        std::vector<Rational> v(static_cast<std::size_t>(m), Rational(1));
        inst.buyers.push_back(Valuation::additive(v));
        return inst;
    };
    REQUIRE(hv::gamma_xos(make(1, {1})) == 1);
    REQUIRE(hv::gamma_xos(make(2, {1, 1})) == 2);
    REQUIRE(hv::gamma_xos(make(4, {1, 1, 1, 1})) == 3);
    REQUIRE(hv::gamma_xos(make(3, {2, 2, 2})) == 4);  // ceil(log2 6) + 1
    REQUIRE(hv::gamma_xos(make(1, {2})) == 2);
    // average supply 9/6 rounds up to 2 -> ceil(log2 12) + 1 = 5
    REQUIRE(hv::gamma_xos(make(6, {1, 2, 2, 1, 1, 2})) == 5);
}

TEST_CASE("default sample count is logarithmic and at least one") {
    auto make = [](int m, int n, std::vector<int> supply) {
        Instance inst;
        inst.m = m;
        inst.supply = std::move(supply);
        std::vector<Rational> v(static_cast<std::size_t>(m), Rational(1));
        for (int j = 0; j < n; ++j) inst.buyers.push_back(Valuation::additive(v));
        return inst;
    };
    REQUIRE(hv::default_sample_count(make(1, 1, {1})) == 1);
    REQUIRE(hv::default_sample_count(make(4, 3, {1, 1, 1, 1})) == 5);  // ceil(log2 24)
    REQUIRE(hv::default_sample_count(make(2, 2, {2, 2})) == 3);        // ceil(log2 8)
}

TEST_CASE("single-round run sells one copy of the most valuable item") {
    Instance inst;
    inst.m = 1;
    inst.supply = {1};
    inst.buyers.push_back(Valuation::unit_demand(finite({10})));
    inst.buyers.push_back(Valuation::unit_demand(finite({6})));

    const auto res = hv::solve_xos(inst, GammaStrategy::adversarial());
    REQUIRE(res.trace.gamma == 1);
    REQUIRE(res.trace.rounds.size() == 1);
    REQUIRE(res.trace.rounds[0].branch == hv::RoundBranch::Tail);
    REQUIRE(res.trace.tail_buyer == 0);
    REQUIRE(res.trace.tail_good == 0);
    REQUIRE(res.trace.tail_value == 10);
    REQUIRE(res.trace.epsilon == rat(5, 524288));
    REQUIRE(res.solution.prices[0].has_value());
    REQUIRE(*res.solution.prices[0] == rat(5242875, 524288));
    REQUIRE(res.solution.caps == std::vector<int>{1});
    REQUIRE(res.solution.alloc.bundles[0] == 0b01);
    REQUIRE(res.solution.alloc.bundles[1] == 0);
    REQUIRE(mkt::revenue(res.solution.prices, res.solution.alloc) == rat(5242875, 524288));
    check_trace_invariants(inst, res.trace, res.initial);
}

TEST_CASE("two-round run on a split market") {
    const Instance inst = split_market();
    const auto res =
        hv::solve_xos(inst, GammaStrategy::fixed({0, 1}), hv::InitialMode::Brute);
    REQUIRE(res.trace.gamma == 2);
    REQUIRE(res.initial.bundles == std::vector<GoodSet>{0b01, 0b10});

    const auto& r0 = res.trace.rounds[0];
    REQUIRE(r0.prices[0].has_value());
    REQUIRE(*r0.prices[0] == 2);        // 8 / (2*2*1)
    REQUIRE(r0.prices[1].has_value());
    REQUIRE(*r0.prices[1] == rat(3, 2)); // 6 / (2*2*1)
    REQUIRE(r0.caps == std::vector<int>{1, 1});
    REQUIRE(r0.sold.bundles == std::vector<GoodSet>{0b01, 0b10});
    REQUIRE(mkt::revenue(r0.prices, r0.sold) == rat(7, 2));
    REQUIRE(r0.branch == hv::RoundBranch::AllocUnsold);

    const auto& r1 = res.trace.rounds[1];
    REQUIRE(r1.benchmark.bundles == std::vector<GoodSet>{0, 0}); // everything sold
    REQUIRE(res.trace.tail_buyer == 0);
    REQUIRE(res.trace.tail_good == 0);
    REQUIRE(res.trace.tail_value == 8);
    REQUIRE(res.trace.epsilon == rat(1, 131072));
    REQUIRE(r1.prices[0].has_value());
    REQUIRE(*r1.prices[0] == rat(1048575, 131072));
    REQUIRE_FALSE(r1.prices[1].has_value());

    REQUIRE(res.trace.selected == 1); // tail revenue ~8 beats 7/2
    REQUIRE(res.solution.prices == r1.prices);
    REQUIRE(res.solution.caps == r1.caps);
    REQUIRE(res.solution.alloc == r1.sold);
    check_trace_invariants(inst, res.trace, res.initial);
}

TEST_CASE("small sale carries over as the next benchmark, equality included") {
    const Instance inst = shared_good_market();
    const auto res =
        hv::solve_xos(inst, GammaStrategy::fixed({1, 0}), hv::InitialMode::Brute);
    REQUIRE(res.trace.gamma == 2);
    REQUIRE(res.initial.bundles == std::vector<GoodSet>{0b01, 0b01});

    const auto& r0 = res.trace.rounds[0];
    REQUIRE(r0.prices[0].has_value());
    REQUIRE(*r0.prices[0] == rat(11, 8)); // (10 + 1) / (2*2*2)
    REQUIRE(r0.caps == std::vector<int>{2});
    // buyer 1's value 1 < 11/8, so only buyer 0 buys: theta halves exactly
    REQUIRE(r0.sold.bundles == std::vector<GoodSet>{0b01, 0});
    REQUIRE(r0.branch == hv::RoundBranch::SoldCarryover);
    REQUIRE(res.trace.rounds[1].benchmark == r0.sold);
    REQUIRE(res.trace.tail_value == 10);
    REQUIRE(res.trace.selected == 1);
    check_trace_invariants(inst, res.trace, res.initial);
}

TEST_CASE("sampled arrival picks the first-drawn minimum-revenue order") {
    const Instance inst = split_market();
    Allocation b = Allocation::none(2);
    b.bundles[0] = 0b01;
    b.bundles[1] = 0b10;
    const Prices p = hv::prices_fn(inst, b, 2);
    const std::vector<int> caps = hv::benchmark_caps(inst, b);

    const OrderSampler sampler = OrderSampler::uniform();
    const int samples = 5;
    const std::uint64_t seed = 12345;

    // Independent replay of the draw stream.
    Rng rng(seed);
    ArrivalOrder expect;
    Rational expect_rev = 0;
    bool first = true;
    for (int s = 0; s < samples; ++s) {
        ArrivalOrder order = mech::sample_order(sampler, inst.buyer_count(), rng);
        Rational rev =
            mkt::revenue(p, mech::sequential_run(inst, p, caps, order));
        if (first || rev < expect_rev) {
            expect = order;
            expect_rev = rev;
            first = false;
        }
    }

    REQUIRE(hv::gamma_random(inst, p, caps, sampler, samples, seed) == expect);
    REQUIRE_THROWS_AS(hv::gamma_random(inst, p, caps, sampler, 0, seed), Error);
}

TEST_CASE("random-arrival runs are reproducible per seed") {
    const Instance inst = split_market();
    const auto a =
        hv::solve_xos(inst, GammaStrategy::random_sampling(OrderSampler::uniform(), 3, 7));
    const auto b =
        hv::solve_xos(inst, GammaStrategy::random_sampling(OrderSampler::uniform(), 3, 7));
    REQUIRE(a.trace.selected == b.trace.selected);
    REQUIRE(a.trace.rounds.size() == b.trace.rounds.size());
    for (std::size_t t = 0; t < a.trace.rounds.size(); ++t) {
        REQUIRE(a.trace.rounds[t].order == b.trace.rounds[t].order);
        REQUIRE(a.trace.rounds[t].sold == b.trace.rounds[t].sold);
        REQUIRE(a.trace.rounds[t].prices == b.trace.rounds[t].prices);
    }
    check_trace_invariants(inst, a.trace, a.initial);
}

TEST_CASE("adversarial arrival minimizes the round's revenue over all orders") {
    const Instance inst = split_market();
    const auto res = hv::solve_xos(inst, GammaStrategy::adversarial());
    const auto& r0 = res.trace.rounds[0];
    const Rational chosen = mkt::revenue(r0.prices, r0.sold);
    for (const ArrivalOrder& order : mech::all_orders(inst.buyer_count())) {
        const Allocation a = mech::sequential_run(inst, r0.prices, r0.caps, order);
        REQUIRE(chosen <= mkt::revenue(r0.prices, a));
    }
    check_trace_invariants(inst, res.trace, res.initial);
}

TEST_CASE("greedy start assigns copies by marginal value") {
    SECTION("split market") {
        const Allocation a = hv::greedy_initial(split_market());
        REQUIRE(a.bundles == std::vector<GoodSet>{0b01, 0b10});
    }
    SECTION("ties go to the smallest buyer id") {
        Instance inst;
        inst.m = 1;
        inst.supply = {1};
        inst.buyers.push_back(Valuation::additive(finite({5})));
        inst.buyers.push_back(Valuation::additive(finite({5})));
        const Allocation a = hv::greedy_initial(inst);
        REQUIRE(a.bundles == std::vector<GoodSet>{0b01, 0});
    }
    SECTION("zero-value copies stay unsold") {
        Instance inst;
        inst.m = 1;
        inst.supply = {2};
        inst.buyers.push_back(Valuation::additive(finite({0})));
        const Allocation a = hv::greedy_initial(inst);
        REQUIRE(a.bundles == std::vector<GoodSet>{0});
    }
    SECTION("unit-demand buyers never take a second good") {
        Instance inst;
        inst.m = 2;
        inst.supply = {1, 1};
        inst.buyers.push_back(Valuation::unit_demand(finite({4, 3})));
        inst.buyers.push_back(Valuation::additive(finite({2, 2})));
        const Allocation a = hv::greedy_initial(inst);
        REQUIRE(a.bundles == std::vector<GoodSet>{0b01, 0b10});
    }
}

TEST_CASE("solver input guards") {
    SECTION("quantity-valued buyers are not supported") {
        Instance inst;
        inst.m = 2;
        inst.supply = {1, 1};
        inst.buyers.push_back(Valuation::multi_unit(finite({0, 3, 3})));
        REQUIRE_THROWS_AS(hv::solve_xos(inst, GammaStrategy::adversarial()), Error);
        try {
            hv::solve_xos(inst, GammaStrategy::adversarial());
        } catch (const Error& e) {
            REQUIRE(e.kind() == ErrorKind::Unsupported);
        }
    }
    SECTION("a market with nothing worth selling is degenerate") {
        Instance inst;
        inst.m = 1;
        inst.supply = {1};
        inst.buyers.push_back(Valuation::additive(finite({0})));
        try {
            hv::solve_xos(inst, GammaStrategy::adversarial());
            FAIL("expected a degenerate-market error");
        } catch (const Error& e) {
            REQUIRE(e.kind() == ErrorKind::Degenerate);
        }
    }
    SECTION("explicit round counts are honoured") {
        const auto res = hv::solve_xos(split_market(), GammaStrategy::adversarial(),
                                       hv::InitialMode::Brute, 4);
        REQUIRE(res.trace.gamma == 4);
        REQUIRE(res.trace.rounds.size() == 4);
    }
}

TEST_CASE("threshold selection returns the earliest qualifying round") {
    const auto res = hv::solve_xos(split_market(), GammaStrategy::fixed({0, 1}));
    REQUIRE(hv::select_first_threshold(res.trace, Rational(3)) == 0);  // 7/2 >= 3
    REQUIRE(hv::select_first_threshold(res.trace, Rational(5)) == 1);  // tail ~8
    try {
        hv::select_first_threshold(res.trace, Rational(100));
        FAIL("expected a charging-violation error");
    } catch (const Error& e) {
        REQUIRE(e.kind() == ErrorKind::ChargingViolation);
    }
}

TEST_CASE("trace invariants hold across random markets") {
    int solved = 0;
    for (std::uint64_t trial = 0; trial < 60; ++trial) {
        Rng rng(trial * 7919 + 17);
        const Instance inst = random_xos_instance(rng);
        const auto brute = vf::brute_optimal_welfare(inst);
        if (sgn(brute.welfare) == 0) {
            try {
                hv::solve_xos(inst, GammaStrategy::adversarial());
                FAIL("expected a degenerate-market error");
            } catch (const Error& e) {
                REQUIRE(e.kind() == ErrorKind::Degenerate);
            }
            continue;
        }
        ++solved;

        const auto adv = hv::solve_xos(inst, GammaStrategy::adversarial());
        check_trace_invariants(inst, adv.trace, adv.initial);
        REQUIRE(adv.initial == brute.alloc);

        const auto rnd = hv::solve_xos(
            inst, GammaStrategy::random_sampling(OrderSampler::uniform(), 0, trial),
            hv::InitialMode::Greedy);
        check_trace_invariants(inst, rnd.trace, rnd.initial);
        REQUIRE(mkt::social_welfare(inst, rnd.initial) <= brute.welfare);
    }
    REQUIRE(solved >= 30); // the sweep must exercise plenty of non-degenerate runs
}

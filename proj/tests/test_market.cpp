#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "oracle_utils.hpp"
#include "pricing/market.hpp"
#include "pricing/rng.hpp"

using namespace pricing;
using market::copies_allocated;
using market::feasible;
using market::holders;
using market::per_good_utility;
using market::revenue;
using market::social_welfare;
using market::surplus;
using market::theta;
using market::top_buyers;

namespace {

std::vector<Rational> rats(std::initializer_list<long> values) {
    std::vector<Rational> out;
    for (long v : values) out.emplace_back(rat(v));
    return out;
}

Instance two_good_instance() {
    Instance inst;
    inst.m = 2;
    inst.supply = {1, 2};
    inst.buyers = {Valuation::additive(rats({2, 3})), Valuation::unit_demand(rats({5, 3}))};
    inst.validate();
    return inst;
}

} // namespace

TEST_CASE("instance validation", "[market]") {
    Instance inst = two_good_instance();
    CHECK(inst.total_supply() == 3);
    CHECK(inst.avg_supply() == rat(3, 2));
    CHECK(inst.max_supply() == 2);
    CHECK(inst.all_goods() == 0b11);

    Instance bad = inst;
    bad.supply = {1};
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = inst;
    bad.supply = {0, 2};
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = inst;
    bad.buyers.clear();
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = inst;
    bad.buyers.push_back(Valuation::additive(rats({1})));
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = inst;
    bad.m = 0;
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("allocation accounting on a pinned example", "[market]") {
    const Instance inst = two_good_instance();
    Allocation a;
    a.bundles = {0b11, 0b10}; // buyer 0 takes both goods, buyer 1 takes good 1

    CHECK(copies_allocated(a, 0) == 1);
    CHECK(copies_allocated(a, 1) == 2);
    CHECK(holders(a, 1) == std::vector<int>{0, 1});
    CHECK(theta(a) == 3);
    CHECK(feasible(inst, a));
    CHECK(social_welfare(inst, a) == rat(8)); // (2+3) + 3

    Prices p{rat(1), rat(1, 2)};
    CHECK(revenue(p, a) == rat(2));
    CHECK(surplus(inst, p, a) == rat(6));

    Allocation over;
    over.bundles = {0b01, 0b01};
    CHECK_FALSE(feasible(inst, over));

    const Allocation none = Allocation::none(2);
    CHECK(theta(none) == 0);
    CHECK(social_welfare(inst, none) == rat(0));
}

TEST_CASE("revenue requires prices on every allocated good", "[market]") {
    Allocation a;
    a.bundles = {0b10};
    Prices p{rat(1), std::nullopt};
    CHECK_THROWS_AS(revenue(p, a), Error);
    a.bundles = {0b01};
    CHECK(revenue(p, a) == rat(1));
}

TEST_CASE("per-good witness utilities decompose welfare", "[market]") {
    const Instance inst = two_good_instance();
    Allocation a;
    a.bundles = {0b11, 0b10};
    CHECK(per_good_utility(inst, a, 0) == rat(2));
    CHECK(per_good_utility(inst, a, 1) == rat(6)); // 3 from each holder

    SECTION("sum over goods equals social welfare on random XoS markets") {
        Rng rng(404);
        for (int trial = 0; trial < 50; ++trial) {
            Instance market;
            market.m = 4;
            market.supply = {2, 2, 2, 2};
            for (int j = 0; j < 3; ++j) {
                std::vector<std::vector<Rational>> clauses;
                const long n_clauses = rng.range(1, 3);
                for (long l = 0; l < n_clauses; ++l) {
                    std::vector<Rational> c;
                    for (int i = 0; i < 4; ++i) c.push_back(rat(rng.range(0, 9)));
                    clauses.push_back(std::move(c));
                }
                market.buyers.push_back(Valuation::xos(std::move(clauses)));
            }
            Allocation alloc;
            for (int j = 0; j < 3; ++j)
                alloc.bundles.push_back(static_cast<GoodSet>(rng.range(0, 15)));
            Rational total = 0;
            for (int i = 0; i < 4; ++i) total += per_good_utility(market, alloc, i);
            CHECK(total == social_welfare(market, alloc));
        }
    }
}

TEST_CASE("top_buyers ranks holders by witness entry", "[market]") {
    const Instance inst = two_good_instance();
    Allocation a;
    a.bundles = {0b11, 0b10};

    // Both holders of good 1 have witness entry 3; the stable tie keeps buyer 0 first.
    CHECK(top_buyers(inst, a, 1, 0).empty());
    CHECK(top_buyers(inst, a, 1, 1) == std::vector<int>{0});
    CHECK(top_buyers(inst, a, 1, 2) == std::vector<int>{0, 1});
    CHECK_THROWS_AS(top_buyers(inst, a, 1, 3), Error);
    CHECK_THROWS_AS(top_buyers(inst, a, 1, -1), Error);

    SECTION("a strictly better holder wins regardless of index") {
        Instance big;
        big.m = 1;
        big.supply = {3};
        big.buyers = {Valuation::additive(rats({1})), Valuation::additive(rats({7})),
                      Valuation::additive(rats({4}))};
        Allocation all;
        all.bundles = {0b1, 0b1, 0b1};
        CHECK(top_buyers(big, all, 0, 1) == std::vector<int>{1});
        CHECK(top_buyers(big, all, 0, 2) == std::vector<int>{1, 2});
    }

    SECTION("prefixes nest") {
        Rng rng(11);
        Instance market;
        market.m = 3;
        market.supply = {4, 4, 4};
        for (int j = 0; j < 4; ++j) {
            std::vector<Rational> v;
            for (int i = 0; i < 3; ++i) v.push_back(rat(rng.range(0, 5)));
            market.buyers.push_back(Valuation::additive(std::move(v)));
        }
        Allocation alloc;
        for (int j = 0; j < 4; ++j)
            alloc.bundles.push_back(static_cast<GoodSet>(rng.range(0, 7)));
        for (int i = 0; i < 3; ++i) {
            const int h = static_cast<int>(holders(alloc, i).size());
            std::vector<int> prev;
            for (int r = 0; r <= h; ++r) {
                const std::vector<int> cur = top_buyers(market, alloc, i, r);
                CHECK(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
                prev = cur;
            }
        }
    }
}

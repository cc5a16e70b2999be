#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "pricing/generators.hpp"
#include "pricing/multiunit.hpp"

using namespace pricing;
namespace gen = pricing::generators;

namespace {

// Structural equality via exhaustive subset values — robust at desk scale.
bool same_instance(const Instance& a, const Instance& b) {
    if (a.m != b.m || a.supply != b.supply ||
        a.buyer_count() != b.buyer_count())
        return false;
    for (int j = 0; j < a.buyer_count(); ++j) {
        const auto& va = a.buyers[static_cast<std::size_t>(j)];
        const auto& vb = b.buyers[static_cast<std::size_t>(j)];
        if (va.cls() != vb.cls()) return false;
        for (GoodSet t = 0; t < (GoodSet{1} << a.m); ++t)
            if (va.value(t) != vb.value(t)) return false;
    }
    return true;
}

} // namespace

TEST_CASE("generation is deterministic per seed") {
    for (ValuationClass cls :
         {ValuationClass::Additive, ValuationClass::UnitDemand, ValuationClass::Xos,
          ValuationClass::MultiUnit, ValuationClass::SingleMinded}) {
        gen::GenSpec spec;
        spec.cls = cls;
        spec.m = 3;
        spec.buyers = 3;
        spec.supply_max = 2;
        spec.seed = 77;
        const Instance a = gen::generate(spec);
        const Instance b = gen::generate(spec);
        REQUIRE(same_instance(a, b));
        spec.seed = 78;
        const Instance c = gen::generate(spec);
        REQUIRE(c.m == 3);
        REQUIRE(c.buyer_count() == 3);
    }
}

TEST_CASE("generated instances respect the configured ranges") {
    gen::GenSpec spec;
    spec.cls = ValuationClass::Additive;
    spec.m = 4;
    spec.buyers = 5;
    spec.supply_min = 1;
    spec.supply_max = 3;
    spec.value_min = 2;
    spec.value_max = 9;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        spec.seed = seed;
        const Instance inst = gen::generate(spec);
        for (int k : inst.supply) {
            REQUIRE(k >= 1);
            REQUIRE(k <= 3);
        }
        for (const auto& v : inst.buyers) {
            REQUIRE(v.cls() == ValuationClass::Additive);
            for (int i = 0; i < inst.m; ++i) {
                const Rational x = v.value(GoodSet{1} << i);
                REQUIRE(x >= 2);
                REQUIRE(x <= 9);
            }
        }
    }
}

TEST_CASE("quantity-market specs are safe for the single-price solver") {
    gen::GenSpec spec;
    spec.cls = ValuationClass::MultiUnit;
    spec.m = 5;
    spec.buyers = 3;
    spec.supply_min = 2; // overridden: quantity markets are one copy per unit
    spec.supply_max = 4;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        spec.seed = seed;
        const Instance inst = gen::generate(spec);
        for (int k : inst.supply) REQUIRE(k == 1);
        REQUIRE(multiunit::check_no_overwhelming(inst));
        for (const auto& v : inst.buyers) {
            const auto& w = v.table();
            REQUIRE(w.size() == 6);
            REQUIRE(sgn(w[0]) == 0);
            for (std::size_t q = 1; q < w.size(); ++q) REQUIRE(w[q] >= w[q - 1]);
        }
    }
}

TEST_CASE("xos specs draw clause counts within range") {
    gen::GenSpec spec;
    spec.cls = ValuationClass::Xos;
    spec.m = 3;
    spec.buyers = 4;
    spec.clauses_min = 2;
    spec.clauses_max = 4;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        spec.seed = seed;
        const Instance inst = gen::generate(spec);
        for (const auto& v : inst.buyers) {
            REQUIRE(v.clauses().size() >= 2);
            REQUIRE(v.clauses().size() <= 4);
        }
    }
}

TEST_CASE("single-minded specs want a non-empty bundle in range") {
    gen::GenSpec spec;
    spec.cls = ValuationClass::SingleMinded;
    spec.m = 3;
    spec.buyers = 6;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        spec.seed = seed;
        const Instance inst = gen::generate(spec);
        for (const auto& v : inst.buyers) {
            REQUIRE(v.demand_set() != 0);
            REQUIRE(v.demand_set() < (GoodSet{1} << 3));
        }
    }
}

TEST_CASE("invalid specs are rejected") {
    gen::GenSpec spec;
    spec.m = 0;
    REQUIRE_THROWS_AS(gen::generate(spec), Error);
    spec.m = 2;
    spec.buyers = 0;
    REQUIRE_THROWS_AS(gen::generate(spec), Error);
    spec.buyers = 1;
    spec.supply_min = 2;
    spec.supply_max = 1;
    REQUIRE_THROWS_AS(gen::generate(spec), Error);
    spec.supply_min = 1;
    spec.supply_max = 1;
    spec.value_min = 5;
    spec.value_max = 4;
    REQUIRE_THROWS_AS(gen::generate(spec), Error);
    spec.value_min = 1;
    spec.value_max = 100;
    spec.clauses_min = 0;
    REQUIRE_THROWS_AS(gen::generate(spec), Error);
    spec.clauses_min = 1;
    spec.cls = ValuationClass::MultiUnit;
    spec.m = 1;
    REQUIRE_THROWS_AS(gen::generate(spec), Error);
}

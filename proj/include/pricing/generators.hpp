#pragma once

// Seeded random instance generators, one per valuation class, shaped so
// every output satisfies the solver preconditions by construction: integer
// values for small denominators, and multi-unit tables that are monotone,
// zero-anchored, and flat beyond half the stock.

#include <cstdint>
#include <vector>

#include "pricing/errors.hpp"
#include "pricing/market.hpp"
#include "pricing/rational.hpp"
#include "pricing/rng.hpp"
#include "pricing/valuations.hpp"

namespace pricing::generators {

struct GenSpec {
    ValuationClass cls = ValuationClass::Additive;
    int m = 2;
    int buyers = 2;
    int supply_min = 1;
    int supply_max = 1;
    long value_min = 1;
    long value_max = 100;
    int clauses_min = 1; // XoS only
    int clauses_max = 3; // XoS only
    std::uint64_t seed = 0;
};

inline void validate_spec(const GenSpec& spec) {
    require(spec.m >= 1, ErrorKind::Input, "need at least one good");
    require(spec.buyers >= 1, ErrorKind::Input, "need at least one buyer");
    require(1 <= spec.supply_min && spec.supply_min <= spec.supply_max,
            ErrorKind::Input, "supply range is empty or non-positive");
    require(0 <= spec.value_min && spec.value_min <= spec.value_max,
            ErrorKind::Input, "value range is empty or negative");
    require(1 <= spec.clauses_min && spec.clauses_min <= spec.clauses_max,
            ErrorKind::Input, "clause count range is empty or non-positive");
    if (spec.cls == ValuationClass::MultiUnit)
        require(spec.m >= 2, ErrorKind::Input,
                "quantity markets need at least two units");
}

inline Instance generate(const GenSpec& spec) {
    validate_spec(spec);
    Rng rng(spec.seed);
    Instance inst;
    inst.m = spec.m;

    // Quantity markets carry exactly one copy per unit; everything else
    // draws supply from the configured range.
    for (int i = 0; i < spec.m; ++i) {
        if (spec.cls == ValuationClass::MultiUnit)
            inst.supply.push_back(1);
        else
            inst.supply.push_back(
                static_cast<int>(rng.range(spec.supply_min, spec.supply_max)));
    }

    auto draw_value = [&]() { return Rational(rng.range(spec.value_min, spec.value_max)); };
    auto draw_row = [&]() {
        std::vector<Rational> row;
        row.reserve(static_cast<std::size_t>(spec.m));
        for (int i = 0; i < spec.m; ++i) row.push_back(draw_value());
        return row;
    };

    for (int j = 0; j < spec.buyers; ++j) {
        switch (spec.cls) {
        case ValuationClass::Additive:
            inst.buyers.push_back(Valuation::additive(draw_row()));
            break;
        case ValuationClass::UnitDemand:
            inst.buyers.push_back(Valuation::unit_demand(draw_row()));
            break;
        case ValuationClass::Xos: {
            const int count =
                static_cast<int>(rng.range(spec.clauses_min, spec.clauses_max));
            std::vector<std::vector<Rational>> clauses;
            clauses.reserve(static_cast<std::size_t>(count));
            for (int c = 0; c < count; ++c) clauses.push_back(draw_row());
            inst.buyers.push_back(Valuation::xos(std::move(clauses)));
            break;
        }
        case ValuationClass::MultiUnit: {
            std::vector<Rational> table{Rational(0)};
            for (int q = 1; q <= spec.m; ++q) {
                const Rational inc = q <= spec.m / 2 ? draw_value() : Rational(0);
                table.push_back(table.back() + inc);
            }
            inst.buyers.push_back(Valuation::multi_unit(std::move(table)));
            break;
        }
        case ValuationClass::SingleMinded: {
            GoodSet bundle = 0;
            for (int i = 0; i < spec.m; ++i)
                if (rng.range(0, 1) == 0) bundle |= (GoodSet{1} << i);
            if (bundle == 0) bundle = GoodSet{1} << rng.range(0, spec.m - 1);
            inst.buyers.push_back(
                Valuation::single_minded(bundle, draw_value(), spec.m));
            break;
        }
        }
    }
    inst.validate();
    return inst;
}

} // namespace pricing::generators

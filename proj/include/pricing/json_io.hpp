#pragma once

// JSON serialization for every domain type, exact and bidirectional.
// Rationals stay exact: integers small enough for doubles serialize as JSON
// integers, everything else as a "num/den" string. Unavailable prices are
// null. Good sets serialize as sorted id arrays. parse(serialize(x)) == x.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pricing/check_report.hpp"
#include "pricing/errors.hpp"
#include "pricing/generators.hpp"
#include "pricing/item_halving.hpp"
#include "pricing/market.hpp"
#include "pricing/mechanisms.hpp"
#include "pricing/multiunit.hpp"
#include "pricing/price_doubling.hpp"
#include "pricing/rational.hpp"
#include "pricing/valuations.hpp"

namespace pricing::jsonio {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// Rationals

inline Json to_json(const Rational& x) {
    static const Integer kSafe = Integer(1) << 53; // doubles stay exact below
    if (x.get_den() == 1 && x.get_num() <= kSafe && -kSafe <= x.get_num())
        return Json(static_cast<std::int64_t>(x.get_num().get_si()));
    if (x.get_den() == 1) return Json(x.get_num().get_str());
    return Json(x.get_num().get_str() + "/" + x.get_den().get_str());
}

inline Rational rational_from_json(const Json& j) {
    if (j.is_number_integer())
        return Rational(static_cast<long>(j.get<std::int64_t>()));
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        require(!s.empty(), ErrorKind::Input, "empty rational literal");
        try {
            Rational x(s);
            require(sgn(x.get_den()) != 0, ErrorKind::Input,
                    "rational literal with zero denominator: " + s);
            x.canonicalize();
            return x;
        } catch (const std::invalid_argument&) {
            fail(ErrorKind::Input, "malformed rational literal: " + s);
        }
    }
    fail(ErrorKind::Input, "rationals must be integers or \"num/den\" strings");
}

// ---------------------------------------------------------------------------
// Good sets, prices, orders

inline Json goods_to_json(GoodSet t, int m) {
    Json arr = Json::array();
    for (int i = 0; i < m; ++i)
        if (t & (GoodSet{1} << i)) arr.push_back(i);
    return arr;
}

inline GoodSet goods_from_json(const Json& j, int m) {
    require(j.is_array(), ErrorKind::Input, "good set must be an id array");
    GoodSet t = 0;
    for (const auto& e : j) {
        require(e.is_number_integer(), ErrorKind::Input, "good ids must be integers");
        const long i = e.get<long>();
        require(0 <= i && i < m, ErrorKind::Input, "good id outside the instance");
        t |= (GoodSet{1} << i);
    }
    return t;
}

inline Json to_json(const Prices& p) {
    Json arr = Json::array();
    for (const auto& x : p)
        arr.push_back(x.has_value() ? to_json(*x) : Json());
    return arr;
}

inline Prices prices_from_json(const Json& j) {
    require(j.is_array(), ErrorKind::Input, "prices must be an array");
    Prices p;
    for (const auto& e : j)
        p.push_back(e.is_null() ? std::optional<Rational>{}
                                : std::optional<Rational>{rational_from_json(e)});
    return p;
}

inline Json orders_to_json(const std::vector<ArrivalOrder>& orders) {
    Json arr = Json::array();
    for (const auto& pi : orders) arr.push_back(pi);
    return arr;
}

inline std::vector<ArrivalOrder> orders_from_json(const Json& j) {
    require(j.is_array(), ErrorKind::Input, "orders must be an array of arrays");
    std::vector<ArrivalOrder> orders;
    for (const auto& e : j) {
        require(e.is_array(), ErrorKind::Input, "each order must be a buyer array");
        ArrivalOrder pi;
        for (const auto& x : e) {
            require(x.is_number_integer(), ErrorKind::Input,
                    "buyer indices must be integers");
            pi.push_back(x.get<int>());
        }
        orders.push_back(std::move(pi));
    }
    return orders;
}

inline Json to_json(const mechanisms::OrderSampler& s) {
    Json j;
    if (s.kind == mechanisms::OrderSampler::Kind::Uniform) {
        j["type"] = "uniform";
        return j;
    }
    j["type"] = "explicit";
    j["orders"] = orders_to_json(s.orders);
    Json weights = Json::array();
    for (const auto& w : s.weights) weights.push_back(to_json(w));
    j["weights"] = std::move(weights);
    return j;
}

inline mechanisms::OrderSampler sampler_from_json(const Json& j) {
    require(j.is_object() && j.contains("type"), ErrorKind::Input,
            "order distribution needs a type tag");
    const std::string type = j.at("type").get<std::string>();
    if (type == "uniform") return mechanisms::OrderSampler::uniform();
    if (type == "explicit") {
        std::vector<Rational> weights;
        for (const auto& e : j.at("weights")) weights.push_back(rational_from_json(e));
        return mechanisms::OrderSampler::explicit_orders(orders_from_json(j.at("orders")),
                                                         std::move(weights));
    }
    fail(ErrorKind::Input, "unknown order distribution type: " + type);
}

// ---------------------------------------------------------------------------
// Valuations and instances

inline Json to_json(const Valuation& v, int m) {
    Json j;
    j["class"] = valuations::class_name(v.cls());
    switch (v.cls()) {
    case ValuationClass::Additive:
    case ValuationClass::UnitDemand: {
        Json arr = Json::array();
        for (int i = 0; i < m; ++i) arr.push_back(to_json(v.value(GoodSet{1} << i)));
        j["values"] = std::move(arr);
        break;
    }
    case ValuationClass::Xos: {
        Json cl = Json::array();
        for (const auto& clause : v.clauses()) {
            Json arr = Json::array();
            for (const auto& x : clause.values) arr.push_back(to_json(x));
            cl.push_back(std::move(arr));
        }
        j["clauses"] = std::move(cl);
        break;
    }
    case ValuationClass::MultiUnit: {
        Json arr = Json::array();
        for (const auto& x : v.table()) arr.push_back(to_json(x));
        j["table"] = std::move(arr);
        break;
    }
    case ValuationClass::SingleMinded:
        j["bundle"] = goods_to_json(v.demand_set(), m);
        j["value"] = to_json(v.bundle_value());
        break;
    }
    return j;
}

inline std::vector<Rational> rational_row_from_json(const Json& j) {
    require(j.is_array(), ErrorKind::Input, "expected an array of rationals");
    std::vector<Rational> row;
    for (const auto& e : j) row.push_back(rational_from_json(e));
    return row;
}

inline Valuation valuation_from_json(const Json& j, int m) {
    require(j.is_object() && j.contains("class"), ErrorKind::Input,
            "valuation needs a class tag");
    const std::string cls = j.at("class").get<std::string>();
    if (cls == "additive") return Valuation::additive(rational_row_from_json(j.at("values")));
    if (cls == "unit_demand")
        return Valuation::unit_demand(rational_row_from_json(j.at("values")));
    if (cls == "xos") {
        const Json& cl = j.at("clauses");
        require(cl.is_array(), ErrorKind::Input, "xos clauses must be an array");
        std::vector<std::vector<Rational>> clauses;
        for (const auto& e : cl) clauses.push_back(rational_row_from_json(e));
        return Valuation::xos(std::move(clauses));
    }
    if (cls == "multi_unit")
        return Valuation::multi_unit(rational_row_from_json(j.at("table")));
    if (cls == "single_minded")
        return Valuation::single_minded(goods_from_json(j.at("bundle"), m),
                                        rational_from_json(j.at("value")), m);
    fail(ErrorKind::Input, "unknown valuation class: " + cls);
}

inline Json to_json(const Instance& inst) {
    Json j;
    j["goods"] = inst.m;
    j["supply"] = inst.supply;
    Json buyers = Json::array();
    for (const auto& v : inst.buyers) buyers.push_back(to_json(v, inst.m));
    j["buyers"] = std::move(buyers);
    return j;
}

inline Instance instance_from_json(const Json& j) {
    require(j.is_object(), ErrorKind::Input, "instance must be an object");
    Instance inst;
    inst.m = j.at("goods").get<int>();
    inst.supply = j.at("supply").get<std::vector<int>>();
    for (const auto& e : j.at("buyers"))
        inst.buyers.push_back(valuation_from_json(e, inst.m));
    inst.validate();
    return inst;
}

// ---------------------------------------------------------------------------
// Allocations and solutions

inline Json to_json(const Allocation& a, int m) {
    Json arr = Json::array();
    for (GoodSet t : a.bundles) arr.push_back(goods_to_json(t, m));
    return arr;
}

inline Allocation allocation_from_json(const Json& j, int m) {
    require(j.is_array(), ErrorKind::Input, "allocation must be an array of bundles");
    Allocation a;
    for (const auto& e : j) a.bundles.push_back(goods_from_json(e, m));
    return a;
}

inline Json to_json(const PricingSolution& sol, int m) {
    Json j;
    j["prices"] = to_json(sol.prices);
    j["caps"] = sol.caps;
    j["allocation"] = to_json(sol.alloc, m);
    return j;
}

inline PricingSolution solution_from_json(const Json& j, int m) {
    PricingSolution sol;
    sol.prices = prices_from_json(j.at("prices"));
    sol.caps = j.at("caps").get<std::vector<int>>();
    sol.alloc = allocation_from_json(j.at("allocation"), m);
    return sol;
}

// ---------------------------------------------------------------------------
// Core traces

inline halving::RoundBranch branch_from_name(const std::string& name) {
    if (name == "sold-carryover") return halving::RoundBranch::SoldCarryover;
    if (name == "alloc-unsold") return halving::RoundBranch::AllocUnsold;
    if (name == "tail") return halving::RoundBranch::Tail;
    fail(ErrorKind::Input, "unknown round branch: " + name);
}

inline Json to_json(const halving::CoreRound& r, int m) {
    Json j;
    j["benchmark"] = to_json(r.benchmark, m);
    j["prices"] = to_json(r.prices);
    j["caps"] = r.caps;
    j["order"] = r.order;
    j["sold"] = to_json(r.sold, m);
    j["branch"] = halving::branch_name(r.branch);
    return j;
}

inline halving::CoreRound core_round_from_json(const Json& j, int m) {
    halving::CoreRound r;
    r.benchmark = allocation_from_json(j.at("benchmark"), m);
    r.prices = prices_from_json(j.at("prices"));
    r.caps = j.at("caps").get<std::vector<int>>();
    r.order = j.at("order").get<ArrivalOrder>();
    r.sold = allocation_from_json(j.at("sold"), m);
    r.branch = branch_from_name(j.at("branch").get<std::string>());
    return r;
}

inline Json to_json(const halving::CoreTrace& t, int m) {
    Json j;
    j["gamma"] = t.gamma;
    j["epsilon"] = to_json(t.epsilon);
    j["tail_buyer"] = t.tail_buyer;
    j["tail_good"] = t.tail_good;
    j["tail_value"] = to_json(t.tail_value);
    Json rounds = Json::array();
    for (const auto& r : t.rounds) rounds.push_back(to_json(r, m));
    j["rounds"] = std::move(rounds);
    j["selected"] = t.selected;
    return j;
}

inline halving::CoreTrace core_trace_from_json(const Json& j, int m) {
    halving::CoreTrace t;
    t.gamma = j.at("gamma").get<int>();
    t.epsilon = rational_from_json(j.at("epsilon"));
    t.tail_buyer = j.at("tail_buyer").get<int>();
    t.tail_good = j.at("tail_good").get<int>();
    t.tail_value = rational_from_json(j.at("tail_value"));
    for (const auto& e : j.at("rounds")) t.rounds.push_back(core_round_from_json(e, m));
    t.selected = j.at("selected").get<int>();
    return t;
}

// ---------------------------------------------------------------------------
// Reduction traces

inline Json to_json(const doubling::ReductionStep& s, int m) {
    Json j;
    j["reserve"] = to_json(s.reserve);
    j["prices"] = to_json(s.prices);
    j["full"] = to_json(s.full, m);
    j["stripped"] = to_json(s.stripped, m);
    return j;
}

inline doubling::ReductionStep reduction_step_from_json(const Json& j, int m) {
    doubling::ReductionStep s;
    s.reserve = rational_from_json(j.at("reserve"));
    s.prices = prices_from_json(j.at("prices"));
    s.full = allocation_from_json(j.at("full"), m);
    s.stripped = allocation_from_json(j.at("stripped"), m);
    return s;
}

inline Json to_json(const doubling::ReductionTrace& t, int m) {
    Json j;
    j["base_welfare"] = to_json(t.sw0);
    j["alpha"] = to_json(t.alpha);
    j["gamma"] = t.gamma;
    Json steps = Json::array();
    for (const auto& s : t.steps) steps.push_back(to_json(s, m));
    j["steps"] = std::move(steps);
    j["selected"] = t.selected;
    return j;
}

inline doubling::ReductionTrace reduction_trace_from_json(const Json& j, int m) {
    doubling::ReductionTrace t;
    t.sw0 = rational_from_json(j.at("base_welfare"));
    t.alpha = rational_from_json(j.at("alpha"));
    t.gamma = j.at("gamma").get<int>();
    for (const auto& e : j.at("steps"))
        t.steps.push_back(reduction_step_from_json(e, m));
    t.selected = j.at("selected").get<int>();
    return t;
}

// ---------------------------------------------------------------------------
// Quantity-market results

inline MultiUnitCase case_from_name(const std::string& name) {
    if (name == "threshold") return MultiUnitCase::Threshold;
    if (name == "halving") return MultiUnitCase::Halving;
    if (name == "halving-tail") return MultiUnitCase::HalvingTail;
    fail(ErrorKind::Input, "unknown single-price case: " + name);
}

inline Json to_json(const MultiUnitSolution& s) {
    Json j;
    j["price"] = to_json(s.price);
    j["quantities"] = s.quantities;
    j["case"] = multiunit::case_name(s.mode);
    return j;
}

inline MultiUnitSolution multiunit_solution_from_json(const Json& j) {
    MultiUnitSolution s;
    s.price = rational_from_json(j.at("price"));
    s.quantities = j.at("quantities").get<std::vector<int>>();
    s.mode = case_from_name(j.at("case").get<std::string>());
    return s;
}

inline Json to_json(const multiunit::MultiUnitRound& r) {
    Json j;
    j["benchmark"] = r.benchmark;
    j["price"] = to_json(r.price);
    j["sold"] = r.sold;
    return j;
}

inline multiunit::MultiUnitRound multiunit_round_from_json(const Json& j) {
    multiunit::MultiUnitRound r;
    r.benchmark = j.at("benchmark").get<std::vector<int>>();
    r.price = rational_from_json(j.at("price"));
    r.sold = j.at("sold").get<std::vector<int>>();
    return r;
}

inline Json to_json(const MultiUnitTrace& t) {
    Json j;
    j["gamma"] = t.gamma;
    j["probe_price"] = to_json(t.probe_price);
    j["probe_demand"] = t.probe_demand;
    j["case"] = multiunit::case_name(t.mode);
    j["threshold"] = to_json(t.threshold);
    Json rounds = Json::array();
    for (const auto& r : t.rounds) rounds.push_back(to_json(r));
    j["rounds"] = std::move(rounds);
    j["selected"] = t.selected;
    j["epsilon"] = to_json(t.epsilon);
    j["tail_buyer"] = t.tail_buyer;
    return j;
}

inline MultiUnitTrace multiunit_trace_from_json(const Json& j) {
    MultiUnitTrace t;
    t.gamma = j.at("gamma").get<int>();
    t.probe_price = rational_from_json(j.at("probe_price"));
    t.probe_demand = j.at("probe_demand").get<long>();
    t.mode = case_from_name(j.at("case").get<std::string>());
    t.threshold = rational_from_json(j.at("threshold"));
    for (const auto& e : j.at("rounds"))
        t.rounds.push_back(multiunit_round_from_json(e));
    t.selected = j.at("selected").get<int>();
    t.epsilon = rational_from_json(j.at("epsilon"));
    t.tail_buyer = j.at("tail_buyer").get<int>();
    return t;
}

inline Json to_json(const MultiUnitResult& r) {
    Json j;
    j["solution"] = to_json(r.solution);
    j["trace"] = to_json(r.trace);
    return j;
}

inline MultiUnitResult multiunit_result_from_json(const Json& j) {
    MultiUnitResult r;
    r.solution = multiunit_solution_from_json(j.at("solution"));
    r.trace = multiunit_trace_from_json(j.at("trace"));
    return r;
}

// ---------------------------------------------------------------------------
// Reports and generator specs

inline Json to_json(const verify::CheckReport& rep) {
    Json j;
    j["claim"] = rep.claim;
    j["pass"] = rep.pass;
    j["index"] = rep.index;
    j["lhs"] = to_json(rep.lhs);
    j["rhs"] = to_json(rep.rhs);
    j["detail"] = rep.detail;
    return j;
}

inline ValuationClass class_from_name(const std::string& name) {
    if (name == "additive") return ValuationClass::Additive;
    if (name == "unit_demand") return ValuationClass::UnitDemand;
    if (name == "xos") return ValuationClass::Xos;
    if (name == "multi_unit") return ValuationClass::MultiUnit;
    if (name == "single_minded") return ValuationClass::SingleMinded;
    fail(ErrorKind::Input, "unknown valuation class: " + name);
}

inline Json to_json(const generators::GenSpec& spec) {
    Json j;
    j["class"] = valuations::class_name(spec.cls);
    j["goods"] = spec.m;
    j["buyers"] = spec.buyers;
    j["supply"] = Json::array({spec.supply_min, spec.supply_max});
    j["values"] = Json::array({spec.value_min, spec.value_max});
    j["clauses"] = Json::array({spec.clauses_min, spec.clauses_max});
    j["seed"] = spec.seed;
    return j;
}

inline generators::GenSpec gen_spec_from_json(const Json& j) {
    generators::GenSpec spec;
    spec.cls = class_from_name(j.at("class").get<std::string>());
    spec.m = j.at("goods").get<int>();
    spec.buyers = j.at("buyers").get<int>();
    if (j.contains("supply")) {
        spec.supply_min = j.at("supply").at(0).get<int>();
        spec.supply_max = j.at("supply").at(1).get<int>();
    }
    if (j.contains("values")) {
        spec.value_min = j.at("values").at(0).get<long>();
        spec.value_max = j.at("values").at(1).get<long>();
    }
    if (j.contains("clauses")) {
        spec.clauses_min = j.at("clauses").at(0).get<int>();
        spec.clauses_max = j.at("clauses").at(1).get<int>();
    }
    if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
    return spec;
}

// ---------------------------------------------------------------------------
// Whole-file helpers

inline std::string serialize(const Json& j) { return j.dump(2) + "\n"; }

inline Json parse(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        fail(ErrorKind::Input, std::string("malformed JSON: ") + e.what());
    }
}

} // namespace pricing::jsonio

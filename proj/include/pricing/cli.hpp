#pragma once

// Command-line front end. One binary, seven subcommands:
//
//   gen              instance from a generator-spec file
//   solve-xos        round-based item pricing for xos-representable buyers
//   solve-multiunit  single-price outcome for interchangeable units
//   price-double     welfare-to-revenue reduction for unit-demand buyers
//   simulate         replay a priced solution under chosen arrival orders
//   verify           re-check a result document; exit 0 iff every claim holds
//   bench            CSV of revenue/welfare ratios over an instance batch
//
// JSON in, JSON out (CSV for bench). Exit codes: 0 ok, 1 check failure,
// 2 input error, 3 size cap exceeded.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "pricing/errors.hpp"
#include "pricing/json_io.hpp"
#include "pricing/verify.hpp"

namespace pricing::cli {

namespace js = pricing::jsonio;
namespace mech = pricing::mechanisms;
using js::Json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitCapExceeded = 3;

// Everything a subcommand needs, collected before any computation starts.
struct RunConfig {
    std::string subcommand;
    std::string instance_path;
    std::string out_path;                    // empty = stdout
    int gamma = 0;                           // 0 = module default
    std::string epsilon;                     // rational literal; empty = default
    std::string arrival = "adversarial";     // adversarial | random | fixed
    std::string orders_file;
    int samples = 0;                         // 0 = module default
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string initial = "brute";           // brute | greedy
    std::string black_box = "unit_demand_walrasian";
    int max_goods = 16;
    int max_buyers = 8;
};

// ---------------------------------------------------------------------------
// Small I/O helpers
// ---------------------------------------------------------------------------

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorKind::Input, "cannot open input file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_text(const RunConfig& cfg, const std::string& text) {
    if (cfg.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(cfg.out_path, std::ios::binary);
    require(static_cast<bool>(out), ErrorKind::Input,
            "cannot open output file: " + cfg.out_path);
    out << text;
    require(static_cast<bool>(out), ErrorKind::Input,
            "failed to write output file: " + cfg.out_path);
}

inline Json load_document(const RunConfig& cfg) {
    require(!cfg.instance_path.empty(), ErrorKind::Input,
            "an input file is required (--instance)");
    return js::parse(read_file(cfg.instance_path));
}

inline void enforce_caps(const RunConfig& cfg, const Instance& inst) {
    require(inst.m <= cfg.max_goods, ErrorKind::CapExceeded,
            "instance has " + std::to_string(inst.m) + " goods; cap is " +
                std::to_string(cfg.max_goods) + " (--max-goods)");
    require(inst.buyer_count() <= cfg.max_buyers, ErrorKind::CapExceeded,
            "instance has " + std::to_string(inst.buyer_count()) + " buyers; cap is " +
                std::to_string(cfg.max_buyers) + " (--max-buyers)");
}

inline Instance load_instance(const RunConfig& cfg) {
    const Instance inst = js::instance_from_json(load_document(cfg));
    enforce_caps(cfg, inst);
    return inst;
}

inline Rational epsilon_scale(const RunConfig& cfg) {
    if (cfg.epsilon.empty()) return pow2(-20);
    const Rational eps = js::rational_from_json(Json(cfg.epsilon));
    require(sgn(eps) > 0, ErrorKind::Input, "--epsilon must be positive");
    return eps;
}

// An orders file holds either a JSON array of orders or a distribution
// object ({"type":"uniform"} / {"type":"explicit",...}).
struct LoadedOrders {
    std::vector<ArrivalOrder> orders;
    mech::OrderSampler sampler = mech::OrderSampler::uniform();
    bool has_sampler = false;
};

inline LoadedOrders load_orders_file(const std::string& path) {
    const Json j = js::parse(read_file(path));
    LoadedOrders out;
    if (j.is_array()) {
        out.orders = js::orders_from_json(j);
        return out;
    }
    out.sampler = js::sampler_from_json(j);
    out.has_sampler = true;
    if (out.sampler.kind == mech::OrderSampler::Kind::Explicit)
        out.orders = out.sampler.orders;
    return out;
}

inline halving::GammaStrategy strategy_from_config(const RunConfig& cfg) {
    if (cfg.arrival == "adversarial") {
        std::vector<ArrivalOrder> pi_set;
        if (!cfg.orders_file.empty()) {
            pi_set = load_orders_file(cfg.orders_file).orders;
            require(!pi_set.empty(), ErrorKind::Input,
                    "adversarial arrival with an orders file needs at least one order");
        }
        return halving::GammaStrategy::adversarial(std::move(pi_set));
    }
    if (cfg.arrival == "fixed") {
        require(!cfg.orders_file.empty(), ErrorKind::Input,
                "fixed arrival requires --orders-file with exactly one order");
        const auto loaded = load_orders_file(cfg.orders_file);
        require(loaded.orders.size() == 1, ErrorKind::Input,
                "fixed arrival requires exactly one order, got " +
                    std::to_string(loaded.orders.size()));
        return halving::GammaStrategy::fixed(loaded.orders.front());
    }
    if (cfg.arrival == "random") {
        mech::OrderSampler sampler = mech::OrderSampler::uniform();
        if (!cfg.orders_file.empty()) {
            const auto loaded = load_orders_file(cfg.orders_file);
            require(loaded.has_sampler, ErrorKind::Input,
                    "random arrival needs a distribution object in the orders file");
            sampler = loaded.sampler;
        }
        return halving::GammaStrategy::random_sampling(std::move(sampler), cfg.samples,
                                                       cfg.seed);
    }
    fail(ErrorKind::Input, "unknown arrival mode: " + cfg.arrival);
}

inline std::string rational_text(const Rational& x) {
    if (x.get_den() == 1) return x.get_num().get_str();
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

inline Json reports_to_json(const std::vector<verify::CheckReport>& reports) {
    Json arr = Json::array();
    for (const auto& r : reports) arr.push_back(js::to_json(r));
    return arr;
}

inline void print_failures(const std::vector<verify::CheckReport>& reports) {
    for (const auto& r : reports) {
        if (r.pass) continue;
        std::cerr << "check failed: " << r.claim << " (index " << r.index << ", "
                  << rational_text(r.lhs) << " vs " << rational_text(r.rhs) << ") "
                  << r.detail << "\n";
    }
}

inline int finish(const RunConfig& cfg, const Json& doc,
                  const std::vector<verify::CheckReport>& reports) {
    write_text(cfg, js::serialize(doc));
    if (verify::all_pass(reports)) return kExitOk;
    print_failures(reports);
    return kExitCheckFailure;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

inline int cmd_gen(const RunConfig& cfg) {
    generators::GenSpec spec = js::gen_spec_from_json(detail::load_document(cfg));
    if (cfg.seed_set) spec.seed = cfg.seed;
    const Instance inst = generators::generate(spec);
    detail::enforce_caps(cfg, inst);
    detail::write_text(cfg, js::serialize(js::to_json(inst)));
    return kExitOk;
}

inline int cmd_solve_xos(const RunConfig& cfg) {
    const Instance inst = detail::load_instance(cfg);
    const auto initial = cfg.initial == "greedy" ? halving::InitialMode::Greedy
                                                 : halving::InitialMode::Brute;
    const auto res = halving::solve_xos(inst, detail::strategy_from_config(cfg), initial,
                                        cfg.gamma, detail::epsilon_scale(cfg));
    const auto reports = verify::verify_core_bundle(inst, res.initial, res.trace);

    Json doc;
    doc["kind"] = "xos-core";
    doc["instance"] = js::to_json(inst);
    doc["initial"] = js::to_json(res.initial, inst.m);
    doc["solution"] = js::to_json(res.solution, inst.m);
    doc["trace"] = js::to_json(res.trace, inst.m);
    doc["revenue"] = js::to_json(market::revenue(res.solution.prices, res.solution.alloc));
    doc["welfare"] = js::to_json(market::social_welfare(inst, res.solution.alloc));
    doc["welfare_bound"] = js::to_json(market::social_welfare(inst, res.initial));
    doc["reports"] = detail::reports_to_json(reports);
    doc["all_pass"] = verify::all_pass(reports);
    return detail::finish(cfg, doc, reports);
}

inline int cmd_price_double(const RunConfig& cfg) {
    const Instance inst = detail::load_instance(cfg);
    const auto bb = doubling::black_box_by_name(cfg.black_box);
    const auto res = doubling::price_doubling_run(inst, bb);
    const Rational opt = verify::brute_optimal_welfare(inst).welfare;
    const auto reports = verify::verify_reduction_bundle(inst, res.trace, bb.alpha, opt);

    Json doc;
    doc["kind"] = "price-doubling";
    doc["instance"] = js::to_json(inst);
    doc["black_box"] = bb.name;
    doc["black_box_alpha"] = js::to_json(bb.alpha);
    doc["optimal_welfare"] = js::to_json(opt);
    doc["solution"] = js::to_json(res.solution, inst.m);
    doc["trace"] = js::to_json(res.trace, inst.m);
    doc["revenue"] = js::to_json(market::revenue(res.solution.prices, res.solution.alloc));
    doc["welfare"] = js::to_json(market::social_welfare(inst, res.solution.alloc));
    doc["reports"] = detail::reports_to_json(reports);
    doc["all_pass"] = verify::all_pass(reports);
    return detail::finish(cfg, doc, reports);
}

inline int cmd_solve_multiunit(const RunConfig& cfg) {
    require(cfg.initial != "greedy", ErrorKind::Input,
            "the single-price solver needs the brute-force starting allocation");
    const Instance inst = detail::load_instance(cfg);
    const auto brute = verify::brute_optimal_welfare(inst);
    const auto res =
        multiunit::solve_multiunit(inst, brute.alloc, cfg.gamma, detail::epsilon_scale(cfg));
    const auto reports = verify::verify_multiunit_bundle(inst, res, brute.welfare);

    long total = 0;
    Rational welfare = 0;
    for (int j = 0; j < inst.buyer_count(); ++j) {
        const int q = res.solution.quantities[static_cast<std::size_t>(j)];
        total += q;
        welfare += inst.buyers[static_cast<std::size_t>(j)].table()[static_cast<std::size_t>(q)];
    }

    Json doc;
    doc["kind"] = "multi-unit";
    doc["instance"] = js::to_json(inst);
    doc["initial"] = js::to_json(brute.alloc, inst.m);
    doc["welfare_bound"] = js::to_json(brute.welfare);
    doc["solution"] = js::to_json(res.solution);
    doc["trace"] = js::to_json(res.trace);
    doc["revenue"] = js::to_json(res.solution.price * Rational(total));
    doc["welfare"] = js::to_json(welfare);
    doc["reports"] = detail::reports_to_json(reports);
    doc["all_pass"] = verify::all_pass(reports);
    return detail::finish(cfg, doc, reports);
}

// ---------------------------------------------------------------------------
// simulate: replay a solved document's prices under arrival orders
// ---------------------------------------------------------------------------

namespace detail {

// Pull (prices, caps) out of any result document. Single-price quantity
// solutions expand to a uniform price vector capped by the stock.
inline std::pair<Prices, std::vector<int>> priced_offer(const Json& doc,
                                                        const Instance& inst) {
    require(doc.contains("solution"), ErrorKind::Input,
            "simulate needs a result document with a solution");
    const Json& sol = doc.at("solution");
    if (sol.contains("prices")) {
        const PricingSolution s = js::solution_from_json(sol, inst.m);
        return {s.prices, s.caps};
    }
    if (sol.contains("price")) {
        const MultiUnitSolution s = js::multiunit_solution_from_json(sol);
        Prices p(static_cast<std::size_t>(inst.m), s.price);
        return {std::move(p), inst.supply};
    }
    fail(ErrorKind::Input, "the solution carries neither prices nor a single price");
}

inline Json run_to_json(const Instance& inst, const Prices& p, const ArrivalOrder& order,
                        const Allocation& sold) {
    Json j;
    j["order"] = order;
    j["allocation"] = js::to_json(sold, inst.m);
    j["revenue"] = js::to_json(market::revenue(p, sold));
    j["welfare"] = js::to_json(market::social_welfare(inst, sold));
    return j;
}

} // namespace detail

inline int cmd_simulate(const RunConfig& cfg) {
    const Json doc = detail::load_document(cfg);
    require(doc.contains("instance"), ErrorKind::Input,
            "simulate needs a result document with an embedded instance");
    const Instance inst = js::instance_from_json(doc.at("instance"));
    detail::enforce_caps(cfg, inst);
    const auto [prices, caps] = detail::priced_offer(doc, inst);
    const int n = inst.buyer_count();

    Json out;
    out["kind"] = "simulation";
    out["instance"] = js::to_json(inst);
    out["prices"] = js::to_json(prices);
    out["caps"] = caps;
    out["arrival"] = cfg.arrival;
    Json runs = Json::array();

    if (cfg.arrival == "adversarial" || cfg.arrival == "fixed") {
        std::vector<ArrivalOrder> pi_set;
        if (!cfg.orders_file.empty())
            pi_set = detail::load_orders_file(cfg.orders_file).orders;
        if (cfg.arrival == "fixed") {
            if (pi_set.empty()) {
                ArrivalOrder identity(static_cast<std::size_t>(n));
                for (int j = 0; j < n; ++j) identity[static_cast<std::size_t>(j)] = j;
                pi_set.push_back(std::move(identity));
            }
            require(pi_set.size() == 1, ErrorKind::Input,
                    "fixed arrival requires exactly one order");
        } else if (pi_set.empty()) {
            pi_set = mech::all_orders(n, cfg.max_buyers);
        }
        for (const auto& order : pi_set)
            runs.push_back(detail::run_to_json(
                inst, prices, order, mech::sequential_run(inst, prices, caps, order)));
        const auto worst = mech::worst_order_outcome(inst, prices, caps, pi_set);
        Json w;
        w["order"] = worst.order;
        w["revenue"] = js::to_json(worst.revenue);
        out["worst"] = std::move(w);
    } else if (cfg.arrival == "random") {
        mech::OrderSampler sampler = mech::OrderSampler::uniform();
        if (!cfg.orders_file.empty()) {
            const auto loaded = detail::load_orders_file(cfg.orders_file);
            require(loaded.has_sampler, ErrorKind::Input,
                    "random arrival needs a distribution object in the orders file");
            sampler = loaded.sampler;
        }
        const int draws =
            cfg.samples >= 1 ? cfg.samples : halving::default_sample_count(inst);
        Rng rng(cfg.seed);
        Rational mean = 0;
        Rational min_rev = 0;
        bool first = true;
        for (int t = 0; t < draws; ++t) {
            const ArrivalOrder order = mech::sample_order(sampler, n, rng);
            const Allocation sold = mech::sequential_run(inst, prices, caps, order);
            const Rational rev = market::revenue(prices, sold);
            mean += rev;
            if (first || rev < min_rev) min_rev = rev;
            first = false;
            runs.push_back(detail::run_to_json(inst, prices, order, sold));
        }
        mean /= draws;
        out["mean_revenue"] = js::to_json(mean);
        out["min_revenue"] = js::to_json(min_rev);
        out["samples"] = draws;
        out["seed"] = cfg.seed;
    } else {
        fail(ErrorKind::Input, "unknown arrival mode: " + cfg.arrival);
    }

    out["runs"] = std::move(runs);
    detail::write_text(cfg, js::serialize(out));
    return kExitOk;
}

// ---------------------------------------------------------------------------
// verify: re-check a result document
// ---------------------------------------------------------------------------

inline int cmd_verify(const RunConfig& cfg) {
    const Json doc = detail::load_document(cfg);
    require(doc.is_object() && doc.contains("kind"), ErrorKind::Input,
            "verify needs a kind-tagged result document");
    const std::string kind = doc.at("kind").get<std::string>();
    const Instance inst = js::instance_from_json(doc.at("instance"));
    detail::enforce_caps(cfg, inst);

    std::vector<verify::CheckReport> reports;
    if (kind == "xos-core") {
        const Allocation initial = js::allocation_from_json(doc.at("initial"), inst.m);
        const auto trace = js::core_trace_from_json(doc.at("trace"), inst.m);
        reports = verify::verify_core_bundle(inst, initial, trace);
    } else if (kind == "price-doubling") {
        const auto trace = js::reduction_trace_from_json(doc.at("trace"), inst.m);
        const Rational alpha = js::rational_from_json(doc.at("black_box_alpha"));
        const Rational opt = verify::brute_optimal_welfare(inst).welfare;
        reports = verify::verify_reduction_bundle(inst, trace, alpha, opt);
    } else if (kind == "multi-unit") {
        const Allocation initial = js::allocation_from_json(doc.at("initial"), inst.m);
        MultiUnitResult result;
        result.solution = js::multiunit_solution_from_json(doc.at("solution"));
        result.trace = js::multiunit_trace_from_json(doc.at("trace"));
        reports = verify::verify_multiunit_bundle(inst, result,
                                                  market::social_welfare(inst, initial));
    } else {
        fail(ErrorKind::Input, "verify cannot handle document kind: " + kind);
    }

    Json out;
    out["kind"] = "verification";
    out["document_kind"] = kind;
    out["reports"] = detail::reports_to_json(reports);
    out["all_pass"] = verify::all_pass(reports);
    return detail::finish(cfg, out, reports);
}

// ---------------------------------------------------------------------------
// bench: CSV over a batch of instances
// ---------------------------------------------------------------------------

namespace detail {

struct BenchRow {
    Rational bound;   // welfare of the allocation the guarantee is stated against
    Rational revenue;
    Rational welfare; // welfare of what actually sold
    std::string tag;
    bool pass = true;
};

inline BenchRow bench_one(const Instance& inst) {
    const bool quantity_market = [&] {
        for (const auto& v : inst.buyers)
            if (v.cls() != ValuationClass::MultiUnit) return false;
        return inst.m >= 2;
    }();

    BenchRow row;
    if (quantity_market) {
        const auto brute = verify::brute_optimal_welfare(inst);
        const auto res = multiunit::solve_multiunit(inst, brute.alloc);
        long total = 0;
        Rational welfare = 0;
        for (int j = 0; j < inst.buyer_count(); ++j) {
            const int q = res.solution.quantities[static_cast<std::size_t>(j)];
            total += q;
            welfare +=
                inst.buyers[static_cast<std::size_t>(j)].table()[static_cast<std::size_t>(q)];
        }
        row.bound = brute.welfare;
        row.revenue = res.solution.price * Rational(total);
        row.welfare = welfare;
        row.tag = multiunit::case_name(res.solution.mode);
        row.pass = verify::all_pass(verify::verify_multiunit_bundle(inst, res, brute.welfare));
        return row;
    }

    const auto res = halving::solve_xos(inst, halving::GammaStrategy::adversarial());
    row.bound = market::social_welfare(inst, res.initial);
    row.revenue = market::revenue(res.solution.prices, res.solution.alloc);
    row.welfare = market::social_welfare(inst, res.solution.alloc);
    const auto& kept = res.trace.rounds[static_cast<std::size_t>(res.trace.selected)];
    row.tag = halving::branch_name(kept.branch);
    row.pass = verify::all_pass(verify::verify_core_bundle(inst, res.initial, res.trace));
    return row;
}

} // namespace detail

inline int cmd_bench(const RunConfig& cfg) {
    const Json doc = detail::load_document(cfg);
    std::vector<Instance> batch;
    if (doc.is_array()) {
        for (const auto& e : doc) batch.push_back(js::instance_from_json(e));
    } else if (doc.is_object() && doc.contains("spec")) {
        generators::GenSpec spec = js::gen_spec_from_json(doc.at("spec"));
        const int count = doc.value("count", 1);
        require(count >= 1, ErrorKind::Input, "batch count must be at least 1");
        if (cfg.seed_set) spec.seed = cfg.seed;
        const std::uint64_t base = spec.seed;
        for (int i = 0; i < count; ++i) {
            spec.seed = base + static_cast<std::uint64_t>(i);
            batch.push_back(generators::generate(spec));
        }
    } else {
        fail(ErrorKind::Input,
             "bench input must be an instance array or {\"spec\":..., \"count\":...}");
    }

    std::ostringstream csv;
    csv << "instance,welfare_bound,revenue,welfare,ratio,tag\n";
    bool all_pass = true;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        detail::enforce_caps(cfg, batch[i]);
        const auto row = detail::bench_one(batch[i]);
        const std::string ratio =
            sgn(row.revenue) > 0 ? detail::rational_text(row.bound / row.revenue) : "inf";
        csv << i << ',' << detail::rational_text(row.bound) << ','
            << detail::rational_text(row.revenue) << ',' << detail::rational_text(row.welfare)
            << ',' << ratio << ',' << row.tag << '\n';
        if (!row.pass) {
            all_pass = false;
            std::cerr << "check failed on instance " << i << "\n";
        }
    }
    detail::write_text(cfg, csv.str());
    return all_pass ? kExitOk : kExitCheckFailure;
}

// ---------------------------------------------------------------------------
// Argument parsing and dispatch
// ---------------------------------------------------------------------------

namespace detail {

inline void add_io_flags(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--instance", cfg.instance_path, "input file (JSON)")->required();
    sub->add_option("--out", cfg.out_path, "output file (default: stdout)");
    sub->add_option("--max-goods", cfg.max_goods, "reject instances with more goods");
    sub->add_option("--max-buyers", cfg.max_buyers, "reject instances with more buyers");
}

inline void add_seed_flag(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--seed", cfg.seed, "random seed")
        ->each([&cfg](const std::string&) { cfg.seed_set = true; });
}

inline void add_arrival_flags(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--arrival", cfg.arrival, "adversarial | random | fixed")
        ->check(CLI::IsMember({"adversarial", "random", "fixed"}));
    sub->add_option("--orders-file", cfg.orders_file,
                    "order list (JSON array) or distribution object");
    sub->add_option("--samples", cfg.samples, "draw count for random arrival");
    add_seed_flag(sub, cfg);
}

} // namespace detail

inline int dispatch(const RunConfig& cfg) {
    if (cfg.subcommand == "gen") return cmd_gen(cfg);
    if (cfg.subcommand == "solve-xos") return cmd_solve_xos(cfg);
    if (cfg.subcommand == "solve-multiunit") return cmd_solve_multiunit(cfg);
    if (cfg.subcommand == "price-double") return cmd_price_double(cfg);
    if (cfg.subcommand == "simulate") return cmd_simulate(cfg);
    if (cfg.subcommand == "verify") return cmd_verify(cfg);
    if (cfg.subcommand == "bench") return cmd_bench(cfg);
    fail(ErrorKind::Internal, "unrouted subcommand: " + cfg.subcommand);
}

inline int run(int argc, const char* const* argv) {
    RunConfig cfg;
    CLI::App app{"exact static item-pricing toolkit: solvers, simulators, checkers"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("gen", "generate an instance from a spec file");
    detail::add_io_flags(gen, cfg);
    detail::add_seed_flag(gen, cfg);

    auto* sx = app.add_subcommand("solve-xos", "price a market of xos-representable buyers");
    detail::add_io_flags(sx, cfg);
    detail::add_arrival_flags(sx, cfg);
    sx->add_option("--gamma", cfg.gamma, "override the round count");
    sx->add_option("--epsilon", cfg.epsilon, "tail price offset scale (rational)");
    sx->add_option("--initial", cfg.initial, "starting allocation: brute | greedy")
        ->check(CLI::IsMember({"brute", "greedy"}));

    auto* sm = app.add_subcommand("solve-multiunit",
                                  "single price for a market of interchangeable units");
    detail::add_io_flags(sm, cfg);
    sm->add_option("--gamma", cfg.gamma, "override the round count");
    sm->add_option("--epsilon", cfg.epsilon, "tail price offset scale (rational)");

    auto* pd = app.add_subcommand("price-double",
                                  "welfare-to-revenue reduction for unit-demand buyers");
    detail::add_io_flags(pd, cfg);
    pd->add_option("--black-box", cfg.black_box,
                   "welfare subroutine: unit_demand_walrasian | brute_walrasian");

    auto* si = app.add_subcommand("simulate", "replay a result document's prices");
    detail::add_io_flags(si, cfg);
    detail::add_arrival_flags(si, cfg);

    auto* vf = app.add_subcommand("verify", "re-check a result document");
    detail::add_io_flags(vf, cfg);

    auto* be = app.add_subcommand("bench", "CSV ratios over an instance batch");
    detail::add_io_flags(be, cfg);
    detail::add_seed_flag(be, cfg);

    try {
        app.parse(argc, const_cast<char**>(argv));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInputError;
    }

    cfg.subcommand = app.get_subcommands().front()->get_name();
    try {
        return dispatch(cfg);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.kind()) {
        case ErrorKind::CapExceeded:
            return kExitCapExceeded;
        case ErrorKind::Input:
        case ErrorKind::Unsupported:
        case ErrorKind::Degenerate:
        case ErrorKind::Assumption:
            return kExitInputError;
        default:
            return kExitCheckFailure;
        }
    } catch (const jsonio::Json::exception& e) {
        std::cerr << "error: malformed document: " << e.what() << "\n";
        return kExitInputError;
    }
}

} // namespace pricing::cli

// Walkthrough of the three solvers on small in-memory markets, printing each
// round and the exact certificate that the verification bundle checks.

#include <iostream>
#include <string>

#include "pricing/item_halving.hpp"
#include "pricing/market.hpp"
#include "pricing/multiunit.hpp"
#include "pricing/price_doubling.hpp"
#include "pricing/verify.hpp"

using namespace pricing;
namespace mkt = pricing::market;
namespace hv = pricing::halving;
namespace db = pricing::doubling;
namespace mu = pricing::multiunit;
namespace vf = pricing::verify;

namespace {

std::string rat_text(const Rational& x) {
    if (x.get_den() == 1) return x.get_num().get_str();
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

std::string goods_text(GoodSet t) {
    if (t == 0) return "{}";
    std::string s = "{";
    bool first = true;
    for (int i : set_elements(t)) {
        if (!first) s += ",";
        s += std::to_string(i);
        first = false;
    }
    return s + "}";
}

void print_reports(const std::vector<vf::CheckReport>& reports) {
    for (const auto& r : reports)
        std::cout << "    [" << (r.pass ? "ok" : "VIOLATED") << "] " << r.claim << ": "
                  << r.detail << "\n";
}

void round_based_pricing() {
    std::cout << "== Round-based pricing, mixed xos-representable buyers ==\n";
    Instance inst;
    inst.m = 3;
    inst.supply = {1, 1, 2};
    inst.buyers.push_back(Valuation::additive({Rational(8), Rational(0), Rational(3)}));
    inst.buyers.push_back(Valuation::unit_demand({Rational(6), Rational(7), Rational(2)}));
    inst.buyers.push_back(Valuation::xos(
        {{Rational(5), Rational(1), Rational(0)}, {Rational(0), Rational(4), Rational(4)}}));
    std::cout << "  3 goods (supply 1,1,2), 3 buyers (additive, unit-demand, xos)\n";

    const auto res = hv::solve_xos(inst, hv::GammaStrategy::adversarial());
    std::cout << "  starting allocation welfare: "
              << rat_text(mkt::social_welfare(inst, res.initial)) << ", rounds: "
              << res.trace.gamma << "\n";
    for (std::size_t t = 0; t < res.trace.rounds.size(); ++t) {
        const auto& r = res.trace.rounds[t];
        std::cout << "  round " << t << " [" << hv::branch_name(r.branch) << "] revenue "
                  << rat_text(mkt::revenue(r.prices, r.sold)) << ", sold";
        for (std::size_t j = 0; j < r.sold.bundles.size(); ++j)
            std::cout << " buyer" << j << "=" << goods_text(r.sold.bundles[j]);
        std::cout << "\n";
    }
    std::cout << "  kept round " << res.trace.selected << " with revenue "
              << rat_text(mkt::revenue(res.solution.prices, res.solution.alloc)) << "\n";
    print_reports(vf::verify_core_bundle(inst, res.initial, res.trace));
}

void doubling_reduction() {
    std::cout << "\n== Reserve-doubling reduction, unit-demand buyers ==\n";
    Instance inst;
    inst.m = 2;
    inst.supply = {1, 1};
    inst.buyers.push_back(Valuation::unit_demand({Rational(10), Rational(0)}));
    inst.buyers.push_back(Valuation::unit_demand({Rational(0), Rational(6)}));
    inst.buyers.push_back(Valuation::unit_demand({Rational(4), Rational(4)}));
    std::cout << "  2 goods, 3 unit-demand buyers\n";

    const auto res = db::price_doubling_run(inst, db::walrasian_box());
    for (std::size_t s = 0; s < res.trace.steps.size(); ++s) {
        const auto& step = res.trace.steps[s];
        std::cout << "  step " << s << " reserve " << rat_text(step.reserve) << " revenue "
                  << rat_text(mkt::revenue(step.prices, step.stripped)) << "\n";
    }
    std::cout << "  kept step " << res.trace.selected << " with revenue "
              << rat_text(mkt::revenue(res.solution.prices, res.solution.alloc)) << "\n";
    const Rational opt = vf::brute_optimal_welfare(inst).welfare;
    print_reports(vf::verify_reduction_bundle(inst, res.trace, Rational(1), opt));
}

void single_price_market() {
    std::cout << "\n== Single price for interchangeable units ==\n";
    Instance inst;
    inst.m = 4;
    inst.supply = {1, 1, 1, 1};
    inst.buyers.push_back(Valuation::multi_unit(
        {Rational(0), Rational(10), Rational(10), Rational(10), Rational(10)}));
    inst.buyers.push_back(Valuation::multi_unit(
        {Rational(0), Rational(1), Rational(2), Rational(2), Rational(2)}));
    std::cout << "  4 units, 2 buyers with per-quantity value tables\n";

    const auto brute = vf::brute_optimal_welfare(inst);
    const auto res = mu::solve_multiunit(inst, brute.alloc);
    std::cout << "  exhaustive optimum welfare: " << rat_text(brute.welfare) << "\n";
    std::cout << "  outcome [" << mu::case_name(res.solution.mode) << "] price "
              << rat_text(res.solution.price) << ", quantities";
    for (int q : res.solution.quantities) std::cout << " " << q;
    std::cout << "\n";
    print_reports(vf::verify_multiunit_bundle(inst, res, brute.welfare));
}

} // namespace

int main() {
    round_based_pricing();
    doubling_reduction();
    single_price_market();
    return 0;
}

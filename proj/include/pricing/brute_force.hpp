#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "pricing/errors.hpp"
#include "pricing/market.hpp"
#include "pricing/rational.hpp"
#include "pricing/valuations.hpp"

namespace pricing::verify {

// Size limits for the exhaustive welfare search. The general search walks
// every (buyer, remaining-supply, bundle) combination, so it is only meant
// for instances small enough to certify by enumeration.
struct BruteCaps {
    int max_goods = 6;
    int max_buyers = 5;
    int max_copies = 3;
};

struct BruteResult {
    Allocation alloc;
    Rational welfare = 0;
};

namespace detail {

// Quantity-indexed search used when every buyer's value depends only on how
// many distinct goods she holds and every good has exactly one copy. Buyers
// then only compete for the total number of units, so a table over
// (buyer, units used) is exact. Ties prefer fewer units for the earlier buyer.
inline BruteResult brute_all_quantity(const Instance& inst) {
    const int n = static_cast<int>(inst.buyers.size());
    const int m = inst.m;
    // best[j][u] = max welfare of buyers j.. with u units still available.
    std::vector<std::vector<Rational>> best(n + 1, std::vector<Rational>(m + 1, Rational(0)));
    for (int j = n - 1; j >= 0; --j) {
        for (int u = 0; u <= m; ++u) {
            Rational cur = best[j + 1][u]; // q = 0
            for (int q = 1; q <= u; ++q) {
                Rational cand = inst.buyers[static_cast<std::size_t>(j)]
                                    .table()[static_cast<std::size_t>(q)] +
                                best[j + 1][u - q];
                if (cand > cur) cur = cand;
            }
            best[j][u] = cur;
        }
    }
    BruteResult out;
    out.alloc = Allocation::none(n);
    out.welfare = best[0][m];
    int next_good = 0;
    int units = m;
    for (int j = 0; j < n; ++j) {
        int pick = 0;
        for (int q = 0; q <= units; ++q) {
            Rational cand = inst.buyers[static_cast<std::size_t>(j)]
                                .table()[static_cast<std::size_t>(q)] +
                            best[j + 1][units - q];
            if (cand == best[j][units]) {
                pick = q;
                break;
            }
        }
        GoodSet bundle = 0;
        for (int c = 0; c < pick; ++c) bundle |= good_bit(next_good++);
        out.alloc.bundles[static_cast<std::size_t>(j)] = bundle;
        units -= pick;
    }
    return out;
}

} // namespace detail

// Exhaustive welfare-maximizing allocation. Deterministic tie rule: buyers
// are resolved in index order, and each takes the smallest optimal bundle
// (fewest goods, then lexicographically smallest good ids).
inline BruteResult brute_optimal_welfare(const Instance& inst, const BruteCaps& caps = {}) {
    inst.validate();
    const int n = static_cast<int>(inst.buyers.size());
    const int m = inst.m;

    bool all_quantity = true;
    bool unit_supply = true;
    for (const auto& b : inst.buyers) {
        if (b.cls() != ValuationClass::MultiUnit) all_quantity = false;
    }
    for (int k : inst.supply) {
        if (k != 1) unit_supply = false;
    }
    if (all_quantity && unit_supply) return detail::brute_all_quantity(inst);

    require(m <= caps.max_goods, ErrorKind::CapExceeded, "brute search limited to " +
                                                             std::to_string(caps.max_goods) +
                                                             " goods");
    require(n <= caps.max_buyers, ErrorKind::CapExceeded, "brute search limited to " +
                                                              std::to_string(caps.max_buyers) +
                                                              " buyers");
    std::vector<std::uint64_t> stride(static_cast<std::size_t>(m), 1);
    std::uint64_t states = 1;
    for (int i = 0; i < m; ++i) {
        require(inst.supply[static_cast<std::size_t>(i)] <= caps.max_copies,
                ErrorKind::CapExceeded,
                "brute search limited to " + std::to_string(caps.max_copies) +
                    " copies per good");
        stride[static_cast<std::size_t>(i)] = states;
        states *= static_cast<std::uint64_t>(inst.supply[static_cast<std::size_t>(i)] + 1);
    }

    auto remaining = [&](std::uint64_t state, int good) -> int {
        return static_cast<int>((state / stride[static_cast<std::size_t>(good)]) %
                                static_cast<std::uint64_t>(
                                    inst.supply[static_cast<std::size_t>(good)] + 1));
    };
    auto avail_mask = [&](std::uint64_t state) -> GoodSet {
        GoodSet mask = 0;
        for (int i = 0; i < m; ++i) {
            if (remaining(state, i) > 0) mask |= good_bit(i);
        }
        return mask;
    };
    auto consume = [&](std::uint64_t state, GoodSet bundle) -> std::uint64_t {
        for (int i : set_elements(bundle)) state -= stride[static_cast<std::size_t>(i)];
        return state;
    };

    // best[j][state] = max welfare of buyers j.. given the remaining supply.
    std::vector<std::vector<Rational>> best(
        static_cast<std::size_t>(n) + 1,
        std::vector<Rational>(static_cast<std::size_t>(states), Rational(0)));
    for (int j = n - 1; j >= 0; --j) {
        for (std::uint64_t s = 0; s < states; ++s) {
            const GoodSet avail = avail_mask(s);
            Rational cur = best[static_cast<std::size_t>(j) + 1][s]; // empty bundle
            GoodSet t = avail;
            while (t != 0) {
                Rational cand = inst.buyers[static_cast<std::size_t>(j)].value(t) +
                                best[static_cast<std::size_t>(j) + 1][consume(s, t)];
                if (cand > cur) cur = cand;
                t = (t - 1) & avail;
            }
            best[static_cast<std::size_t>(j)][s] = cur;
        }
    }

    BruteResult out;
    out.alloc = Allocation::none(n);
    std::uint64_t state = states - 1; // full supply: every digit at its maximum
    out.welfare = best[0][state];
    for (int j = 0; j < n; ++j) {
        const Rational target = best[static_cast<std::size_t>(j)][state];
        const GoodSet avail = avail_mask(state);
        GoodSet pick = 0;
        bool have = true; // empty bundle always matches when value 0 + rest == target
        have = (best[static_cast<std::size_t>(j) + 1][state] == target);
        GoodSet t = avail;
        while (t != 0) {
            Rational cand = inst.buyers[static_cast<std::size_t>(j)].value(t) +
                            best[static_cast<std::size_t>(j) + 1][consume(state, t)];
            if (cand == target) {
                const bool better =
                    !have || set_size(t) < set_size(pick) ||
                    (set_size(t) == set_size(pick) && lex_set_less(t, pick));
                if (better) {
                    pick = t;
                    have = true;
                }
            }
            t = (t - 1) & avail;
        }
        if (!have) fail(ErrorKind::Internal, "welfare search reconstruction out of sync");
        out.alloc.bundles[static_cast<std::size_t>(j)] = pick;
        state = consume(state, pick);
    }
    return out;
}

} // namespace pricing::verify

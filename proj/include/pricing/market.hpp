#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "pricing/errors.hpp"
#include "pricing/rational.hpp"
#include "pricing/valuations.hpp"

namespace pricing::market {

// A market: m goods with k_i copies each and N buyers.
struct Instance {
    int m = 0;
    std::vector<int> supply;          // k_i >= 1 per good
    std::vector<Valuation> buyers;

    int buyer_count() const { return static_cast<int>(buyers.size()); }

    long total_supply() const { // sum of k_i, i.e. m times the average supply
        long total = 0;
        for (int k : supply) total += k;
        return total;
    }

    Rational avg_supply() const { return rat(total_supply(), m); }

    int max_supply() const { return *std::max_element(supply.begin(), supply.end()); }

    GoodSet all_goods() const { return (GoodSet{1} << m) - 1; }

    void validate() const {
        require(m >= 1, ErrorKind::Input, "instance needs at least one good");
        require(m <= kMaxGoods, ErrorKind::CapExceeded, "instance exceeds the good-count limit");
        require(static_cast<int>(supply.size()) == m, ErrorKind::Input,
                "supply vector length must equal the good count");
        for (int k : supply)
            require(k >= 1, ErrorKind::Input, "every good needs at least one copy");
        require(!buyers.empty(), ErrorKind::Input, "instance needs at least one buyer");
        for (std::size_t j = 0; j < buyers.size(); ++j) {
            require(buyers[j].goods() == m, ErrorKind::Input,
                    "buyer " + std::to_string(j) + " disagrees on the good count");
        }
    }
};

// Per-buyer bundles; each buyer holds at most one copy of each good.
struct Allocation {
    std::vector<GoodSet> bundles;

    static Allocation none(int buyer_count) {
        Allocation a;
        a.bundles.assign(static_cast<std::size_t>(buyer_count), 0);
        return a;
    }

    bool operator==(const Allocation&) const = default;
};

// Number of copies of good i handed out.
inline int copies_allocated(const Allocation& a, int i) {
    int count = 0;
    for (GoodSet b : a.bundles) count += set_contains(b, i) ? 1 : 0;
    return count;
}

// The buyers holding good i, ascending.
inline std::vector<int> holders(const Allocation& a, int i) {
    std::vector<int> out;
    for (int j = 0; j < static_cast<int>(a.bundles.size()); ++j) {
        if (set_contains(a.bundles[static_cast<std::size_t>(j)], i)) out.push_back(j);
    }
    return out;
}

// Total number of items allocated.
inline long theta(const Allocation& a) {
    long total = 0;
    for (GoodSet b : a.bundles) total += set_size(b);
    return total;
}

inline bool feasible(const Instance& inst, const Allocation& a) {
    for (int i = 0; i < inst.m; ++i) {
        if (copies_allocated(a, i) > inst.supply[static_cast<std::size_t>(i)]) return false;
    }
    return true;
}

inline Rational social_welfare(const Instance& inst, const Allocation& a) {
    require(a.bundles.size() == inst.buyers.size(), ErrorKind::Input,
            "allocation and instance disagree on the buyer count");
    Rational total = 0;
    for (std::size_t j = 0; j < a.bundles.size(); ++j) {
        total += inst.buyers[j].value(a.bundles[j]);
    }
    return total;
}

inline Rational revenue(const Prices& p, const Allocation& a) {
    Rational total = 0;
    for (GoodSet b : a.bundles) {
        GoodSet s = b;
        for (int i = 0; s != 0; ++i, s >>= 1) {
            if (s & 1u) {
                require(p[static_cast<std::size_t>(i)].has_value(), ErrorKind::Inconsistent,
                        "good " + std::to_string(i) + " was allocated but is unavailable");
                total += *p[static_cast<std::size_t>(i)];
            }
        }
    }
    return total;
}

// Aggregate buyer utility; SW = revenue + surplus exactly.
inline Rational surplus(const Instance& inst, const Prices& p, const Allocation& a) {
    return social_welfare(inst, a) - revenue(p, a);
}

// U_i: the total value holders derive from good i, measured along each
// holder's witness clause for her own bundle.
inline Rational per_good_utility(const Instance& inst, const Allocation& a, int i) {
    Rational total = 0;
    for (int j : holders(a, i)) {
        const Valuation& v = inst.buyers[static_cast<std::size_t>(j)];
        const int w = valuations::xos_witness(v, a.bundles[static_cast<std::size_t>(j)]);
        total += v.clause_entry(w, i);
    }
    return total;
}

// Top_i(r, A): the r holders of good i with the highest witness entries for i;
// ties by ascending buyer index.
inline std::vector<int> top_buyers(const Instance& inst, const Allocation& a, int i, int r) {
    const std::vector<int> own = holders(a, i);
    require(r >= 0 && r <= static_cast<int>(own.size()), ErrorKind::Input,
            "top_buyers count outside [0, holders]");
    std::vector<std::pair<Rational, int>> ranked; // (witness entry, buyer)
    for (int j : own) {
        const Valuation& v = inst.buyers[static_cast<std::size_t>(j)];
        const int w = valuations::xos_witness(v, a.bundles[static_cast<std::size_t>(j)]);
        ranked.emplace_back(v.clause_entry(w, i), j);
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& x, const auto& y) { return x.first > y.first; });
    std::vector<int> out;
    for (int t = 0; t < r; ++t) out.push_back(ranked[static_cast<std::size_t>(t)].second);
    std::sort(out.begin(), out.end());
    return out;
}

// A (p, q, S) posted-pricing outcome.
struct PricingSolution {
    Prices prices;
    std::vector<int> caps; // q_i, between 0 and k_i
    Allocation alloc;
};

} // namespace pricing::market

namespace pricing {
using market::Allocation;
using market::Instance;
using market::PricingSolution;
} // namespace pricing

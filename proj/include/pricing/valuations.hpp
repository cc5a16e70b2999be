#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "pricing/errors.hpp"
#include "pricing/rational.hpp"

namespace pricing {

// A bundle of distinct goods as a bitmask over good ids [0, m).
using GoodSet = std::uint32_t;

// Hard representation limit for GoodSet; the exhaustive demand path applies
// its own (configurable) cap below this.
inline constexpr int kMaxGoods = 31;
inline constexpr int kDefaultDemandCap = 22;

inline constexpr GoodSet good_bit(int i) { return GoodSet{1} << i; }
inline constexpr bool set_contains(GoodSet s, int i) { return (s >> i) & 1u; }
inline constexpr int set_size(GoodSet s) { return std::popcount(s); }

inline std::vector<int> set_elements(GoodSet s) {
    std::vector<int> out;
    for (int i = 0; s != 0; ++i, s >>= 1) {
        if (s & 1u) out.push_back(i);
    }
    return out;
}

// Orders sets by their ascending id sequences (a strict prefix sorts first).
// This is NOT the numeric order of the masks: {0,2} precedes {1}.
inline bool lex_set_less(GoodSet a, GoodSet b) {
    if (a == b) return false;
    const GoodSet diff = a ^ b;
    const GoodSet low = diff & (~diff + 1u);
    const GoodSet above = ~(low | (low - 1u));
    if (a & low) return (b & above) != 0;
    return (a & above) == 0;
}

namespace valuations {

// Item prices; a disengaged entry is the "unavailable" sentinel and must never
// enter arithmetic.
using Prices = std::vector<std::optional<Rational>>;

enum class ValuationClass { Additive, UnitDemand, Xos, MultiUnit, SingleMinded };

inline const char* class_name(ValuationClass c) {
    switch (c) {
        case ValuationClass::Additive: return "additive";
        case ValuationClass::UnitDemand: return "unit_demand";
        case ValuationClass::Xos: return "xos";
        case ValuationClass::MultiUnit: return "multi_unit";
        case ValuationClass::SingleMinded: return "single_minded";
    }
    return "?";
}

struct AdditiveClause {
    std::vector<Rational> values; // one non-negative entry per good

    Rational sum(GoodSet t) const {
        Rational total = 0;
        for (int i = 0; t != 0; ++i, t >>= 1) {
            if (t & 1u) total += values[static_cast<std::size_t>(i)];
        }
        return total;
    }
};

// Tagged union over the five supported classes. Immutable after construction;
// all oracle calls are const and side-effect free.
class Valuation {
public:
    static Valuation additive(std::vector<Rational> values) {
        Valuation v(ValuationClass::Additive, static_cast<int>(values.size()));
        check_non_negative(values);
        v.table_ = std::move(values);
        return v;
    }

    static Valuation unit_demand(std::vector<Rational> values) {
        Valuation v(ValuationClass::UnitDemand, static_cast<int>(values.size()));
        check_non_negative(values);
        v.table_ = std::move(values);
        return v;
    }

    static Valuation xos(std::vector<std::vector<Rational>> clauses) {
        require(!clauses.empty(), ErrorKind::Input, "xos valuation needs at least one clause");
        Valuation v(ValuationClass::Xos, static_cast<int>(clauses[0].size()));
        for (auto& c : clauses) {
            require(static_cast<int>(c.size()) == v.m_, ErrorKind::Input,
                    "xos clauses must agree on the number of goods");
            check_non_negative(c);
            v.clauses_.push_back(AdditiveClause{std::move(c)});
        }
        return v;
    }

    // values = w_0..w_m indexed by quantity; requires w_0 = 0 and monotone.
    static Valuation multi_unit(std::vector<Rational> values) {
        require(!values.empty(), ErrorKind::Input, "multi_unit table must include w_0");
        Valuation v(ValuationClass::MultiUnit, static_cast<int>(values.size()) - 1);
        require(sgn(values[0]) == 0, ErrorKind::Input, "multi_unit table must start at w_0 = 0");
        for (std::size_t q = 1; q < values.size(); ++q) {
            require(values[q] >= values[q - 1], ErrorKind::Input,
                    "multi_unit table must be monotone");
        }
        v.table_ = std::move(values);
        return v;
    }

    static Valuation single_minded(GoodSet demand_set, Rational value, int goods) {
        Valuation v(ValuationClass::SingleMinded, goods);
        require(sgn(value) >= 0, ErrorKind::Input, "single_minded value must be non-negative");
        require(demand_set < (GoodSet{1} << goods), ErrorKind::Input,
                "single_minded set outside the good range");
        v.bundle_ = demand_set;
        v.bundle_value_ = std::move(value);
        return v;
    }

    ValuationClass cls() const { return cls_; }
    int goods() const { return m_; }

    bool xos_representable() const {
        return cls_ == ValuationClass::Additive || cls_ == ValuationClass::UnitDemand ||
               cls_ == ValuationClass::Xos;
    }

    // Value oracle: v(T). Total function, exact per class definition.
    Rational value(GoodSet t) const {
        switch (cls_) {
            case ValuationClass::Additive: {
                Rational total = 0;
                GoodSet s = t;
                for (int i = 0; s != 0; ++i, s >>= 1) {
                    if (s & 1u) total += table_[static_cast<std::size_t>(i)];
                }
                return total;
            }
            case ValuationClass::UnitDemand: {
                Rational best = 0;
                GoodSet s = t;
                for (int i = 0; s != 0; ++i, s >>= 1) {
                    if ((s & 1u) && table_[static_cast<std::size_t>(i)] > best)
                        best = table_[static_cast<std::size_t>(i)];
                }
                return best;
            }
            case ValuationClass::Xos: {
                Rational best = clauses_[0].sum(t);
                for (std::size_t l = 1; l < clauses_.size(); ++l) {
                    Rational s = clauses_[l].sum(t);
                    if (s > best) best = std::move(s);
                }
                return best;
            }
            case ValuationClass::MultiUnit:
                return table_[static_cast<std::size_t>(set_size(t))];
            case ValuationClass::SingleMinded:
                return (t & bundle_) == bundle_ ? bundle_value_ : Rational(0);
        }
        fail(ErrorKind::Internal, "unreachable valuation class");
    }

    // The additive-clause view shared by Additive, UnitDemand and Xos: an
    // Additive valuation is one clause, a UnitDemand valuation is one
    // single-good clause per good.
    int clause_count() const {
        switch (cls_) {
            case ValuationClass::Additive: return 1;
            case ValuationClass::UnitDemand: return m_;
            case ValuationClass::Xos: return static_cast<int>(clauses_.size());
            default:
                fail(ErrorKind::Unsupported,
                     std::string("no additive-clause view for class ") + class_name(cls_));
        }
    }

    Rational clause_entry(int l, int i) const {
        switch (cls_) {
            case ValuationClass::Additive: return table_[static_cast<std::size_t>(i)];
            case ValuationClass::UnitDemand:
                return l == i ? table_[static_cast<std::size_t>(i)] : Rational(0);
            case ValuationClass::Xos:
                return clauses_[static_cast<std::size_t>(l)].values[static_cast<std::size_t>(i)];
            default:
                fail(ErrorKind::Unsupported,
                     std::string("no additive-clause view for class ") + class_name(cls_));
        }
    }

    Rational clause_sum(int l, GoodSet t) const {
        Rational total = 0;
        for (int i = 0; t != 0; ++i, t >>= 1) {
            if (t & 1u) total += clause_entry(l, i);
        }
        return total;
    }

    const std::vector<Rational>& table() const { return table_; }
    const std::vector<AdditiveClause>& clauses() const { return clauses_; }
    GoodSet demand_set() const { return bundle_; }
    const Rational& bundle_value() const { return bundle_value_; }

private:
    Valuation(ValuationClass cls, int m) : cls_(cls), m_(m) {
        require(m >= 0 && m <= kMaxGoods, ErrorKind::CapExceeded,
                "good count outside the supported range");
    }

    static void check_non_negative(const std::vector<Rational>& values) {
        for (const auto& x : values) {
            require(sgn(x) >= 0, ErrorKind::Input, "valuation entries must be non-negative");
        }
    }

    ValuationClass cls_;
    int m_;
    std::vector<Rational> table_;          // Additive / UnitDemand / MultiUnit
    std::vector<AdditiveClause> clauses_;  // Xos
    GoodSet bundle_ = 0;                   // SingleMinded
    Rational bundle_value_ = 0;            // SingleMinded
};

// Witness oracle: smallest clause index l maximizing a_l(T), so that
// value(v, T) == clause_sum(witness, T) exactly.
inline int xos_witness(const Valuation& v, GoodSet t) {
    require(v.xos_representable(), ErrorKind::Unsupported,
            std::string("witness query on class ") + class_name(v.cls()));
    int best = 0;
    Rational best_sum = v.clause_sum(0, t);
    const int count = v.clause_count();
    for (int l = 1; l < count; ++l) {
        Rational s = v.clause_sum(l, t);
        if (s > best_sum) {
            best_sum = std::move(s);
            best = l;
        }
    }
    return best;
}

inline Rational price_sum(const Prices& p, GoodSet t) {
    Rational total = 0;
    for (int i = 0; t != 0; ++i, t >>= 1) {
        if (t & 1u) {
            const auto& pi = p[static_cast<std::size_t>(i)];
            require(pi.has_value(), ErrorKind::Inconsistent, "price of an unavailable good");
            total += *pi;
        }
    }
    return total;
}

namespace detail {

// Tie rule shared by every demand path: maximize utility, then minimize
// cardinality, then take the lexicographically smallest good-id set.
struct DemandChoice {
    Rational utility = 0;
    GoodSet set = 0;

    bool improves_over(const Rational& u, GoodSet s) const {
        if (u != utility) return u > utility;
        const int c = set_size(s), b = set_size(set);
        if (c != b) return c < b;
        return lex_set_less(s, set);
    }
};

// Generic exhaustive demand over subsets of `available`, for valuations with
// an additive-clause view. Incremental subset sums keep it near-linear in the
// number of subsets.
inline GoodSet exhaustive_demand(const Valuation& v, const Prices& p, GoodSet available,
                                 int demand_cap) {
    const std::vector<int> goods = set_elements(available);
    const int n = static_cast<int>(goods.size());
    require(n <= demand_cap, ErrorKind::CapExceeded,
            "exhaustive demand over more goods than the configured cap");
    const int clauses = v.clause_count();
    const std::size_t total = std::size_t{1} << n;

    // tbl[l][mask] = clause l's sum over the subset encoded by mask.
    std::vector<std::vector<Rational>> tbl(static_cast<std::size_t>(clauses));
    std::vector<Rational> cost(total);
    for (auto& row : tbl) row.assign(total, Rational(0));
    for (std::size_t mask = 1; mask < total; ++mask) {
        const std::size_t low = mask & (~mask + 1);
        const int idx = std::countr_zero(low);
        const std::size_t rest = mask ^ low;
        const int good = goods[static_cast<std::size_t>(idx)];
        for (int l = 0; l < clauses; ++l) {
            tbl[static_cast<std::size_t>(l)][mask] =
                tbl[static_cast<std::size_t>(l)][rest] + v.clause_entry(l, good);
        }
        cost[mask] = cost[rest] + *p[static_cast<std::size_t>(good)];
    }

    DemandChoice best; // the empty set at utility 0
    for (std::size_t mask = 1; mask < total; ++mask) {
        Rational val = tbl[0][mask];
        for (int l = 1; l < clauses; ++l) {
            if (tbl[static_cast<std::size_t>(l)][mask] > val)
                val = tbl[static_cast<std::size_t>(l)][mask];
        }
        Rational u = val - cost[mask];
        GoodSet s = 0;
        for (int idx = 0; idx < n; ++idx) {
            if ((mask >> idx) & 1u) s |= good_bit(goods[static_cast<std::size_t>(idx)]);
        }
        if (best.improves_over(u, s)) best = DemandChoice{std::move(u), s};
    }
    return best.set;
}

// Closed-form demand for a multi-unit valuation facing per-good prices: for
// each cardinality c the cheapest c-subset is optimal, and the lex-smallest
// such subset is built greedily from the smallest ids.
inline GoodSet multi_unit_demand(const Valuation& v, const Prices& p, GoodSet available) {
    const std::vector<int> goods = set_elements(available);
    const int n = static_cast<int>(goods.size());
    std::vector<std::pair<Rational, int>> by_price; // (price, id), sorted
    by_price.reserve(static_cast<std::size_t>(n));
    for (int g : goods) by_price.emplace_back(*p[static_cast<std::size_t>(g)], g);
    std::stable_sort(by_price.begin(), by_price.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    std::vector<Rational> prefix(static_cast<std::size_t>(n) + 1, Rational(0));
    for (int i = 0; i < n; ++i) prefix[static_cast<std::size_t>(i) + 1] =
        prefix[static_cast<std::size_t>(i)] + by_price[static_cast<std::size_t>(i)].first;

    int best_c = 0;
    Rational best_u = 0;
    for (int c = 1; c <= n; ++c) {
        Rational u = v.table()[static_cast<std::size_t>(c)] - prefix[static_cast<std::size_t>(c)];
        if (u > best_u) {
            best_u = std::move(u);
            best_c = c;
        }
    }
    if (best_c == 0) return 0;

    // Lex-smallest min-cost best_c-subset: take each id in ascending order
    // whenever doing so still admits a min-cost completion from larger ids.
    const Rational target = prefix[static_cast<std::size_t>(best_c)];
    std::vector<Rational> sorted_suffix; // prices of goods with id > current, resorted on the fly
    GoodSet chosen = 0;
    Rational spent = 0;
    int need = best_c;
    std::vector<std::pair<int, Rational>> by_id; // (id, price) ascending id
    for (int g : goods) by_id.emplace_back(g, *p[static_cast<std::size_t>(g)]);
    for (std::size_t pos = 0; pos < by_id.size() && need > 0; ++pos) {
        // Cheapest (need-1)-completion from ids after pos.
        std::vector<Rational> rest;
        for (std::size_t q = pos + 1; q < by_id.size(); ++q) rest.push_back(by_id[q].second);
        std::sort(rest.begin(), rest.end());
        if (static_cast<int>(rest.size()) < need - 1) continue;
        Rational completion = 0;
        for (int q = 0; q < need - 1; ++q) completion += rest[static_cast<std::size_t>(q)];
        if (spent + by_id[pos].second + completion == target) {
            chosen |= good_bit(by_id[pos].first);
            spent += by_id[pos].second;
            --need;
        }
    }
    require(need == 0, ErrorKind::Internal, "multi-unit demand failed to assemble its subset");
    return chosen;
}

} // namespace detail

// Demand oracle: a utility-maximizing subset of `available` at prices p,
// under the fixed tie rule (minimum cardinality, then lexicographically
// smallest good-id set). `available` must exclude unavailable-priced goods.
inline GoodSet demand(const Valuation& v, const Prices& p, GoodSet available,
                      int demand_cap = kDefaultDemandCap) {
    {
        GoodSet s = available;
        for (int i = 0; s != 0; ++i, s >>= 1) {
            if ((s & 1u) && !p[static_cast<std::size_t>(i)].has_value())
                fail(ErrorKind::Input, "available set includes an unavailable-priced good");
        }
    }
    switch (v.cls()) {
        case ValuationClass::Additive: {
            GoodSet out = 0;
            GoodSet s = available;
            for (int i = 0; s != 0; ++i, s >>= 1) {
                if ((s & 1u) && v.table()[static_cast<std::size_t>(i)] > *p[static_cast<std::size_t>(i)])
                    out |= good_bit(i);
            }
            return out;
        }
        case ValuationClass::UnitDemand: {
            GoodSet best = 0;
            Rational best_u = 0;
            GoodSet s = available;
            for (int i = 0; s != 0; ++i, s >>= 1) {
                if (!(s & 1u)) continue;
                Rational u = v.table()[static_cast<std::size_t>(i)] - *p[static_cast<std::size_t>(i)];
                if (u > best_u) {
                    best_u = std::move(u);
                    best = good_bit(i);
                }
            }
            return best;
        }
        case ValuationClass::SingleMinded: {
            const GoodSet want = v.demand_set();
            if ((want & available) != want) return 0;
            if (v.bundle_value() > price_sum(p, want)) return want;
            return 0;
        }
        case ValuationClass::MultiUnit:
            return detail::multi_unit_demand(v, p, available);
        case ValuationClass::Xos:
            return detail::exhaustive_demand(v, p, available, demand_cap);
    }
    fail(ErrorKind::Internal, "unreachable valuation class");
}

// Uniform-price quantity demand for a multi-unit valuation: the q in
// [0, max_q] maximizing w_q - p*q. tie_mode selects the smallest or largest
// maximizer; the largest exists only to build locally maximal allocations.
enum class TieMode { Smallest, Largest };

inline int demand_quantity(const Valuation& v, const Rational& p, int max_q, TieMode tie) {
    require(v.cls() == ValuationClass::MultiUnit, ErrorKind::Unsupported,
            "quantity demand requires a multi_unit valuation");
    require(max_q >= 0 && max_q <= v.goods(), ErrorKind::Input,
            "quantity demand outside [0, m]");
    int best = 0;
    Rational best_u = 0;
    for (int q = 1; q <= max_q; ++q) {
        Rational u = v.table()[static_cast<std::size_t>(q)] - p * q;
        const bool take = (tie == TieMode::Smallest) ? (u > best_u) : (u >= best_u);
        if (take) {
            best_u = std::move(u);
            best = q;
        }
    }
    return best;
}

// The (buyer, good) pair maximizing v_j({i}); ties go to the smallest (j, i).
inline std::pair<int, int> max_single_item(const std::vector<Valuation>& buyers) {
    require(!buyers.empty() && buyers[0].goods() >= 1, ErrorKind::Input,
            "max_single_item needs at least one buyer and one good");
    int bj = 0, bi = 0;
    Rational best = buyers[0].value(good_bit(0));
    for (int j = 0; j < static_cast<int>(buyers.size()); ++j) {
        for (int i = 0; i < buyers[static_cast<std::size_t>(j)].goods(); ++i) {
            Rational val = buyers[static_cast<std::size_t>(j)].value(good_bit(i));
            if (val > best) {
                best = std::move(val);
                bj = j;
                bi = i;
            }
        }
    }
    return {bj, bi};
}

} // namespace valuations

using valuations::Prices;
using valuations::TieMode;
using valuations::Valuation;
using valuations::ValuationClass;

} // namespace pricing

#pragma once

// Second-stage (consumer) Nash equilibria for a fixed price pair: the nine
// equilibrium classes, their price-gap domains, and the demand set Q(p).

#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "netduo/model.hpp"

namespace netduo {

struct PricePair {
    double p_a;
    double p_b;

    /// Throws Error(InvalidArgument) on negative or non-finite prices.
    static PricePair make(double p_a, double p_b);

    double dp() const noexcept { return p_a - p_b; }
};

/// Proportion of each group choosing firm a.
struct ConsumerProfile {
    double s1;
    double s2;

    double at(Group g) const noexcept { return g == Group::first ? s1 : s2; }
    double demand() const noexcept { return s1 + s2; }

    bool operator==(const ConsumerProfile&) const = default;
};

/// C<s1><s2> for pure profiles; S0/S1 when only group 1 splits (group 2 at
/// 0/1); ZS/OS when only group 2 splits (group 1 at 0/1); SS when both split.
enum class EquilibriumClassId { C00, C01, C10, C11, S0, S1, ZS, OS, SS };

inline constexpr EquilibriumClassId all_classes[] = {
    EquilibriumClassId::C00, EquilibriumClassId::C01, EquilibriumClassId::C10,
    EquilibriumClassId::C11, EquilibriumClassId::S0,  EquilibriumClassId::S1,
    EquilibriumClassId::ZS,  EquilibriumClassId::OS,  EquilibriumClassId::SS};

const char* to_string(EquilibriumClassId c) noexcept;
std::optional<EquilibriumClassId> parse_class(std::string_view name) noexcept;
bool is_pure(EquilibriumClassId c) noexcept;

/// Classify a profile by whether each share is 0, 1 or interior.
EquilibriumClassId class_of(const ConsumerProfile& s) noexcept;

/// Real interval with per-endpoint closedness; infinite endpoints allowed.
struct Interval {
    double lo;
    double hi;
    bool lo_closed;
    bool hi_closed;

    static Interval closed(double lo, double hi) noexcept { return {lo, hi, true, true}; }
    static Interval open(double lo, double hi) noexcept { return {lo, hi, false, false}; }
    static Interval point(double x) noexcept { return {x, x, true, true}; }
    static Interval everything() noexcept;
    static Interval nothing() noexcept;

    bool empty() const noexcept;
    /// Closed ends admit x within `slack` of the bound; open ends need x
    /// more than `slack` inside.
    bool contains(double x, double slack = 0.0) const noexcept;
    bool is_point() const noexcept { return lo == hi && lo_closed && hi_closed; }

    bool operator==(const Interval&) const = default;
};

Interval intersect(const Interval& a, const Interval& b) noexcept;

struct PointShape {
    ConsumerProfile profile;
};

/// One group's share ranges over `range` while the other group sits at
/// `fixed_value` (0 or 1). Only arises when the splitting group has no
/// self-influence.
struct SegmentShape {
    Group free_group;
    double fixed_value;
    Interval range;

    ConsumerProfile at(double sigma) const noexcept;
};

struct EquilibriumFamily {
    EquilibriumClassId cls;
    std::variant<PointShape, SegmentShape> shape;
    Interval dp_interval;  // price gaps at which this class is nonempty

    bool is_point() const noexcept { return std::holds_alternative<PointShape>(shape); }
    /// Image of the family under s1 + s2.
    Interval demand_range() const noexcept;
};

struct EquilibriumSet {
    double dp;
    std::vector<EquilibriumFamily> families;  // sorted by class tag
    std::vector<Interval> q_values;           // sorted, duplicates removed

    const EquilibriumFamily* find(EquilibriumClassId c) const noexcept;
    bool has(EquilibriumClassId c) const noexcept { return find(c) != nullptr; }
};

/// v_i(a) - v_i(b) for a member of `group`.
double delta_v(const InteractionMatrix& m, double dp, const ConsumerProfile& s, Group group) noexcept;
inline double delta_v(const InteractionMatrix& m, const PricePair& pp, const ConsumerProfile& s,
                      Group group) noexcept {
    return delta_v(m, pp.dp(), s, group);
}

inline constexpr double default_equilibrium_tol = 1e-9;

/// Best-response test for both groups with absolute slack `tol` on delta_v.
bool is_consumer_equilibrium(const InteractionMatrix& m, double dp, const ConsumerProfile& s,
                             double tol = default_equilibrium_tol) noexcept;
inline bool is_consumer_equilibrium(const InteractionMatrix& m, const PricePair& pp,
                                    const ConsumerProfile& s,
                                    double tol = default_equilibrium_tol) noexcept {
    return is_consumer_equilibrium(m, pp.dp(), s, tol);
}

/// Set of price gaps at which class `c` has at least one equilibrium.
Interval class_domain(const InteractionMatrix& m, EquilibriumClassId c);

/// Families present at `dp`. Domain ends are resolved with slack
/// default_equilibrium_tol (see Interval::contains), so a gap that rounds onto
/// a threshold yields the boundary family and not its open neighbour.
EquilibriumSet enumerate_equilibria(const InteractionMatrix& m, double dp);
inline EquilibriumSet enumerate_equilibria(const InteractionMatrix& m, const PricePair& pp) {
    return enumerate_equilibria(m, pp.dp());
}

std::vector<Interval> q_values(const InteractionMatrix& m, const PricePair& pp);

/// Finite endpoints of every class domain, sorted and deduplicated.
std::vector<double> threshold_points(const InteractionMatrix& m);

/// `count` price gaps spread over all threshold regions: thresholds,
/// midpoints between consecutive thresholds, and points beyond both ends.
std::vector<double> probe_price_gaps(const InteractionMatrix& m, std::size_t count);

}  // namespace netduo

#include "netduo/consumer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "netduo/error.hpp"

namespace netduo {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

struct SplitSpec {
    Group split;
    double fixed;  // share of the other group, 0 or 1
};

std::optional<SplitSpec> single_split(EquilibriumClassId c) noexcept {
    switch (c) {
        case EquilibriumClassId::S0: return SplitSpec{Group::first, 0.0};
        case EquilibriumClassId::S1: return SplitSpec{Group::first, 1.0};
        case EquilibriumClassId::ZS: return SplitSpec{Group::second, 0.0};
        case EquilibriumClassId::OS: return SplitSpec{Group::second, 1.0};
        default: return std::nullopt;
    }
}

ConsumerProfile make_profile(Group g, double share, double other_share) noexcept {
    return g == Group::first ? ConsumerProfile{share, other_share}
                             : ConsumerProfile{other_share, share};
}

// Range of the free share when the splitting group has zero self-influence.
// Its indifference then pins dp = s * a_ij and leaves the share free, subject
// to the other group's best response.
Interval degenerate_split_range(const InteractionMatrix& m, SplitSpec spec) noexcept {
    const Group i = spec.split;
    const Group j = other(i);
    const double aij = m.at(i, j);
    const double aji = m.at(j, i);
    const double ajj = m.at(j, j);
    Interval r{};
    if (spec.fixed == 1.0) {
        r = {(aij - ajj + aji) / (2.0 * aji), 1.0, true, false};
    } else {
        r = {0.0, (ajj - aij + aji) / (2.0 * aji), false, true};
    }
    return intersect(r, Interval::open(0.0, 1.0));
}

Interval single_split_domain(const InteractionMatrix& m, SplitSpec spec) {
    const Group i = spec.split;
    const Group j = other(i);
    const double aii = m.at(i, i);
    const double aij = m.at(i, j);
    const double s = spec.fixed == 1.0 ? 1.0 : -1.0;

    if (aii == 0.0) {
        if (degenerate_split_range(m, spec).empty()) return Interval::nothing();
        return Interval::point(s * aij);
    }

    // interior share of the splitting group
    const Interval interior = Interval::open(-aii + s * aij, aii + s * aij);

    // other group's best response: s * dp * (a_ii - a_ji) <= det
    const double det = determinant(m);
    const double c = aii - m.at(j, i);
    Interval half{};
    if (c == 0.0) {
        half = det > 0.0 ? Interval::everything() : Interval::nothing();
    } else {
        const double g = det / c;
        const bool upper = (s > 0.0) == (c > 0.0);
        const double bound = s * g;
        half = upper ? Interval{-inf, bound, false, true} : Interval{bound, inf, true, false};
    }
    return intersect(interior, half);
}

}  // namespace

PricePair PricePair::make(double p_a, double p_b) {
    if (!std::isfinite(p_a) || !std::isfinite(p_b) || p_a < 0.0 || p_b < 0.0) {
        std::ostringstream os;
        os << "prices must be finite and nonnegative, got (" << p_a << ", " << p_b << ")";
        throw Error(ErrorCode::InvalidArgument, os.str());
    }
    return {p_a, p_b};
}

const char* to_string(EquilibriumClassId c) noexcept {
    switch (c) {
        case EquilibriumClassId::C00: return "C00";
        case EquilibriumClassId::C01: return "C01";
        case EquilibriumClassId::C10: return "C10";
        case EquilibriumClassId::C11: return "C11";
        case EquilibriumClassId::S0: return "S0";
        case EquilibriumClassId::S1: return "S1";
        case EquilibriumClassId::ZS: return "ZS";
        case EquilibriumClassId::OS: return "OS";
        case EquilibriumClassId::SS: return "SS";
    }
    return "?";
}

std::optional<EquilibriumClassId> parse_class(std::string_view name) noexcept {
    for (EquilibriumClassId c : all_classes) {
        if (name == to_string(c)) return c;
    }
    return std::nullopt;
}

bool is_pure(EquilibriumClassId c) noexcept {
    return c == EquilibriumClassId::C00 || c == EquilibriumClassId::C01 ||
           c == EquilibriumClassId::C10 || c == EquilibriumClassId::C11;
}

EquilibriumClassId class_of(const ConsumerProfile& s) noexcept {
    auto kind = [](double x) { return x <= 0.0 ? 0 : (x >= 1.0 ? 1 : 2); };
    static constexpr EquilibriumClassId table[3][3] = {
        {EquilibriumClassId::C00, EquilibriumClassId::C01, EquilibriumClassId::ZS},
        {EquilibriumClassId::C10, EquilibriumClassId::C11, EquilibriumClassId::OS},
        {EquilibriumClassId::S0, EquilibriumClassId::S1, EquilibriumClassId::SS},
    };
    return table[kind(s.s1)][kind(s.s2)];
}

Interval Interval::everything() noexcept { return {-inf, inf, false, false}; }
Interval Interval::nothing() noexcept { return {1.0, 0.0, false, false}; }

bool Interval::empty() const noexcept {
    if (lo > hi) return true;
    if (lo == hi) return !(lo_closed && hi_closed);
    return false;
}

bool Interval::contains(double x, double slack) const noexcept {
    const bool above = lo_closed ? x >= lo - slack : x > lo + slack;
    const bool below = hi_closed ? x <= hi + slack : x < hi - slack;
    return above && below;
}

Interval intersect(const Interval& a, const Interval& b) noexcept {
    Interval r{};
    if (a.lo > b.lo) {
        r.lo = a.lo;
        r.lo_closed = a.lo_closed;
    } else if (b.lo > a.lo) {
        r.lo = b.lo;
        r.lo_closed = b.lo_closed;
    } else {
        r.lo = a.lo;
        r.lo_closed = a.lo_closed && b.lo_closed;
    }
    if (a.hi < b.hi) {
        r.hi = a.hi;
        r.hi_closed = a.hi_closed;
    } else if (b.hi < a.hi) {
        r.hi = b.hi;
        r.hi_closed = b.hi_closed;
    } else {
        r.hi = a.hi;
        r.hi_closed = a.hi_closed && b.hi_closed;
    }
    return r;
}

ConsumerProfile SegmentShape::at(double sigma) const noexcept {
    return make_profile(free_group, sigma, fixed_value);
}

Interval EquilibriumFamily::demand_range() const noexcept {
    if (const auto* p = std::get_if<PointShape>(&shape)) {
        return Interval::point(p->profile.demand());
    }
    const auto& seg = std::get<SegmentShape>(shape);
    return {seg.fixed_value + seg.range.lo, seg.fixed_value + seg.range.hi, seg.range.lo_closed,
            seg.range.hi_closed};
}

const EquilibriumFamily* EquilibriumSet::find(EquilibriumClassId c) const noexcept {
    for (const auto& f : families) {
        if (f.cls == c) return &f;
    }
    return nullptr;
}

double delta_v(const InteractionMatrix& m, double dp, const ConsumerProfile& s, Group group) noexcept {
    return -dp + m.at(group, Group::first) * (2.0 * s.s1 - 1.0) +
           m.at(group, Group::second) * (2.0 * s.s2 - 1.0);
}

bool is_consumer_equilibrium(const InteractionMatrix& m, double dp, const ConsumerProfile& s,
                             double tol) noexcept {
    for (Group g : {Group::first, Group::second}) {
        const double share = s.at(g);
        if (share < 0.0 || share > 1.0) return false;
        const double dv = delta_v(m, dp, s, g);
        if (share == 1.0) {
            if (dv < -tol) return false;
        } else if (share == 0.0) {
            if (dv > tol) return false;
        } else if (std::abs(dv) > tol) {
            return false;
        }
    }
    return true;
}

Interval class_domain(const InteractionMatrix& m, EquilibriumClassId c) {
    const double row = min_row_sum(m);
    switch (c) {
        case EquilibriumClassId::C11: return {-inf, row, false, true};
        case EquilibriumClassId::C00: return {-row, inf, true, false};
        case EquilibriumClassId::C10: return Interval::closed(m.a21() - m.a22(), m.a11() - m.a12());
        case EquilibriumClassId::C01: return Interval::closed(m.a12() - m.a11(), m.a22() - m.a21());
        case EquilibriumClassId::SS: {
            const double r = both_split_radius(m);
            return Interval::open(-r, r);
        }
        default: return single_split_domain(m, *single_split(c));
    }
}

EquilibriumSet enumerate_equilibria(const InteractionMatrix& m, double dp) {
    EquilibriumSet out{};
    out.dp = dp;
    for (EquilibriumClassId c : all_classes) {
        const Interval dom = class_domain(m, c);
        if (!dom.contains(dp, default_equilibrium_tol)) continue;

        if (is_pure(c)) {
            const bool a1 = c == EquilibriumClassId::C10 || c == EquilibriumClassId::C11;
            const bool a2 = c == EquilibriumClassId::C01 || c == EquilibriumClassId::C11;
            out.families.push_back({c, PointShape{{a1 ? 1.0 : 0.0, a2 ? 1.0 : 0.0}}, dom});
            continue;
        }

        if (c == EquilibriumClassId::SS) {
            const Kappas k = kappas(m);
            const ConsumerProfile s{0.5 * k.k1 * dp + 0.5, 0.5 * k.k2 * dp + 0.5};
            if (s.s1 > 0.0 && s.s1 < 1.0 && s.s2 > 0.0 && s.s2 < 1.0) {
                out.families.push_back({c, PointShape{s}, dom});
            }
            continue;
        }

        const SplitSpec spec = *single_split(c);
        const Group i = spec.split;
        const double aii = m.at(i, i);
        if (aii == 0.0) {
            out.families.push_back(
                {c, SegmentShape{i, spec.fixed, degenerate_split_range(m, spec)}, dom});
            continue;
        }
        const double s = spec.fixed == 1.0 ? 1.0 : -1.0;
        const double share = (dp - s * m.at(i, other(i)) + aii) / (2.0 * aii);
        if (share > 0.0 && share < 1.0) {
            out.families.push_back({c, PointShape{make_profile(i, share, spec.fixed)}, dom});
        }
    }

    for (const auto& f : out.families) out.q_values.push_back(f.demand_range());
    std::sort(out.q_values.begin(), out.q_values.end(), [](const Interval& a, const Interval& b) {
        if (a.lo != b.lo) return a.lo < b.lo;
        return a.hi < b.hi;
    });
    out.q_values.erase(std::unique(out.q_values.begin(), out.q_values.end()), out.q_values.end());
    return out;
}

std::vector<Interval> q_values(const InteractionMatrix& m, const PricePair& pp) {
    return enumerate_equilibria(m, pp).q_values;
}

std::vector<double> threshold_points(const InteractionMatrix& m) {
    std::vector<double> pts;
    for (EquilibriumClassId c : all_classes) {
        const Interval d = class_domain(m, c);
        if (d.empty()) continue;
        if (std::isfinite(d.lo)) pts.push_back(d.lo);
        if (std::isfinite(d.hi)) pts.push_back(d.hi);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

std::vector<double> probe_price_gaps(const InteractionMatrix& m, std::size_t count) {
    std::vector<double> t = threshold_points(m);
    t.push_back(0.0);
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());

    const double span = std::max(1.0, t.back() - t.front());
    std::vector<double> cand = t;
    for (std::size_t k = 0; k + 1 < t.size(); ++k) cand.push_back(0.5 * (t[k] + t[k + 1]));
    cand.push_back(t.front() - 0.25 * span);
    cand.push_back(t.back() + 0.25 * span);
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

    if (count == 0) return {};
    if (cand.size() < count) {
        const double lo = cand.front();
        const double hi = cand.back();
        const std::size_t extra = count - cand.size();
        for (std::size_t k = 1; k <= extra; ++k) {
            cand.push_back(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(extra + 1));
        }
        std::sort(cand.begin(), cand.end());
        return cand;
    }
    std::vector<double> out;
    out.reserve(count);
    const std::size_t n = cand.size();
    for (std::size_t k = 0; k < count; ++k) {
        const std::size_t idx = count == 1 ? 0 : (k * (n - 1) + (count - 1) / 2) / (count - 1);
        out.push_back(cand[idx]);
    }
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace netduo

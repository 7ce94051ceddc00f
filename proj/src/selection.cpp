#include "netduo/selection.hpp"

#include <cmath>
#include <sstream>

#include "netduo/error.hpp"
#include "netduo/pricing.hpp"

namespace netduo {

namespace {

struct Candidate {
    ConsumerProfile profile;
    EquilibriumClassId cls;
    bool limiting;
};

Candidate extreme_of(const EquilibriumFamily& f, bool want_max) {
    if (const auto* p = std::get_if<PointShape>(&f.shape)) return {p->profile, f.cls, false};
    const auto& seg = std::get<SegmentShape>(f.shape);
    if (want_max) {
        const bool open = !seg.range.hi_closed;
        return {seg.at(open ? seg.range.hi - open_endpoint_offset : seg.range.hi), f.cls, open};
    }
    const bool open = !seg.range.lo_closed;
    return {seg.at(open ? seg.range.lo + open_endpoint_offset : seg.range.lo), f.cls, open};
}

// Ties on demand go to pure classes, then to the class order.
Selection extremal(const EquilibriumSet& set, bool want_max) {
    if (set.families.empty()) {
        throw Error(ErrorCode::ClassAbsent, "no consumer equilibrium at this price pair");
    }
    std::optional<Candidate> best;
    for (const auto& f : set.families) {
        const Candidate c = extreme_of(f, want_max);
        if (!best) {
            best = c;
            continue;
        }
        const double d = c.profile.demand();
        const double bd = best->profile.demand();
        const bool better = want_max ? d > bd : d < bd;
        const bool tie_win = d == bd && is_pure(c.cls) && !is_pure(best->cls);
        if (better || tie_win) best = c;
    }
    return {best->profile, best->cls, best->limiting};
}

Selection from_class(const EquilibriumSet& set, EquilibriumClassId cls) {
    const EquilibriumFamily* f = set.find(cls);
    if (f == nullptr) {
        std::ostringstream os;
        os << "class " << to_string(cls) << " absent at dp = " << set.dp;
        throw Error(ErrorCode::ClassAbsent, os.str());
    }
    // segment families only occur for single-split classes; take the minimum
    return {extreme_of(*f, false).profile, cls, !f->is_point()};
}

}  // namespace

policy::Priority make_priority(std::vector<EquilibriumClassId> order) {
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (std::size_t j = i + 1; j < order.size(); ++j) {
            if (order[i] == order[j]) {
                throw Error(ErrorCode::InvalidArgument,
                            std::string("priority lists class ") + to_string(order[i]) + " twice");
            }
        }
    }
    return {std::move(order)};
}

SelectionPolicy parse_policy(std::string_view token, const InteractionMatrix& m) {
    if (token == "both-split") return policy::BothSplit{};
    if (token == "min") return policy::MinDemand{};
    if (token == "max") return policy::MaxDemand{};
    if (token == "monopoly-a") return policy::MonopolyA{};
    if (token == "monopoly-b") return policy::MonopolyB{};
    if (token == "appendix-a") return policy::AppendixA{star_price(m)};
    constexpr std::string_view prefix = "priority:";
    if (token.substr(0, prefix.size()) == prefix) {
        std::vector<EquilibriumClassId> order;
        std::string_view rest = token.substr(prefix.size());
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            const std::string_view name = rest.substr(0, comma);
            const auto cls = parse_class(name);
            if (!cls) {
                throw Error(ErrorCode::InvalidArgument,
                            "unknown equilibrium class '" + std::string(name) + "'");
            }
            order.push_back(*cls);
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
        if (order.empty()) throw Error(ErrorCode::InvalidArgument, "empty priority list");
        return make_priority(std::move(order));
    }
    throw Error(ErrorCode::InvalidArgument, "unknown selection policy '" + std::string(token) + "'");
}

std::string policy_token(const SelectionPolicy& p) {
    struct Visitor {
        std::string operator()(const policy::BothSplit&) const { return "both-split"; }
        std::string operator()(const policy::MinDemand&) const { return "min"; }
        std::string operator()(const policy::MaxDemand&) const { return "max"; }
        std::string operator()(const policy::MonopolyA&) const { return "monopoly-a"; }
        std::string operator()(const policy::MonopolyB&) const { return "monopoly-b"; }
        std::string operator()(const policy::AppendixA&) const { return "appendix-a"; }
        std::string operator()(const policy::Priority& pr) const {
            std::string s = "priority:";
            for (std::size_t i = 0; i < pr.order.size(); ++i) {
                if (i) s += ',';
                s += to_string(pr.order[i]);
            }
            return s;
        }
    };
    return std::visit(Visitor{}, p);
}

Selection select(const EquilibriumSet& set, const InteractionMatrix& m, const PricePair& pp,
                 const SelectionPolicy& p) {
    struct Visitor {
        const EquilibriumSet& set;
        const InteractionMatrix& m;
        const PricePair& pp;

        Selection operator()(const policy::BothSplit&) const {
            return from_class(set, EquilibriumClassId::SS);
        }
        Selection operator()(const policy::MinDemand&) const { return extremal(set, false); }
        Selection operator()(const policy::MaxDemand&) const { return extremal(set, true); }
        Selection operator()(const policy::MonopolyA&) const {
            if (set.has(EquilibriumClassId::C11)) return from_class(set, EquilibriumClassId::C11);
            return extremal(set, true);
        }
        Selection operator()(const policy::MonopolyB&) const {
            if (set.has(EquilibriumClassId::C00)) return from_class(set, EquilibriumClassId::C00);
            return extremal(set, false);
        }
        Selection operator()(const policy::AppendixA& a) const {
            const double kneg = negative_kappa(m);
            if (!(kappas(m).sum() < 0.0)) {
                throw Error(ErrorCode::NoHotellingSelection,
                            "appendix-a selection needs kappa1 + kappa2 < 0");
            }
            if (std::abs(set.dp) < 1.0 / std::abs(kneg) && set.has(EquilibriumClassId::SS)) {
                return from_class(set, EquilibriumClassId::SS);
            }
            // the deviating firm gets its smallest equilibrium demand
            const bool b_deviates = pp.p_a == a.p_star && pp.p_b != a.p_star;
            return extremal(set, b_deviates);
        }
        Selection operator()(const policy::Priority& pr) const {
            for (EquilibriumClassId c : pr.order) {
                if (set.has(c)) return from_class(set, c);
            }
            throw Error(ErrorCode::ClassAbsent, "no class of the priority list is present");
        }
    };
    return std::visit(Visitor{set, m, pp}, p);
}

Selection select(const InteractionMatrix& m, const PricePair& pp, const SelectionPolicy& p) {
    return select(enumerate_equilibria(m, pp), m, pp, p);
}

DemandPoint demand(const InteractionMatrix& m, const PricePair& pp, const SelectionPolicy& p) {
    const double d_a = select(m, pp, p).profile.demand();
    return {d_a, 2.0 - d_a};
}

DemandPoint hotelling_demand_closed_form(const InteractionMatrix& m, const PricePair& pp) {
    const double r = both_split_radius(m);
    if (!(std::abs(pp.dp()) < r)) {
        std::ostringstream os;
        os << "|dp| = " << std::abs(pp.dp()) << " outside the both-split domain radius " << r;
        throw Error(ErrorCode::OutOfDomain, os.str());
    }
    const double d_a = 1.0 + 0.5 * kappas(m).sum() * (pp.p_a - pp.p_b);
    return {d_a, 2.0 - d_a};
}

double marginal_group_demand(const InteractionMatrix& m, EquilibriumClassId cls, Group group) {
    if (is_pure(cls)) {
        throw Error(ErrorCode::InvalidArgument,
                    std::string("no marginal demand for pure class ") + to_string(cls));
    }
    if (cls == EquilibriumClassId::SS) {
        const Kappas k = kappas(m);
        return group == Group::first ? k.k1 : k.k2;
    }
    const Group split = (cls == EquilibriumClassId::S0 || cls == EquilibriumClassId::S1)
                            ? Group::first
                            : Group::second;
    if (group != split) return 0.0;
    const double aii = m.at(split, split);
    if (aii == 0.0) {
        throw Error(ErrorCode::Unbounded, "splitting group has no self-influence");
    }
    return 1.0 / (2.0 * aii);
}

}  // namespace netduo

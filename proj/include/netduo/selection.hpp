#pragma once

// Selection policies: rules that pick one consumer equilibrium per price pair
// and thereby induce a single-valued demand function.

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "netduo/consumer.hpp"

namespace netduo {

namespace policy {
struct BothSplit {};
struct MinDemand {};
struct MaxDemand {};
struct MonopolyA {};
struct MonopolyB {};
/// Both-split inside the band |dp| < 1/|kappa_neg|; outside it, the
/// equilibrium minimizing the demand of whichever firm deviated from p_star.
struct AppendixA {
    double p_star;
};
struct Priority {
    std::vector<EquilibriumClassId> order;
};
}  // namespace policy

using SelectionPolicy =
    std::variant<policy::BothSplit, policy::MinDemand, policy::MaxDemand, policy::MonopolyA,
                 policy::MonopolyB, policy::AppendixA, policy::Priority>;

/// Parses both-split | min | max | monopoly-a | monopoly-b | appendix-a |
/// priority:C11,SS,... ; appendix-a takes its p_star from `m`.
SelectionPolicy parse_policy(std::string_view token, const InteractionMatrix& m);
std::string policy_token(const SelectionPolicy& p);

/// Throws Error(InvalidArgument) on repeated classes.
policy::Priority make_priority(std::vector<EquilibriumClassId> order);

struct Selection {
    ConsumerProfile profile;
    EquilibriumClassId cls;
    bool limiting;  // profile approaches an open endpoint of a segment family
};

/// Offset used to evaluate segment families at open endpoints.
inline constexpr double open_endpoint_offset = 1e-9;

Selection select(const InteractionMatrix& m, const PricePair& pp, const SelectionPolicy& policy);
Selection select(const EquilibriumSet& set, const InteractionMatrix& m, const PricePair& pp,
                 const SelectionPolicy& policy);

/// Demand in group-mass units; d_a + d_b = 2.
struct DemandPoint {
    double d_a;
    double d_b;
};

DemandPoint demand(const InteractionMatrix& m, const PricePair& pp, const SelectionPolicy& policy);

/// 1 + (kappa1 + kappa2)/2 * (p_j - p_i). Error(OutOfDomain) outside the
/// both-split domain.
DemandPoint hotelling_demand_closed_form(const InteractionMatrix& m, const PricePair& pp);

/// d sigma_group / d p_a along a split class. Error(InvalidArgument) for pure
/// classes, Error(Unbounded) when the splitting group has a_ii = 0.
double marginal_group_demand(const InteractionMatrix& m, EquilibriumClassId cls, Group group);

}  // namespace netduo

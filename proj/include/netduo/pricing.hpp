#pragma once

// First-stage pricing: the symmetric both-split price equilibrium, the
// sufficient existence condition, and grid verification that no unilateral
// price deviation is profitable.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "netduo/selection.hpp"

namespace netduo {

struct MarketOutcome {
    PricePair prices;
    ConsumerProfile profile;
    EquilibriumClassId cls;
    DemandPoint demands;
    double profit_a;
    double profit_b;
};

/// Evaluate prices, demands and profits (p_j * D_j, zero costs) under a policy.
MarketOutcome market_outcome(const InteractionMatrix& m, const PricePair& pp,
                             const SelectionPolicy& policy);

/// 2 / |kappa1 + kappa2|; Error(NoHotellingSelection) unless the sum is negative.
double star_price(const InteractionMatrix& m);

MarketOutcome local_equilibrium(const InteractionMatrix& m);

struct ExistenceResult {
    LambdaVariant variant;
    double lambda;
    double threshold;  // -1 / lambda
    double kappa_sum;
    bool holds;        // kappa_sum <= threshold
};

/// Error(NotApplicable) when lambda is undefined for the variant.
ExistenceResult existence_check(const InteractionMatrix& m, LambdaVariant variant);

/// lo + k * step rounded to 15 significant digits, so decimal steps print cleanly.
double grid_value(double lo, double step, std::size_t k) noexcept;

/// Evenly spaced prices lo, lo + step, ..., up to hi (inclusive within 1e-9 steps).
class PriceGrid {
public:
    /// Error(InvalidArgument) unless 0 <= lo <= hi, step > 0, all finite.
    static PriceGrid make(double lo, double hi, double step);

    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    double step() const noexcept { return step_; }
    std::size_t size() const noexcept { return count_; }
    /// lo + k * step rounded to 15 significant digits.
    double operator[](std::size_t k) const noexcept;

private:
    PriceGrid(double lo, double hi, double step, std::size_t count)
        : lo_(lo), hi_(hi), step_(step), count_(count) {}
    double lo_, hi_, step_;
    std::size_t count_;
};

/// [0, 3 p*] with step p*/4000.
PriceGrid default_deviation_grid(const InteractionMatrix& m);

struct CurvePoint {
    double p_a;
    double profit_a;
    double demand_a;
    EquilibriumClassId cls;
};

std::vector<CurvePoint> best_response_profit_curve(const InteractionMatrix& m, double p_b,
                                                   const SelectionPolicy& policy,
                                                   const PriceGrid& grid);

struct RegionMax {
    std::string name;
    double lo = 0;  // price bounds of the region, may be empty on the grid
    double hi = 0;
    std::size_t samples = 0;
    std::optional<double> max_profit{};
    std::optional<double> argmax{};
};

struct DeviationReport {
    double p_star = 0;
    std::string policy;
    PriceGrid grid;
    double pi_star = 0;  // firm a's profit at (p*, p*) under the policy
    double ptol = 0;
    double max_dev_profit = 0;
    double argmax_price = 0;
    bool equilibrium_confirmed = false;
    std::vector<RegionMax> regions{}; // undercut, lower-flank, band, upper-flank
    double lambda = 0;
    bool undercut_bound_holds = false;  // p* <= 2 lambda
    double band_argmax = 0;             // grid argmax restricted to the band
    bool foc_consistent = false;        // |band_argmax - p*| <= step
    bool firm_symmetry = false;         // D_b(p*, p) == D_a(p, p*) on the grid
    std::optional<double> max_dev_profit_b{}; // only swept when symmetry fails
};

inline constexpr double profit_rel_tol = 1e-9;

DeviationReport verify_no_profitable_deviation(const InteractionMatrix& m,
                                               const SelectionPolicy& policy,
                                               const PriceGrid& grid);

struct ClaimRegionCheck {
    double lo = 0;
    double hi = 0;
    std::size_t samples = 0;
    std::size_t failures = 0;
    std::optional<double> first_failure{};
    double max_min_q = 0;  // largest min Q seen, 0 when no samples
};

/// Checks on a grid that min Q(p, p*) is 0 or 1 for p in
/// (p* - lambda, p* - 1/|kappa_neg|) and 0 for p beyond p* + 1/|kappa_neg|.
struct ClaimReport {
    double p_star = 0;
    double lambda = 0;
    double band = 0;  // 1/|kappa_neg|
    ClaimRegionCheck below{};
    ClaimRegionCheck above{};
    bool passed = false;
};

/// Requires kappa1 + kappa2 < 0; the upper region is sampled on
/// (p* + band, p* + band + 3 lambda].
ClaimReport claim_min_q(const InteractionMatrix& m, double p_star, std::size_t samples = 2000);

}  // namespace netduo

#include "netduo/pricing.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "netduo/error.hpp"

namespace netduo {

namespace {

void require_hotelling(const InteractionMatrix& m) {
    const double sum = kappas(m).sum();
    if (!(sum < 0.0)) {
        std::ostringstream os;
        os << "kappa1 + kappa2 = " << sum << " is not negative; no Hotelling selection exists";
        throw Error(ErrorCode::NoHotellingSelection, os.str());
    }
}

struct RegionAccumulator {
    RegionMax r;
    void add(double p, double profit) {
        ++r.samples;
        if (!r.max_profit || profit > *r.max_profit) {
            r.max_profit = profit;
            r.argmax = p;
        }
    }
};

double min_q(const InteractionMatrix& m, double p, double p_star) {
    const auto q = q_values(m, PricePair::make(p, p_star));
    return q.front().lo;
}

}  // namespace

MarketOutcome market_outcome(const InteractionMatrix& m, const PricePair& pp,
                             const SelectionPolicy& policy) {
    const Selection sel = select(m, pp, policy);
    const double d_a = sel.profile.demand();
    const DemandPoint d{d_a, 2.0 - d_a};
    return {pp, sel.profile, sel.cls, d, pp.p_a * d.d_a, pp.p_b * d.d_b};
}

double star_price(const InteractionMatrix& m) {
    require_hotelling(m);
    return 2.0 / std::abs(kappas(m).sum());
}

MarketOutcome local_equilibrium(const InteractionMatrix& m) {
    const double p = star_price(m);
    return market_outcome(m, PricePair::make(p, p), policy::BothSplit{});
}

ExistenceResult existence_check(const InteractionMatrix& m, LambdaVariant variant) {
    const double lam = lambda(m, variant);
    const double threshold = -1.0 / lam;
    const double sum = kappas(m).sum();
    return {variant, lam, threshold, sum, sum <= threshold};
}

double grid_value(double lo, double step, std::size_t k) noexcept {
    const double x = lo + static_cast<double>(k) * step;
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 15);
    double y = x;
    std::from_chars(buf, res.ptr, y);
    return y;
}

double PriceGrid::operator[](std::size_t k) const noexcept { return grid_value(lo_, step_, k); }

PriceGrid PriceGrid::make(double lo, double hi, double step) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !std::isfinite(step) || lo < 0.0 || hi < lo ||
        !(step > 0.0)) {
        std::ostringstream os;
        os << "invalid price grid [" << lo << ", " << hi << "] step " << step;
        throw Error(ErrorCode::InvalidArgument, os.str());
    }
    const double n = std::floor((hi - lo) / step + 1e-9);
    if (n > 5e7) throw Error(ErrorCode::InvalidArgument, "price grid too fine");
    return PriceGrid(lo, hi, step, static_cast<std::size_t>(n) + 1);
}

PriceGrid default_deviation_grid(const InteractionMatrix& m) {
    const double p = star_price(m);
    return PriceGrid::make(0.0, 3.0 * p, p / 4000.0);
}

std::vector<CurvePoint> best_response_profit_curve(const InteractionMatrix& m, double p_b,
                                                   const SelectionPolicy& policy,
                                                   const PriceGrid& grid) {
    std::vector<CurvePoint> out;
    out.reserve(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double p = grid[k];
        const MarketOutcome o = market_outcome(m, PricePair::make(p, p_b), policy);
        out.push_back({p, o.profit_a, o.demands.d_a, o.cls});
    }
    return out;
}

DeviationReport verify_no_profitable_deviation(const InteractionMatrix& m,
                                               const SelectionPolicy& policy,
                                               const PriceGrid& grid) {
    const double p_star = star_price(m);
    const double band = 1.0 / std::abs(negative_kappa(m));
    const double lam = lambda(m, LambdaVariant::PaperTight);

    DeviationReport rep{p_star, policy_token(policy), grid};
    rep.pi_star = market_outcome(m, PricePair::make(p_star, p_star), policy).profit_a;
    rep.ptol = profit_rel_tol * p_star;
    rep.lambda = lam;
    rep.undercut_bound_holds = p_star <= 2.0 * lam;

    RegionAccumulator undercut{{"undercut", 0.0, p_star - lam}};
    RegionAccumulator lower{{"lower-flank", p_star - lam, p_star - band}};
    RegionAccumulator inner{{"band", p_star - band, p_star + band}};
    RegionAccumulator upper{{"upper-flank", p_star + band, grid.hi()}};

    rep.max_dev_profit = -std::numeric_limits<double>::infinity();
    rep.firm_symmetry = true;
    for (const CurvePoint& c : best_response_profit_curve(m, p_star, policy, grid)) {
        const double dp = c.p_a - p_star;
        if (c.profit_a > rep.max_dev_profit) {
            rep.max_dev_profit = c.profit_a;
            rep.argmax_price = c.p_a;
        }
        if (std::abs(dp) < band) {
            inner.add(c.p_a, c.profit_a);
        } else if (dp > 0.0) {
            upper.add(c.p_a, c.profit_a);
        } else if (c.p_a > p_star - lam) {
            lower.add(c.p_a, c.profit_a);
        } else {
            undercut.add(c.p_a, c.profit_a);
        }

        const MarketOutcome mirror = market_outcome(m, PricePair::make(p_star, c.p_a), policy);
        if (std::abs(mirror.demands.d_b - c.demand_a) > 1e-12) rep.firm_symmetry = false;
    }
    rep.regions = {undercut.r, lower.r, inner.r, upper.r};
    rep.band_argmax = inner.r.argmax.value_or(std::numeric_limits<double>::quiet_NaN());
    rep.foc_consistent = inner.r.argmax && std::abs(*inner.r.argmax - p_star) <= grid.step();

    rep.equilibrium_confirmed = rep.max_dev_profit <= rep.pi_star + rep.ptol;
    if (!rep.firm_symmetry) {
        const double pi_star_b = market_outcome(m, PricePair::make(p_star, p_star), policy).profit_b;
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < grid.size(); ++k) {
            best = std::max(best,
                            market_outcome(m, PricePair::make(p_star, grid[k]), policy).profit_b);
        }
        rep.max_dev_profit_b = best;
        rep.equilibrium_confirmed = rep.equilibrium_confirmed && best <= pi_star_b + rep.ptol;
    }
    return rep;
}

ClaimReport claim_min_q(const InteractionMatrix& m, double p_star, std::size_t samples) {
    require_hotelling(m);
    if (samples == 0) throw Error(ErrorCode::InvalidArgument, "claim check needs samples");
    const double band = 1.0 / std::abs(negative_kappa(m));
    const double lam = lambda(m, LambdaVariant::PaperTight);

    ClaimReport rep{p_star, lam, band};
    const double n = static_cast<double>(samples);

    ClaimRegionCheck& below = rep.below;
    below.lo = std::max(0.0, p_star - lam);
    below.hi = p_star - band;
    if (below.hi > below.lo) {
        for (std::size_t k = 0; k < samples; ++k) {
            const double p = below.lo + (static_cast<double>(k) + 0.5) * (below.hi - below.lo) / n;
            const double q = min_q(m, p, p_star);
            ++below.samples;
            below.max_min_q = std::max(below.max_min_q, q);
            if (q != 0.0 && q != 1.0) {
                if (!below.failures++) below.first_failure = p;
            }
        }
    }

    ClaimRegionCheck& above = rep.above;
    above.lo = p_star + band;
    above.hi = p_star + band + 3.0 * lam;
    for (std::size_t k = 0; k < samples; ++k) {
        const double p = above.lo + (static_cast<double>(k) + 1.0) * (above.hi - above.lo) / n;
        const double q = min_q(m, p, p_star);
        ++above.samples;
        above.max_min_q = std::max(above.max_min_q, q);
        if (q != 0.0) {
            if (!above.failures++) above.first_failure = p;
        }
    }
    rep.passed = below.failures == 0 && above.failures == 0;
    return rep;
}

}  // namespace netduo

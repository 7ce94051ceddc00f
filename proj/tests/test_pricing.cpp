#include <doctest.h>

#include <cmath>

#include "netduo/error.hpp"
#include "netduo/oracle.hpp"
#include "netduo/pricing.hpp"

using namespace netduo;

namespace {

InteractionMatrix M(double a11, double a12, double a21, double a22) {
    return InteractionMatrix::make(a11, a12, a21, a22);
}

const InteractionMatrix ex1 = M(7, 4, 1, 0);
const InteractionMatrix ex2 = M(2, 4, 1, 2.5);

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::Io;
}

}  // namespace

TEST_CASE("star price") {
    CHECK(star_price(ex1) == 4);
    CHECK(star_price(ex2) == 4);
    CHECK(star_price(M(6, 4, 1, 0)) == 8);
    CHECK(code_of([] { star_price(M(1, 0, 0, 1)); }) == ErrorCode::NoHotellingSelection);
}

TEST_CASE("star price with kappa sum -2") {
    const auto m3 = M(4, 1, 1, 0);
    CHECK(kappas(m3).sum() == -2);
    CHECK(star_price(m3) == 1);
}

TEST_CASE("local equilibrium") {
    auto o = local_equilibrium(ex1);
    CHECK(o.prices.p_a == 4);
    CHECK(o.prices.p_b == 4);
    CHECK(o.profile == ConsumerProfile{0.5, 0.5});
    CHECK(o.cls == EquilibriumClassId::SS);
    CHECK(o.demands.d_a == 1);
    CHECK(o.demands.d_b == 1);
    CHECK(o.profit_a == 4);
    CHECK(o.profit_b == 4);

    o = local_equilibrium(ex2);
    CHECK(o.profit_a == 4);
    CHECK(o.profit_b == 4);

    o = local_equilibrium(M(6, 4, 1, 0));
    CHECK(o.prices.p_a == 8);
    CHECK(o.profit_a == 8);
    CHECK(o.profit_b == 8);

    CHECK(code_of([] { local_equilibrium(M(1, 0, 0, 1)); }) == ErrorCode::NoHotellingSelection);
}

TEST_CASE("existence check") {
    auto r = existence_check(ex1, LambdaVariant::PaperTight);
    CHECK(r.holds);
    CHECK(r.lambda == 3);
    CHECK(r.threshold == doctest::Approx(-1.0 / 3).epsilon(1e-15));
    CHECK(r.kappa_sum == -0.5);

    r = existence_check(M(5.5, 4, 1, 0), LambdaVariant::PaperTight);
    CHECK_FALSE(r.holds);
    CHECK(r.lambda == 1.5);
    CHECK(r.kappa_sum == doctest::Approx(-0.125).epsilon(1e-15));

    // kappa sum -0.5 clears every variant's threshold here
    r = existence_check(ex2, LambdaVariant::PaperTight);
    CHECK(r.lambda == 3.5);
    CHECK(r.kappa_sum == -0.5);
    CHECK(r.holds);
    r = existence_check(ex2, LambdaVariant::Simple);
    CHECK(r.lambda == 3.5);
    CHECK(r.holds);
    r = existence_check(ex2, LambdaVariant::Literal);
    CHECK(r.lambda == 6);
    CHECK(r.holds);

    CHECK(code_of([] { existence_check(M(1, 0, 0, 1), LambdaVariant::PaperTight); }) ==
          ErrorCode::NotApplicable);
}

TEST_CASE("existence threshold in a11") {
    // (a11, 4; 1, 0) holds iff a11 > (9 + sqrt 17) / 2
    const double root = (9 + std::sqrt(17.0)) / 2;
    CHECK(existence_check(M(root + 1e-6, 4, 1, 0), LambdaVariant::PaperTight).holds);
    CHECK_FALSE(existence_check(M(root - 1e-6, 4, 1, 0), LambdaVariant::PaperTight).holds);
}

TEST_CASE("price grid") {
    const auto g = PriceGrid::make(0, 12, 1e-3);
    CHECK(g.size() == 12001);
    CHECK(g[0] == 0);
    CHECK(g[4000] == 4);
    CHECK(g[12000] == 12);
    CHECK(g[1234] == 1.234);
    CHECK(PriceGrid::make(1, 1, 0.5).size() == 1);
    CHECK(code_of([] { PriceGrid::make(-1, 1, 0.1); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { PriceGrid::make(2, 1, 0.1); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { PriceGrid::make(0, 1, 0); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { PriceGrid::make(0, INFINITY, 1); }) == ErrorCode::InvalidArgument);

    const auto d = default_deviation_grid(ex1);
    CHECK(d.lo() == 0);
    CHECK(d.hi() == 12);
    CHECK(d.step() == 1e-3);
}

TEST_CASE("deviation check confirms the first example") {
    const auto pol = parse_policy("appendix-a", ex1);
    const auto r = verify_no_profitable_deviation(ex1, pol, PriceGrid::make(0, 12, 1e-3));
    CHECK(r.p_star == 4);
    CHECK(r.pi_star == 4);
    CHECK(r.equilibrium_confirmed);
    CHECK(r.max_dev_profit <= r.pi_star + r.ptol);
    CHECK(r.argmax_price == doctest::Approx(4).epsilon(1e-12));
    CHECK(r.undercut_bound_holds);
    CHECK(r.foc_consistent);
    CHECK(r.firm_symmetry);
    CHECK(r.regions.size() == 4);
    CHECK(r.policy == "appendix-a");
}

TEST_CASE("deviation check on the second example") {
    const auto pol = parse_policy("appendix-a", ex2);
    const auto r = verify_no_profitable_deviation(ex2, pol, PriceGrid::make(0, 12, 1e-3));
    CHECK(r.p_star == 4);
    CHECK(r.equilibrium_confirmed);
    CHECK(r.foc_consistent);
}

TEST_CASE("deviation check errors") {
    CHECK(code_of([] {
              verify_no_profitable_deviation(M(1, 0, 0, 1), policy::MinDemand{},
                                             PriceGrid::make(0, 1, 0.1));
          }) == ErrorCode::NoHotellingSelection);
    // both-split cannot resolve prices far from p*
    CHECK(code_of([] {
              verify_no_profitable_deviation(ex1, policy::BothSplit{},
                                             PriceGrid::make(0, 12, 0.5));
          }) == ErrorCode::ClassAbsent);
}

TEST_CASE("claim on min Q") {
    auto c = claim_min_q(ex1, 4);
    CHECK(c.lambda == 3);
    CHECK(c.band == doctest::Approx(2.0 / 3).epsilon(1e-15));
    CHECK(c.below.lo == 1);
    CHECK(c.below.hi == doctest::Approx(10.0 / 3).epsilon(1e-15));
    CHECK(c.above.lo == doctest::Approx(14.0 / 3).epsilon(1e-15));
    CHECK(c.below.samples >= 1000);
    CHECK(c.above.samples >= 1000);
    CHECK(c.below.failures == 0);
    CHECK(c.above.failures == 0);
    CHECK(c.passed);

    c = claim_min_q(M(6, 4, 1, 0), 8);
    CHECK(c.below.lo == 6);
    CHECK(c.below.hi == doctest::Approx(7.2).epsilon(1e-15));
    CHECK(c.passed);
}

TEST_CASE("property: claim on min Q over random matrices") {
    for (std::uint64_t k = 0; k < 100; ++k) {
        const auto m = random_matrix(derive_seed(23, k), MatrixConstraint::KappaSumNeg);
        const auto c = claim_min_q(m, star_price(m), 1000);
        CHECK(c.lambda >= c.band);
        CHECK(c.below.failures == 0);
        CHECK(c.above.failures == 0);
        CHECK(c.passed);
    }
}

TEST_CASE("profit curves") {
    const auto band = PriceGrid::make(3.5, 4.5, 0.01);
    const auto curve = best_response_profit_curve(ex1, 4, policy::BothSplit{}, band);
    REQUIRE(curve.size() == band.size());
    std::size_t best = 0;
    for (std::size_t k = 0; k < curve.size(); ++k) {
        CHECK(curve[k].p_a == band[k]);
        const double p = band[k];
        CHECK(curve[k].profit_a == doctest::Approx(p * (1 - 0.25 * (p - 4))).epsilon(1e-12));
        if (curve[k].profit_a > curve[best].profit_a) best = k;
    }
    CHECK(curve[best].p_a == 4);
    CHECK(curve[best].profit_a == 4);

    const auto one = best_response_profit_curve(ex1, 4, policy::MinDemand{},
                                                PriceGrid::make(0.5, 0.5, 1));
    REQUIRE(one.size() == 1);
    CHECK(one[0].profit_a == 1.0);
    CHECK(one[0].demand_a == 2);
    CHECK(one[0].cls == EquilibriumClassId::C11);
}

TEST_CASE("property: profit identity") {
    for (std::uint64_t k = 0; k < 200; ++k) {
        const auto m = random_matrix(derive_seed(21, k), MatrixConstraint::KappaSumNeg);
        const double ps = star_price(m);
        for (double f : {0.0, 0.3, 0.9, 1.0, 1.2, 2.5}) {
            const auto pp = PricePair::make(f * ps, ps);
            for (const char* tok : {"min", "max", "appendix-a"}) {
                const auto pol = parse_policy(tok, m);
                const auto o = market_outcome(m, pp, pol);
                const auto d = demand(m, pp, pol);
                CHECK(o.demands.d_a == d.d_a);
                CHECK(o.profit_a == pp.p_a * d.d_a);
                CHECK(o.profit_b == pp.p_b * d.d_b);
            }
        }
    }
}

TEST_CASE("property: existence implies confirmed equilibrium") {
    for (std::uint64_t k = 0; k < 20; ++k) {
        const auto m = random_matrix(derive_seed(22, k), MatrixConstraint::ExistenceOk);
        const auto r = verify_no_profitable_deviation(m, parse_policy("appendix-a", m),
                                                      default_deviation_grid(m));
        CHECK(r.equilibrium_confirmed);
        CHECK(r.undercut_bound_holds);
        CHECK(r.foc_consistent);
        CHECK(r.firm_symmetry);
        const auto c = claim_min_q(m, r.p_star);
        CHECK(c.passed);
    }
}

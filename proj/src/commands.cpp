#include "netduo/commands.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "netduo/error.hpp"

namespace netduo {

namespace {

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string csv_bool(bool b) { return b ? "true" : "false"; }

Json existence_or_null(const InteractionMatrix& m, LambdaVariant v) {
    try {
        return to_json(existence_check(m, v));
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NotApplicable) throw;
        return nullptr;
    }
}

std::optional<double> lambda_or_none(const InteractionMatrix& m, LambdaVariant v) {
    try {
        return lambda(m, v);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NotApplicable) throw;
        return std::nullopt;
    }
}

std::optional<bool> existence_or_none(const InteractionMatrix& m, LambdaVariant v) {
    try {
        return existence_check(m, v).holds;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NotApplicable) throw;
        return std::nullopt;
    }
}

Json lambda_block(const InteractionMatrix& m) {
    const auto tight = lambda_or_none(m, LambdaVariant::PaperTight);
    const auto literal = lambda_or_none(m, LambdaVariant::Literal);
    Json j{{"paper_tight", tight ? Json(*tight) : Json(nullptr)},
           {"simple", lambda(m, LambdaVariant::Simple)},
           {"literal", literal ? Json(*literal) : Json(nullptr)}};
    j["discrepancy"] = tight.has_value() && literal.has_value() && *tight != *literal;
    return j;
}

}  // namespace

std::string analyze_report(const InteractionMatrix& m) {
    const MatrixDiagnostics d = classify(m);
    Json j{{"matrix", to_json(m)}, {"diagnostics", to_json(d)}};

    if (d.kappa1 * d.kappa2 < 0.0) {
        const Orientation o = canonical_orientation(m);
        j["canonical"] = Json{{"swapped", o.swapped}, {"matrix", to_json(o.matrix)}};
    } else {
        j["canonical"] = nullptr;
    }
    j["lambda"] = lambda_block(m);
    j["p_star"] = d.hotelling_possible ? Json(star_price(m)) : Json(nullptr);
    j["existence"] = Json{{"paper_tight", existence_or_null(m, LambdaVariant::PaperTight)},
                          {"simple", existence_or_null(m, LambdaVariant::Simple)},
                          {"literal", existence_or_null(m, LambdaVariant::Literal)}};
    Json notes = Json::array();
    if (j["lambda"]["discrepancy"].get<bool>()) {
        notes.push_back(
            "paper-tight lambda (computed with kappa1 > 0 after relabeling groups) differs from "
            "the literal formula on the original labels; run verify for a grid verdict");
    }
    j["notes"] = std::move(notes);
    return dump(j);
}

std::string equilibria_report(const InteractionMatrix& m, const PricePair& pp) {
    Json j{{"matrix", to_json(m)}, {"p_a", pp.p_a}, {"p_b", pp.p_b}};
    const Json set = to_json(enumerate_equilibria(m, pp));
    for (auto& [k, v] : set.items()) j[k] = v;
    return dump(j);
}

std::string correspondence_csv(const InteractionMatrix& m, double p_b, const PriceGrid& grid) {
    std::string out = "p_a,class,d_a_lo,d_a_hi\n";
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double p = grid[k];
        const EquilibriumSet set = enumerate_equilibria(m, PricePair::make(p, p_b));
        for (const auto& f : set.families) {
            const Interval d = f.demand_range();
            out += format_number(p) + ',' + to_string(f.cls) + ',' + format_number(d.lo) + ',' +
                   format_number(d.hi) + '\n';
        }
    }
    return out;
}

std::string price_eq_report(const InteractionMatrix& m, const SelectionPolicy& policy) {
    const double p = star_price(m);
    Json j{{"matrix", to_json(m)},
           {"p_star", p},
           {"local_equilibrium", to_json(local_equilibrium(m))},
           {"policy", policy_token(policy)},
           {"outcome_at_p_star", to_json(market_outcome(m, PricePair::make(p, p), policy))},
           {"lambda", lambda_block(m)},
           {"existence", Json{{"paper_tight", existence_or_null(m, LambdaVariant::PaperTight)},
                              {"simple", existence_or_null(m, LambdaVariant::Simple)},
                              {"literal", existence_or_null(m, LambdaVariant::Literal)}}}};
    return dump(j);
}

std::string curve_csv(const InteractionMatrix& m, double p_b, const SelectionPolicy& policy,
                      const PriceGrid& grid) {
    std::string out = "p_a,profit_a,demand_a,selected_class\n";
    for (const CurvePoint& c : best_response_profit_curve(m, p_b, policy, grid)) {
        out += format_number(c.p_a) + ',' + format_number(c.profit_a) + ',' +
               format_number(c.demand_a) + ',' + to_string(c.cls) + '\n';
    }
    return out;
}

VerifyOutcome verify_report(const InteractionMatrix& m, const VerifyOptions& opt) {
    Json j{{"matrix", to_json(m)}};
    double p_star = 0.0;
    try {
        p_star = star_price(m);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NoHotellingSelection) throw;
        j["error"] = Json{{"code", error_code_name(e.code())}, {"message", e.what()}};
        j["passed"] = false;
        return {dump(j), false};
    }
    j["p_star"] = p_star;
    Json checks = Json::object();

    const MarketOutcome local = local_equilibrium(m);
    const bool local_ok = local.profile == ConsumerProfile{0.5, 0.5} &&
                          std::abs(local.demands.d_a - 1.0) <= 1e-12 &&
                          std::abs(local.profit_a - p_star) <= 1e-12 * p_star &&
                          std::abs(local.profit_b - p_star) <= 1e-12 * p_star;
    checks["local_equilibrium"] = Json{{"outcome", to_json(local)}, {"passed", local_ok}};

    const ClaimReport claim = claim_min_q(m, p_star, opt.claim_samples);
    checks["claim_min_q"] = to_json(claim);

    bool deviation_ok = false;
    try {
        const SelectionPolicy policy = parse_policy(opt.policy, m);
        const PriceGrid grid = PriceGrid::make(opt.lo.value_or(0.0), opt.hi.value_or(3.0 * p_star),
                                               opt.step.value_or(p_star / 4000.0));
        const DeviationReport dev = verify_no_profitable_deviation(m, policy, grid);
        deviation_ok = dev.equilibrium_confirmed;
        Json dj = to_json(dev);
        dj["passed"] = deviation_ok;
        checks["deviation"] = std::move(dj);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::ClassAbsent) throw;
        checks["deviation"] = Json{{"error", Json{{"code", error_code_name(e.code())},
                                                  {"message", e.what()}}},
                                   {"passed", false}};
    }

    const EquilibriumSet at_star = enumerate_equilibria(m, 0.0);
    const LatticeAgreement agreement = compare_with_lattice(m, 0.0, at_star.families, opt.lattice_n);
    checks["oracle_at_p_star"] = to_json(agreement);

    j["checks"] = std::move(checks);
    j["lambda"] = lambda_block(m);
    j["existence"] = Json{{"paper_tight", existence_or_null(m, LambdaVariant::PaperTight)},
                          {"simple", existence_or_null(m, LambdaVariant::Simple)},
                          {"literal", existence_or_null(m, LambdaVariant::Literal)}};
    if (j["lambda"]["discrepancy"].get<bool>()) {
        std::ostringstream os;
        os << "lambda variants differ (paper-tight "
           << format_number(j["lambda"]["paper_tight"].get<double>()) << ", literal "
           << format_number(j["lambda"]["literal"].get<double>()) << "); deviation sweep "
           << (deviation_ok ? "confirms" : "refutes") << " the equilibrium at p* = "
           << format_number(p_star);
        j["lambda_note"] = os.str();
    }
    const bool passed = local_ok && claim.passed && deviation_ok && agreement.agree();
    j["passed"] = passed;
    return {dump(j), passed};
}

std::optional<int> parse_entry(std::string_view name) noexcept {
    if (name == "a11") return 0;
    if (name == "a12") return 1;
    if (name == "a21") return 2;
    if (name == "a22") return 3;
    return std::nullopt;
}

std::string sweep_csv(const std::array<double, 4>& tmpl, int free_entry, double lo, double hi,
                      double step, bool verify) {
    if (free_entry < 0 || free_entry > 3) {
        throw Error(ErrorCode::InvalidArgument, "free entry index must be 0..3");
    }
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(step > 0.0) || hi < lo || lo < 0.0) {
        std::ostringstream os;
        os << "sweep range [" << lo << ", " << hi << "] step " << step << " is empty or invalid";
        throw Error(ErrorCode::InvalidArgument, os.str());
    }
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;

    std::string out =
        "value,det,kappa1,kappa2,kappa_sum,lambda_tight,lambda_simple,lambda_literal,p_star,"
        "exist_tight,exist_simple,exist_literal,verified,status\n";
    auto opt_num = [](const std::optional<double>& x) { return x ? format_number(*x) : ""; };
    auto opt_bool = [](const std::optional<bool>& x) { return x ? csv_bool(*x) : ""; };

    for (std::size_t k = 0; k < count; ++k) {
        const double v = grid_value(lo, step, k);
        std::array<double, 4> a = tmpl;
        a[free_entry] = v;
        std::string row = format_number(v) + ',';
        try {
            const InteractionMatrix m = InteractionMatrix::make(a[0], a[1], a[2], a[3]);
            const Kappas kap = kappas(m);
            std::optional<double> p_star;
            if (kap.sum() < 0.0) p_star = star_price(m);
            std::optional<bool> verified;
            if (verify && p_star) {
                verified = verify_no_profitable_deviation(m, policy::AppendixA{*p_star},
                                                          default_deviation_grid(m))
                               .equilibrium_confirmed;
            }
            row += format_number(determinant(m)) + ',' + format_number(kap.k1) + ',' +
                   format_number(kap.k2) + ',' + format_number(kap.sum()) + ',' +
                   opt_num(lambda_or_none(m, LambdaVariant::PaperTight)) + ',' +
                   format_number(lambda(m, LambdaVariant::Simple)) + ',' +
                   opt_num(lambda_or_none(m, LambdaVariant::Literal)) + ',' + opt_num(p_star) +
                   ',' + opt_bool(existence_or_none(m, LambdaVariant::PaperTight)) + ',' +
                   opt_bool(existence_or_none(m, LambdaVariant::Simple)) + ',' +
                   opt_bool(existence_or_none(m, LambdaVariant::Literal)) + ',' +
                   opt_bool(verified) + ",ok\n";
        } catch (const Error& e) {
            if (e.code() != ErrorCode::DegenerateMatrix) throw;
            row += ",,,,,,,,,,,,degenerate\n";
        }
        out += row;
    }
    return out;
}

OracleOutcome oracle_report(const std::optional<InteractionMatrix>& m, const OracleOptions& opt) {
    std::vector<InteractionMatrix> mats;
    if (m) {
        mats.push_back(*m);
    } else {
        mats = random_matrices(opt.seed, opt.count, opt.constraint);
    }

    std::size_t cases = 0, agreeing = 0, uncovered_analytic = 0, unmatched_lattice = 0;
    double max_distance = 0.0;
    Json failures = Json::array();
    for (const auto& mat : mats) {
        for (double dp : probe_price_gaps(mat, opt.gaps_per_matrix)) {
            const EquilibriumSet set = enumerate_equilibria(mat, dp);
            const LatticeAgreement a = compare_with_lattice(mat, dp, set.families, opt.lattice_n);
            ++cases;
            uncovered_analytic += a.uncovered_analytic;
            unmatched_lattice += a.unmatched_lattice;
            max_distance = std::max(max_distance, a.max_lattice_distance);
            if (a.agree()) {
                ++agreeing;
            } else if (failures.size() < 20) {
                Json f = to_json(a);
                f["matrix"] = to_json(mat);
                f["dp"] = dp;
                failures.push_back(std::move(f));
            }
        }
    }
    const bool passed = cases > 0 && agreeing == cases;
    Json j{{"seed", opt.seed},
           {"constraint", m ? "explicit-matrix" : to_string(opt.constraint)},
           {"matrices", mats.size()},
           {"lattice_n", opt.lattice_n},
           {"gaps_per_matrix", opt.gaps_per_matrix},
           {"lattice_test", "exact equilibrium within Chebyshev distance 1/(2n)"},
           {"cases", cases},
           {"agreeing", agreeing},
           {"uncovered_analytic_total", uncovered_analytic},
           {"unmatched_lattice_total", unmatched_lattice},
           {"max_lattice_distance", max_distance},
           {"failures", std::move(failures)},
           {"passed", passed}};
    return {dump(j), passed};
}

}  // namespace netduo

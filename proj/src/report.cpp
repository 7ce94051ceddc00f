#include "netduo/report.hpp"

#include <charconv>
#include <cmath>

#include "netduo/error.hpp"

namespace netduo {

namespace {

Json number_or_null(double x) {
    if (!std::isfinite(x)) return nullptr;
    return x;
}

template <class T>
Json optional_number(const std::optional<T>& x) {
    if (!x) return nullptr;
    return number_or_null(*x);
}

Json profile_json(const ConsumerProfile& s) { return Json::array({s.s1, s.s2}); }

}  // namespace

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

InteractionMatrix matrix_from_json(const Json& j) {
    if (!j.is_object()) {
        throw Error(ErrorCode::InvalidArgument, "matrix must be a JSON object with a11..a22");
    }
    double a[4];
    const char* keys[4] = {"a11", "a12", "a21", "a22"};
    for (int k = 0; k < 4; ++k) {
        const auto it = j.find(keys[k]);
        if (it == j.end() || !it->is_number()) {
            throw Error(ErrorCode::InvalidArgument,
                        std::string("matrix entry '") + keys[k] + "' missing or not a number");
        }
        a[k] = it->get<double>();
    }
    return InteractionMatrix::make(a[0], a[1], a[2], a[3]);
}

Json to_json(const InteractionMatrix& m) {
    return Json{{"a11", m.a11()}, {"a12", m.a12()}, {"a21", m.a21()}, {"a22", m.a22()}};
}

Json to_json(const MatrixDiagnostics& d) {
    return Json{
        {"det", d.det},
        {"kappa1", d.kappa1},
        {"kappa2", d.kappa2},
        {"kappa_sum", d.kappa_sum},
        {"lambda", optional_number(d.lambda)},
        {"lambda_simple", d.lambda_simple},
        {"influence1", to_string(d.influence1)},
        {"influence2", to_string(d.influence2)},
        {"corr_class", to_string(d.corr_class)},
        {"hotelling_possible", d.hotelling_possible},
        {"existence_sufficient", d.existence_sufficient},
    };
}

Json to_json(const Interval& i) {
    return Json::array({number_or_null(i.lo), number_or_null(i.hi)});
}

Json to_json(const EquilibriumFamily& f) {
    Json j{{"class", to_string(f.cls)}};
    if (const auto* p = std::get_if<PointShape>(&f.shape)) {
        j["profile"] = profile_json(p->profile);
    } else {
        const auto& seg = std::get<SegmentShape>(f.shape);
        j["free_group"] = static_cast<int>(seg.free_group);
        j["fixed"] = seg.fixed_value;
        j["sigma_range"] = to_json(seg.range);
        j["sigma_closed"] = Json::array({seg.range.lo_closed, seg.range.hi_closed});
    }
    j["dp_interval"] = to_json(f.dp_interval);
    j["dp_closed"] = Json::array({f.dp_interval.lo_closed, f.dp_interval.hi_closed});
    return j;
}

Json to_json(const EquilibriumSet& s) {
    Json fams = Json::array();
    for (const auto& f : s.families) fams.push_back(to_json(f));
    Json q = Json::array();
    for (const auto& v : s.q_values) {
        if (v.is_point()) {
            q.push_back(v.lo);
        } else {
            q.push_back(to_json(v));
        }
    }
    return Json{{"dp", s.dp}, {"families", std::move(fams)}, {"q_values", std::move(q)}};
}

Json to_json(const MarketOutcome& o) {
    return Json{
        {"prices", Json::array({o.prices.p_a, o.prices.p_b})},
        {"profile", profile_json(o.profile)},
        {"class", to_string(o.cls)},
        {"demands", Json::array({o.demands.d_a, o.demands.d_b})},
        {"profits", Json::array({o.profit_a, o.profit_b})},
    };
}

Json to_json(const ExistenceResult& e) {
    return Json{{"variant", to_string(e.variant)},
                {"lambda", e.lambda},
                {"threshold", e.threshold},
                {"kappa_sum", e.kappa_sum},
                {"holds", e.holds}};
}

Json to_json(const DeviationReport& r) {
    Json regions = Json::array();
    for (const auto& reg : r.regions) {
        regions.push_back(Json{{"name", reg.name},
                               {"prices", Json::array({reg.lo, reg.hi})},
                               {"samples", reg.samples},
                               {"max_profit", optional_number(reg.max_profit)},
                               {"argmax", optional_number(reg.argmax)}});
    }
    return Json{
        {"p_star", r.p_star},
        {"policy", r.policy},
        {"grid", Json{{"lo", r.grid.lo()},
                      {"hi", r.grid.hi()},
                      {"step", r.grid.step()},
                      {"points", r.grid.size()}}},
        {"pi_star", r.pi_star},
        {"ptol", r.ptol},
        {"max_dev_profit", r.max_dev_profit},
        {"argmax_price", r.argmax_price},
        {"equilibrium_confirmed", r.equilibrium_confirmed},
        {"region_breakdown", std::move(regions)},
        {"lambda", r.lambda},
        {"undercut_bound_holds", r.undercut_bound_holds},
        {"band_argmax", number_or_null(r.band_argmax)},
        {"foc_consistent", r.foc_consistent},
        {"firm_symmetry", r.firm_symmetry},
        {"max_dev_profit_b", optional_number(r.max_dev_profit_b)},
    };
}

Json to_json(const ClaimReport& r) {
    auto region = [](const ClaimRegionCheck& c) {
        return Json{{"prices", Json::array({c.lo, c.hi})},
                    {"samples", c.samples},
                    {"failures", c.failures},
                    {"first_failure", optional_number(c.first_failure)},
                    {"max_min_q", c.max_min_q}};
    };
    return Json{{"p_star", r.p_star},
                {"lambda", r.lambda},
                {"band", r.band},
                {"below", region(r.below)},
                {"above", region(r.above)},
                {"upper_extent", "p* + band + 3 lambda"},
                {"passed", r.passed}};
}

Json to_json(const LatticeAgreement& a) {
    return Json{{"n", a.n},
                {"radius", a.radius},
                {"lattice_points", a.lattice_points},
                {"analytic_samples", a.analytic_samples},
                {"uncovered_analytic", a.uncovered_analytic},
                {"unmatched_lattice", a.unmatched_lattice},
                {"max_lattice_distance", number_or_null(a.max_lattice_distance)},
                {"agree", a.agree()}};
}

}  // namespace netduo

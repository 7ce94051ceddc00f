#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "netduo/commands.hpp"
#include "netduo/error.hpp"
#include "netduo/oracle.hpp"
#include "netduo/pricing.hpp"

using namespace netduo;
using Clock = std::chrono::steady_clock;

namespace {

struct Verdict {
    bool ok;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double limit_ms, const std::function<Verdict()>& body) {
    Verdict v{false, ""};
    const auto t0 = Clock::now();
    try {
        v = body();
    } catch (const std::exception& e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    const double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    const bool in_time = ms < limit_ms;
    const bool pass = v.ok && in_time;
    if (!pass) ++failures;
    std::printf("%s %d %s: %s (%.3f ms, limit %.0f ms%s)\n", pass ? "PASS" : "FAIL", id, name,
                v.detail.c_str(), ms, limit_ms, in_time ? "" : ", too slow");
    std::fflush(stdout);
}

bool close(double x, double want, double tol = 1e-12) { return std::abs(x - want) <= tol; }

Verdict example_one() {
    const auto m = InteractionMatrix::make(7, 4, 1, 0);
    const double det = determinant(m);
    const Kappas k = kappas(m);
    const double ps = star_price(m);
    const MarketOutcome o = local_equilibrium(m);
    const bool exists = existence_check(m, LambdaVariant::PaperTight).holds;
    const bool ok = close(det, -4) && close(k.k1, 1) && close(k.k2, -1.5) &&
                    std::abs(ps - 4) <= 1e-12 * 4 && close(o.profit_a, 4) &&
                    close(o.profit_b, 4) && exists;
    std::ostringstream os;
    os << "det " << det << ", kappa (" << k.k1 << ", " << k.k2 << "), p* " << ps
       << ", profits (" << o.profit_a << ", " << o.profit_b << "), existence "
       << (exists ? "true" : "false");
    return {ok, os.str()};
}

Verdict example_two() {
    const auto m = InteractionMatrix::make(2, 4, 1, 2.5);
    const double ps = star_price(m);
    const double ks = kappas(m).sum();
    const auto out = verify_report(m, VerifyOptions{});
    const auto j = nlohmann::json::parse(out.report);
    const auto& dev = j["checks"]["deviation"];
    const bool verdict = dev.contains("equilibrium_confirmed") &&
                         dev["equilibrium_confirmed"].is_boolean();
    const bool discrepancy = j["lambda"]["discrepancy"] == true &&
                             j["lambda"]["paper_tight"] == 3.5 && j["lambda"]["literal"] == 6.0;
    const bool ok = std::abs(ps - 4) <= 1e-12 * 4 && close(ks, -0.5) && discrepancy && verdict &&
                    j.contains("lambda_note");
    std::ostringstream os;
    os << "p* " << ps << ", kappa sum " << ks << ", lambda 3.5 vs literal 6 reported, "
       << "equilibrium_confirmed = " << (verdict ? dev["equilibrium_confirmed"].dump() : "missing")
       << " on step " << dev["grid"]["step"].get<double>();
    return {ok, os.str()};
}

Verdict existence_confirmed() {
    const std::size_t count = 50;
    std::size_t confirmed = 0;
    double worst = -INFINITY;
    for (std::size_t k = 0; k < count; ++k) {
        const auto m = random_matrix(derive_seed(2024, k), MatrixConstraint::ExistenceOk);
        const auto r = verify_no_profitable_deviation(m, parse_policy("appendix-a", m),
                                                      default_deviation_grid(m));
        if (r.equilibrium_confirmed) ++confirmed;
        worst = std::max(worst, (r.max_dev_profit - r.pi_star) / r.p_star);
    }
    std::ostringstream os;
    os << confirmed << "/" << count << " confirmed, worst relative gain " << worst;
    return {confirmed == count, os.str()};
}

Verdict oracle_equivalence() {
    OracleOptions opt;
    opt.seed = 4;
    opt.count = 200;
    opt.lattice_n = 200;
    opt.gaps_per_matrix = 21;
    const auto out = oracle_report(std::nullopt, opt);
    const auto j = nlohmann::json::parse(out.report);
    std::ostringstream os;
    os << j["agreeing"] << "/" << j["cases"] << " cases agree on the 201x201 lattice, "
       << "max lattice distance " << j["max_lattice_distance"];
    return {out.passed && j["cases"] == 200 * 21, os.str()};
}

Verdict kappa_positive() {
    const std::size_t count = 100000;
    std::size_t violations = 0;
    for (std::size_t k = 0; k < count; ++k) {
        const Kappas kk = kappas(random_matrix(derive_seed(5, k)));
        if (!(std::max(kk.k1, kk.k2) > 0)) ++violations;
    }
    std::ostringstream os;
    os << violations << " violations over " << count << " matrices";
    return {violations == 0, os.str()};
}

Verdict hotelling_slope() {
    std::size_t points = 0;
    double worst = 0;
    for (std::size_t k = 0; k < 100; ++k) {
        const auto m = random_matrix(derive_seed(6, k), MatrixConstraint::KappaSumNeg);
        const double ks = kappas(m).sum();
        const double ps = star_price(m);
        const double r = both_split_radius(m);
        for (int i = 0; i < 10; ++i) {
            const double p = ps + (-0.9 + 0.2 * i) * r;
            const double h = 1e-5 * std::max(1.0, p);
            const double up = demand(m, PricePair::make(p + h, ps), policy::BothSplit{}).d_a;
            const double dn = demand(m, PricePair::make(p - h, ps), policy::BothSplit{}).d_a;
            const double slope = (up - dn) / (2 * h);
            worst = std::max(worst, std::abs(slope - ks / 2) / std::abs(ks / 2));
            ++points;
        }
    }
    std::ostringstream os;
    os << points << " points, worst relative error " << worst;
    return {points == 1000 && worst <= 1e-6, os.str()};
}

Verdict empty_classes() {
    std::size_t checked = 0;
    std::size_t hits = 0;
    for (std::size_t k = 0; k < 100; ++k) {
        const auto m = canonical_orientation(
                           random_matrix(derive_seed(7, k), MatrixConstraint::PosDetNegSum))
                           .matrix;
        auto gaps = probe_price_gaps(m, 41);
        for (double t : threshold_points(m)) gaps.push_back(t);
        for (double dp : gaps) {
            const auto set = enumerate_equilibria(m, dp);
            for (auto c : {EquilibriumClassId::C10, EquilibriumClassId::C01,
                           EquilibriumClassId::ZS, EquilibriumClassId::OS}) {
                if (set.has(c)) ++hits;
            }
            ++checked;
        }
    }
    std::ostringstream os;
    os << hits << " forbidden families over " << checked << " (matrix, gap) pairs";
    return {hits == 0, os.str()};
}

Verdict claim() {
    const auto m = InteractionMatrix::make(7, 4, 1, 0);
    const auto c = claim_min_q(m, 4);
    const bool regions = close(c.below.lo, 1) && close(c.below.hi, 10.0 / 3, 1e-12) &&
                         close(c.above.lo, 14.0 / 3, 1e-12);
    std::size_t passed = 0;
    for (std::size_t k = 0; k < 50; ++k) {
        const auto r = random_matrix(derive_seed(8, k), MatrixConstraint::ExistenceOk);
        if (claim_min_q(r, star_price(r)).passed) ++passed;
    }
    std::ostringstream os;
    os << "(7,4;1,0) regions (" << c.below.lo << ", " << c.below.hi << ") and p > " << c.above.lo
       << " " << (c.passed ? "hold" : "fail") << ", " << passed << "/50 random matrices pass";
    return {c.passed && regions && passed == 50, os.str()};
}

Verdict threshold_roots() {
    const auto roots = quadratic_root_scan({-1, 9, -16}, 0, 10, 1e-3);
    const double lo = (9 - std::sqrt(17.0)) / 2;
    const double hi = (9 + std::sqrt(17.0)) / 2;
    const bool roots_ok = roots.size() == 2 && close(roots[0], lo, 1e-8) && close(roots[1], hi, 1e-8);

    const double step = 0.05;
    const std::string csv = sweep_csv({0, 4, 1, 0}, 0, 4.5, 8, step, false);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    double flip = NAN;
    bool prev = false;
    bool first = true;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
        const bool holds = cells.size() > 9 && cells[9] == "true";
        if (!first && holds != prev && std::isnan(flip)) flip = std::stod(cells[0]);
        prev = holds;
        first = false;
    }
    const bool flip_ok = !std::isnan(flip) && std::abs(flip - 6.5616) <= step;
    std::ostringstream os;
    os.precision(12);
    os << "roots " << (roots.size() > 0 ? roots[0] : NAN) << ", "
       << (roots.size() > 1 ? roots[1] : NAN) << "; sweep flips at a11 = " << flip;
    return {roots_ok && flip_ok, os.str()};
}

}  // namespace

int main() {
    criterion(1, "example one reproduction", 1, example_one);
    criterion(2, "example two reproduction", 5000, example_two);
    criterion(3, "existence implies a confirmed equilibrium", 120000, existence_confirmed);
    criterion(4, "lattice oracle equivalence", 180000, oracle_equivalence);
    criterion(5, "some kappa is positive", 5000, kappa_positive);
    criterion(6, "both-split slope", 60000, hotelling_slope);
    criterion(7, "empty classes", 60000, empty_classes);
    criterion(8, "claim on min Q", 60000, claim);
    criterion(9, "existence threshold roots", 60000, threshold_roots);
    std::printf("%d of 9 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}

#include "netduo/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "netduo/error.hpp"
#include "netduo/pricing.hpp"

namespace netduo {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// v_i(a) - v_i(b) straight from the payoff definitions.
double payoff_gap(const InteractionMatrix& m, double p_a, double p_b, double s1, double s2,
                  Group g) noexcept {
    const double w1 = m.at(g, Group::first);
    const double w2 = m.at(g, Group::second);
    const double va = -p_a + w1 * s1 + w2 * s2;
    const double vb = -p_b + w1 * (1.0 - s1) + w2 * (1.0 - s2);
    return va - vb;
}

PricePair prices_for_gap(double dp) {
    return PricePair::make(std::max(dp, 0.0), std::max(-dp, 0.0));
}

std::vector<ConsumerProfile> family_samples(const EquilibriumFamily& f) {
    if (const auto* p = std::get_if<PointShape>(&f.shape)) return {p->profile};
    const auto& seg = std::get<SegmentShape>(f.shape);
    std::vector<ConsumerProfile> out;
    constexpr int k = 21;
    for (int t = 0; t <= k; ++t) {
        double x = seg.range.lo + (seg.range.hi - seg.range.lo) * static_cast<double>(t) / k;
        if (t == 0 && !seg.range.lo_closed) continue;
        if (t == k && !seg.range.hi_closed) continue;
        out.push_back(seg.at(x));
    }
    if (out.empty()) out.push_back(seg.at(0.5 * (seg.range.lo + seg.range.hi)));
    return out;
}

double chebyshev(const ConsumerProfile& a, const ConsumerProfile& b) noexcept {
    return std::max(std::abs(a.s1 - b.s1), std::abs(a.s2 - b.s2));
}

}  // namespace

double lattice_slack(const InteractionMatrix& m, int n) noexcept {
    return 2.0 * m.max_entry() / static_cast<double>(n);
}

bool equilibrium_in_box(const InteractionMatrix& m, const PricePair& pp, const ConsumerProfile& s,
                        double r, double tol) {
    const double lo[2] = {std::max(0.0, s.s1 - r), std::max(0.0, s.s2 - r)};
    const double hi[2] = {std::min(1.0, s.s1 + r), std::min(1.0, s.s2 + r)};
    if (lo[0] > hi[0] || lo[1] > hi[1]) return false;
    constexpr double eps = 1e-12;
    const Group groups[2] = {Group::first, Group::second};

    auto gap = [&](int g, const double x[2]) {
        return payoff_gap(m, pp.p_a, pp.p_b, x[0], x[1], groups[g]);
    };
    // 0: everyone at b, 1: everyone at a
    auto pure_ok = [&](int t, double g) { return t == 0 ? g <= tol : g >= -tol; };
    auto inside = [&](int k, double x) { return x >= lo[k] - eps && x <= hi[k] + eps; };

    constexpr int split = 2;
    for (int t1 = 0; t1 <= split; ++t1) {
        for (int t2 = 0; t2 <= split; ++t2) {
            const int t[2] = {t1, t2};
            if ((t1 != split && !inside(0, t1)) || (t2 != split && !inside(1, t2))) continue;

            if (t1 != split && t2 != split) {
                const double x[2] = {double(t1), double(t2)};
                if (pure_ok(t1, gap(0, x)) && pure_ok(t2, gap(1, x))) return true;
                continue;
            }
            if (t1 == split && t2 == split) {
                // gap_g(x) = c_g + 2 a_g1 x1 + 2 a_g2 x2 = 0 for both groups
                const double zero[2] = {0.0, 0.0};
                const double c1 = gap(0, zero), c2 = gap(1, zero);
                const double det = 4.0 * (m.a11() * m.a22() - m.a12() * m.a21());
                const double x1 = (-c1 * 2.0 * m.a22() + c2 * 2.0 * m.a12()) / det;
                const double x2 = (-c2 * 2.0 * m.a11() + c1 * 2.0 * m.a21()) / det;
                if (inside(0, x1) && inside(1, x2)) return true;
                continue;
            }
            const int i = t1 == split ? 0 : 1;
            const int j = 1 - i;
            double x[2];
            x[j] = t[j];
            x[i] = lo[i];
            const double g_lo = gap(i, x);
            const double slope = 2.0 * m.at(groups[i], groups[i]);
            double xa = lo[i], xb = hi[i];
            if (slope > 0.0) {
                const double root = lo[i] - g_lo / slope;
                if (!inside(i, root)) continue;
                xa = xb = std::clamp(root, lo[i], hi[i]);
            } else if (std::abs(g_lo) > tol) {
                continue;
            }
            x[i] = xa;
            if (pure_ok(t[j], gap(j, x))) return true;
            x[i] = xb;
            if (pure_ok(t[j], gap(j, x))) return true;
        }
    }
    return false;
}

std::vector<ConsumerProfile> grid_consumer_equilibria(const InteractionMatrix& m,
                                                      const PricePair& pp,
                                                      const LatticeSpec& spec) {
    if (spec.n < 2) throw Error(ErrorCode::InvalidArgument, "lattice needs n >= 2");
    if (!(spec.tol >= 0.0)) throw Error(ErrorCode::InvalidArgument, "lattice tol must be >= 0");
    const int n = spec.n;
    const double dn = static_cast<double>(n);
    const double tol =
        spec.tol + (spec.test == LatticeTest::Lipschitz ? lattice_slack(m, n) : 0.0);

    auto ok = [&](int idx, double gap) {
        if (idx == n) return gap >= -tol;
        if (idx == 0) return gap <= tol;
        return std::abs(gap) <= tol;
    };

    std::vector<ConsumerProfile> out;
    for (int i = 0; i <= n; ++i) {
        const double s1 = i / dn;
        for (int j = 0; j <= n; ++j) {
            const double s2 = j / dn;
            bool pass;
            if (spec.test == LatticeTest::Cell) {
                pass = equilibrium_in_box(m, pp, {s1, s2}, 0.5 / dn, spec.tol);
            } else {
                pass = ok(i, payoff_gap(m, pp.p_a, pp.p_b, s1, s2, Group::first)) &&
                       ok(j, payoff_gap(m, pp.p_a, pp.p_b, s1, s2, Group::second));
            }
            if (pass) out.push_back({s1, s2});
        }
    }
    return out;
}

double distance_to_family(const ConsumerProfile& s, const EquilibriumFamily& f) noexcept {
    if (const auto* p = std::get_if<PointShape>(&f.shape)) return chebyshev(s, p->profile);
    const auto& seg = std::get<SegmentShape>(f.shape);
    const double free = s.at(seg.free_group);
    const double fixed = s.at(other(seg.free_group));
    const double clamped = std::clamp(free, seg.range.lo, seg.range.hi);
    return std::max(std::abs(free - clamped), std::abs(fixed - seg.fixed_value));
}

LatticeAgreement compare_with_lattice(const InteractionMatrix& m, double dp,
                                      std::span<const EquilibriumFamily> families, int n) {
    LatticeAgreement rep;
    rep.n = n;
    rep.radius = 1.0 / static_cast<double>(n);
    const LatticeSpec spec{n, default_equilibrium_tol, LatticeTest::Cell};
    const auto points = grid_consumer_equilibria(m, prices_for_gap(dp), spec);
    rep.lattice_points = points.size();

    const std::size_t side = static_cast<std::size_t>(n) + 1;
    std::vector<char> pass(side * side, 0);
    for (const auto& p : points) {
        const auto i = static_cast<std::size_t>(std::lround(p.s1 * n));
        const auto j = static_cast<std::size_t>(std::lround(p.s2 * n));
        pass[i * side + j] = 1;
    }
    const double step = rep.radius;
    const double reach = step + 1e-9;

    // analytic -> lattice
    for (const auto& f : families) {
        for (const auto& q : family_samples(f)) {
            ++rep.analytic_samples;
            const int i0 = static_cast<int>(std::floor(q.s1 * n));
            const int j0 = static_cast<int>(std::floor(q.s2 * n));
            bool found = false;
            for (int i = std::max(0, i0 - 1); i <= std::min(n, i0 + 2) && !found; ++i) {
                for (int j = std::max(0, j0 - 1); j <= std::min(n, j0 + 2) && !found; ++j) {
                    if (pass[i * side + j] && chebyshev(q, {i * step, j * step}) <= reach) {
                        found = true;
                    }
                }
            }
            if (!found) ++rep.uncovered_analytic;
        }
    }

    // lattice -> analytic
    for (const auto& p : points) {
        double best = inf;
        for (const auto& f : families) best = std::min(best, distance_to_family(p, f));
        rep.max_lattice_distance = std::max(rep.max_lattice_distance, best);
        if (best > reach) ++rep.unmatched_lattice;
    }
    return rep;
}

double atomic_slack(const InteractionMatrix& m, const FiniteAgentConfig& cfg, Group g) noexcept {
    const double n_own = g == Group::first ? cfg.n1 : cfg.n2;
    return m.at(g, g) / n_own + m.at(g, Group::first) / cfg.n1 + m.at(g, Group::second) / cfg.n2;
}

std::vector<std::pair<int, int>> finite_agent_equilibria(const InteractionMatrix& m,
                                                         const PricePair& pp,
                                                         const FiniteAgentConfig& cfg) {
    if (cfg.n1 < 1 || cfg.n2 < 1) {
        throw Error(ErrorCode::InvalidArgument, "finite-agent groups need at least one agent");
    }
    const std::array<int, 2> size{cfg.n1, cfg.n2};
    std::array<double, 2> tol{};
    for (Group g : {Group::first, Group::second}) {
        tol[index_of(g)] = cfg.gain_tol.value_or(atomic_slack(m, cfg, g));
    }
    const double self = cfg.include_self ? 1.0 : 0.0;

    // payoff of a group-g agent at a firm holding `own` agents of each group,
    // where `own` already reflects who is counted
    auto value = [&](Group g, double price, std::array<double, 2> own) {
        return -price + m.at(g, Group::first) * own[0] / size[0] +
               m.at(g, Group::second) * own[1] / size[1];
    };

    std::vector<std::pair<int, int>> out;
    for (int k1 = 0; k1 <= cfg.n1; ++k1) {
        for (int k2 = 0; k2 <= cfg.n2; ++k2) {
            const std::array<int, 2> at_a{k1, k2};
            bool stable = true;
            for (Group g : {Group::first, Group::second}) {
                const int gi = index_of(g);
                const int oi = 1 - gi;
                const int ka = at_a[gi];
                const int kb = size[gi] - ka;
                std::array<double, 2> a_mass{}, b_mass{};
                if (ka > 0) {
                    // an a-agent of group g moving to b
                    a_mass[gi] = ka - 1 + self;
                    a_mass[oi] = at_a[oi];
                    b_mass[gi] = kb + self;
                    b_mass[oi] = size[oi] - at_a[oi];
                    const double gain = value(g, pp.p_b, b_mass) - value(g, pp.p_a, a_mass);
                    if (gain > tol[gi]) stable = false;
                }
                if (stable && kb > 0) {
                    b_mass[gi] = kb - 1 + self;
                    b_mass[oi] = size[oi] - at_a[oi];
                    a_mass[gi] = ka + self;
                    a_mass[oi] = at_a[oi];
                    const double gain = value(g, pp.p_a, a_mass) - value(g, pp.p_b, b_mass);
                    if (gain > tol[gi]) stable = false;
                }
                if (!stable) break;
            }
            if (stable) out.emplace_back(k1, k2);
        }
    }
    return out;
}

double hausdorff_distance(std::span<const ConsumerProfile> points,
                          std::span<const EquilibriumFamily> families) {
    if (points.empty() && families.empty()) return 0.0;
    if (points.empty() || families.empty()) return inf;
    double h = 0.0;
    for (const auto& p : points) {
        double best = inf;
        for (const auto& f : families) best = std::min(best, distance_to_family(p, f));
        h = std::max(h, best);
    }
    for (const auto& f : families) {
        for (const auto& q : family_samples(f)) {
            double best = inf;
            for (const auto& p : points) best = std::min(best, chebyshev(p, q));
            h = std::max(h, best);
        }
    }
    return h;
}

const char* to_string(MatrixConstraint c) noexcept {
    switch (c) {
        case MatrixConstraint::None: return "none";
        case MatrixConstraint::KappaSumNeg: return "kappa_sum_neg";
        case MatrixConstraint::ExistenceOk: return "existence_ok";
        case MatrixConstraint::PosDetNegSum: return "pos_det_neg_sum";
    }
    return "composite";
}

std::optional<MatrixConstraint> parse_constraint(std::string_view token) noexcept {
    for (MatrixConstraint c : {MatrixConstraint::None, MatrixConstraint::KappaSumNeg,
                               MatrixConstraint::ExistenceOk, MatrixConstraint::PosDetNegSum}) {
        if (token == to_string(c)) return c;
    }
    return std::nullopt;
}

bool satisfies(const InteractionMatrix& m, MatrixConstraint c) {
    const Kappas k = kappas(m);
    if (has(c, MatrixConstraint::KappaSumNeg) && !(k.sum() < 0.0)) return false;
    if (has(c, MatrixConstraint::PosDetNegSum) && !(determinant(m) > 0.0 && k.sum() < 0.0)) {
        return false;
    }
    if (has(c, MatrixConstraint::ExistenceOk)) {
        if (!(k.k1 * k.k2 < 0.0)) return false;
        if (!existence_check(m, LambdaVariant::PaperTight).holds) return false;
    }
    return true;
}

double uniform01(std::mt19937_64& rng) noexcept {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t k) noexcept {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (k + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

InteractionMatrix random_matrix(std::uint64_t seed, MatrixConstraint c) {
    std::mt19937_64 rng(seed);
    for (std::uint64_t draw = 0; draw < max_rejections; ++draw) {
        std::array<double, 4> a{};
        for (double& x : a) x = 10.0 * uniform01(rng);
        const double det = a[0] * a[3] - a[1] * a[2];
        const double norm = std::max(a[0] + a[1], a[2] + a[3]);
        if (!(std::abs(det) > 1e-9 * std::max(1.0, norm * norm))) continue;
        const InteractionMatrix m = InteractionMatrix::make(a[0], a[1], a[2], a[3]);
        if (satisfies(m, c)) return m;
    }
    std::ostringstream os;
    os << "no matrix satisfying constraint after " << max_rejections << " draws (seed " << seed
       << ")";
    throw Error(ErrorCode::SamplingExhausted, os.str());
}

std::vector<InteractionMatrix> random_matrices(std::uint64_t seed, std::size_t count,
                                               MatrixConstraint c) {
    std::vector<InteractionMatrix> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) out.push_back(random_matrix(derive_seed(seed, k), c));
    return out;
}

std::vector<double> quadratic_root_scan(const std::array<double, 3>& coeffs, double lo, double hi,
                                        double step) {
    if (!(step > 0.0) || !(hi >= lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw Error(ErrorCode::InvalidArgument, "root scan needs lo <= hi and step > 0");
    }
    for (double c : coeffs) {
        if (!std::isfinite(c)) throw Error(ErrorCode::InvalidArgument, "non-finite coefficient");
    }
    auto f = [&](double x) { return (coeffs[0] * x + coeffs[1]) * x + coeffs[2]; };
    std::vector<double> roots;
    const auto steps = static_cast<std::size_t>(std::ceil((hi - lo) / step));
    double x0 = lo;
    double f0 = f(x0);
    if (f0 == 0.0) roots.push_back(x0);
    for (std::size_t k = 1; k <= steps; ++k) {
        const double x1 = std::min(hi, lo + static_cast<double>(k) * step);
        const double f1 = f(x1);
        if (f1 == 0.0) {
            roots.push_back(x1);
        } else if (f0 != 0.0 && (f0 < 0.0) != (f1 < 0.0)) {
            double a = x0, b = x1, fa = f0;
            while (b - a > 1e-12) {
                const double mid = 0.5 * (a + b);
                const double fm = f(mid);
                if (fm == 0.0) {
                    a = b = mid;
                    break;
                }
                if ((fm < 0.0) == (fa < 0.0)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        x0 = x1;
        f0 = f1;
    }
    return roots;
}

}  // namespace netduo

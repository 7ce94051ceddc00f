#pragma once

// Brute-force ground truth for the analytic engine: lattice search over
// consumer profiles, finite-agent stability, seeded random matrices and a
// sign-change root scan.

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "netduo/consumer.hpp"

namespace netduo {

enum class LatticeTest {
    Pointwise,  // no group strictly prefers switching at the lattice point itself
    Lipschitz,  // as Pointwise, tolerance widened by 2 * max_entry / n
    Cell,       // an exact equilibrium lies within Chebyshev distance 1/(2n)
};

struct LatticeSpec {
    int n = 200;        // profiles (i/n, j/n), 0 <= i, j <= n
    double tol = 1e-9;  // absolute slack on v(a) - v(b)
    LatticeTest test = LatticeTest::Cell;
};

/// Payoff change from moving a profile by one lattice cell: 2 * max_entry / n.
double lattice_slack(const InteractionMatrix& m, int n) noexcept;

/// Lattice profiles passing spec.test. Sorted by (s1, s2).
std::vector<ConsumerProfile> grid_consumer_equilibria(const InteractionMatrix& m,
                                                      const PricePair& pp,
                                                      const LatticeSpec& spec);

/// True when some exact consumer equilibrium lies in the closed box
/// [s1 - r, s1 + r] x [s2 - r, s2 + r] clipped to the unit square. Decided from
/// the payoff definitions alone: both payoff gaps are affine in the profile.
bool equilibrium_in_box(const InteractionMatrix& m, const PricePair& pp, const ConsumerProfile& s,
                        double r, double tol = 1e-9);

/// Two-sided comparison between analytic families and the cell lattice:
/// every analytic profile has a passing lattice point within one lattice step,
/// and every passing lattice point lies within one lattice step of some family.
struct LatticeAgreement {
    int n = 0;
    double radius = 0;
    std::size_t lattice_points = 0;
    std::size_t analytic_samples = 0;
    std::size_t uncovered_analytic = 0;
    std::size_t unmatched_lattice = 0;
    double max_lattice_distance = 0;  // farthest passing point from the families

    bool agree() const noexcept { return uncovered_analytic == 0 && unmatched_lattice == 0; }
};

LatticeAgreement compare_with_lattice(const InteractionMatrix& m, double dp,
                                      std::span<const EquilibriumFamily> families, int n = 200);

/// Chebyshev distance from a profile to a family.
double distance_to_family(const ConsumerProfile& s, const EquilibriumFamily& f) noexcept;

struct FiniteAgentConfig {
    int n1 = 100;
    int n2 = 100;
    /// Largest tolerated gain from a single switch. Unset: atomic_slack().
    std::optional<double> gain_tol;
    /// Deviator counts herself in the mass of the firm she moves to.
    bool include_self = true;
};

/// a_ii/n_i + a_i1/n1 + a_i2/n2: the self effect of one atom plus the payoff
/// error from rounding a continuum profile onto the count lattice.
double atomic_slack(const InteractionMatrix& m, const FiniteAgentConfig& cfg, Group g) noexcept;

/// Count pairs (k1, k2) of agents at firm a where no agent gains more than the
/// tolerance by switching firms. Sorted lexicographically.
std::vector<std::pair<int, int>> finite_agent_equilibria(const InteractionMatrix& m,
                                                         const PricePair& pp,
                                                         const FiniteAgentConfig& cfg);

/// Symmetric Hausdorff distance (Chebyshev metric) between a finite profile
/// set and the analytic families. Infinite when exactly one side is empty.
double hausdorff_distance(std::span<const ConsumerProfile> points,
                          std::span<const EquilibriumFamily> families);

enum class MatrixConstraint : unsigned {
    None = 0,
    KappaSumNeg = 1u << 0,
    ExistenceOk = 1u << 1,
    PosDetNegSum = 1u << 2,
};

constexpr MatrixConstraint operator|(MatrixConstraint a, MatrixConstraint b) noexcept {
    return static_cast<MatrixConstraint>(static_cast<unsigned>(a) | static_cast<unsigned>(b));
}
constexpr bool has(MatrixConstraint set, MatrixConstraint flag) noexcept {
    return (static_cast<unsigned>(set) & static_cast<unsigned>(flag)) != 0;
}

const char* to_string(MatrixConstraint c) noexcept;
std::optional<MatrixConstraint> parse_constraint(std::string_view token) noexcept;

bool satisfies(const InteractionMatrix& m, MatrixConstraint c);

inline constexpr std::uint64_t max_rejections = 1'000'000;

/// Entries uniform on [0, 10], rejection-sampled for a valid determinant and
/// the constraints. Deterministic in `seed`; Error(SamplingExhausted) after
/// max_rejections draws.
InteractionMatrix random_matrix(std::uint64_t seed, MatrixConstraint c = MatrixConstraint::None);

/// `count` matrices from independent streams derived from `seed`.
std::vector<InteractionMatrix> random_matrices(std::uint64_t seed, std::size_t count,
                                               MatrixConstraint c = MatrixConstraint::None);

/// Per-draw stream seed for index k (splitmix64 of seed and k).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t k) noexcept;

/// Uniform double on [0, 1) from the top 53 bits, independent of the
/// standard library's distribution implementation.
double uniform01(std::mt19937_64& rng) noexcept;

/// Roots of c[0] x^2 + c[1] x + c[2] on [lo, hi]: sign scan at `step`, then
/// bisection to 1e-10. Tangent roots are only found when hit exactly.
std::vector<double> quadratic_root_scan(const std::array<double, 3>& coeffs, double lo, double hi,
                                        double step);

}  // namespace netduo

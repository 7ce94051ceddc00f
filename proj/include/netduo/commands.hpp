#pragma once

// Whole-report producers behind the CLI subcommands. Each returns the exact
// text written to the output file.

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "netduo/report.hpp"

namespace netduo {

std::string analyze_report(const InteractionMatrix& m);

std::string equilibria_report(const InteractionMatrix& m, const PricePair& pp);

/// CSV p_a,class,d_a_lo,d_a_hi; one row per family per grid price.
std::string correspondence_csv(const InteractionMatrix& m, double p_b, const PriceGrid& grid);

/// Local equilibrium, existence verdicts and the outcome under `policy` at (p*, p*).
std::string price_eq_report(const InteractionMatrix& m, const SelectionPolicy& policy);

/// CSV p_a,profit_a,demand_a,selected_class.
std::string curve_csv(const InteractionMatrix& m, double p_b, const SelectionPolicy& policy,
                      const PriceGrid& grid);

struct VerifyOptions {
    std::string policy = "appendix-a";
    std::optional<double> lo;    // default 0
    std::optional<double> hi;    // default 3 p*
    std::optional<double> step;  // default p*/4000
    int lattice_n = 200;
    std::size_t claim_samples = 2000;
};

struct VerifyOutcome {
    std::string report;
    bool passed;
};

VerifyOutcome verify_report(const InteractionMatrix& m, const VerifyOptions& opt);

/// Entry index 0..3 for a11, a12, a21, a22.
std::optional<int> parse_entry(std::string_view name) noexcept;

/// CSV with one row per value of the free entry. Degenerate matrices give a
/// row with status "degenerate". `verify` adds the deviation sweep per row.
std::string sweep_csv(const std::array<double, 4>& tmpl, int free_entry, double lo, double hi,
                      double step, bool verify);

struct OracleOptions {
    std::uint64_t seed = 0;
    std::size_t count = 200;
    MatrixConstraint constraint = MatrixConstraint::None;
    int lattice_n = 200;
    std::size_t gaps_per_matrix = 21;
};

struct OracleOutcome {
    std::string report;
    bool passed;
};

/// Lattice-oracle agreement over `count` seeded random matrices, or over the
/// given matrix alone.
OracleOutcome oracle_report(const std::optional<InteractionMatrix>& m, const OracleOptions& opt);

}  // namespace netduo

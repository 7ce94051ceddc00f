#pragma once

// Interaction structure of the two-group network game and the scalar
// diagnostics derived from it.

#include <array>
#include <optional>
#include <utility>

namespace netduo {

enum class Group { first = 1, second = 2 };

constexpr int index_of(Group g) noexcept { return static_cast<int>(g) - 1; }
constexpr Group other(Group g) noexcept {
    return g == Group::first ? Group::second : Group::first;
}

/// 2x2 nonnegative influence matrix. Entry (i, j) is the utility a member of
/// group i gets per unit mass of group j choosing the same firm.
class InteractionMatrix {
public:
    /// Throws Error(InvalidArgument) for negative or non-finite entries and
    /// Error(DegenerateMatrix) when |det| <= degenerate_tolerance().
    static InteractionMatrix make(double a11, double a12, double a21, double a22);

    double a11() const noexcept { return a_[0]; }
    double a12() const noexcept { return a_[1]; }
    double a21() const noexcept { return a_[2]; }
    double a22() const noexcept { return a_[3]; }

    /// Entry (i, j) with 1-based group semantics.
    double at(Group i, Group j) const noexcept { return a_[2 * index_of(i) + index_of(j)]; }

    /// Row-sum (infinity) norm.
    double norm_inf() const noexcept;
    double max_entry() const noexcept;
    /// 1e-9 * max(1, ||M||_inf^2).
    double degenerate_tolerance() const noexcept;

    /// Relabel groups 1 <-> 2.
    InteractionMatrix swapped() const noexcept;

    std::array<double, 4> entries() const noexcept { return a_; }

    bool operator==(const InteractionMatrix&) const = default;

private:
    explicit InteractionMatrix(std::array<double, 4> a) : a_(a) {}
    std::array<double, 4> a_;
};

enum class InfluenceType { Centripetal, Centrifugal, Neutral };

enum class CorrespondenceClass { PosDet, NegDetA, NegDetB, NotApplicable };

/// PaperTight: the existence-radius in the orientation where kappa_1 > 0.
/// Simple: min row sum, in the original orientation.
/// Literal: the PaperTight formula applied without relabeling the groups.
enum class LambdaVariant { PaperTight, Simple, Literal };

struct Kappas {
    double k1;
    double k2;
    double sum() const noexcept { return k1 + k2; }
};

struct Orientation {
    InteractionMatrix matrix;
    bool swapped;
};

struct MatrixDiagnostics {
    double det;
    double kappa1;
    double kappa2;
    double kappa_sum;
    std::optional<double> lambda;  // PaperTight, absent unless kappa1*kappa2 < 0
    double lambda_simple;
    InfluenceType influence1;
    InfluenceType influence2;
    CorrespondenceClass corr_class;
    bool hotelling_possible;
    bool existence_sufficient;
};

double determinant(const InteractionMatrix& m) noexcept;

Kappas kappas(const InteractionMatrix& m);

/// Requires kappa1*kappa2 < 0, else Error(NotApplicable).
Orientation canonical_orientation(const InteractionMatrix& m);

double lambda(const InteractionMatrix& m, LambdaVariant variant);

InfluenceType influence_type(const InteractionMatrix& m, Group group) noexcept;

CorrespondenceClass correspondence_class(const InteractionMatrix& m);

MatrixDiagnostics classify(const InteractionMatrix& m);

/// Radius of the both-split domain: min over nonzero kappa_i of 1/|kappa_i|.
double both_split_radius(const InteractionMatrix& m);

/// The negative kappa in canonical orientation, i.e. min(kappa1, kappa2).
double negative_kappa(const InteractionMatrix& m);

/// Smallest row sum min_i(a_i1 + a_i2).
double min_row_sum(const InteractionMatrix& m) noexcept;

const char* to_string(InfluenceType t) noexcept;
const char* to_string(CorrespondenceClass c) noexcept;
const char* to_string(LambdaVariant v) noexcept;

}  // namespace netduo

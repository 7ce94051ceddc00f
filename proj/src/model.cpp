#include "netduo/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "netduo/error.hpp"

namespace netduo {

const char* error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::DegenerateMatrix: return "DegenerateMatrix";
        case ErrorCode::NotApplicable: return "NotApplicable";
        case ErrorCode::NoHotellingSelection: return "NoHotellingSelection";
        case ErrorCode::ClassAbsent: return "ClassAbsent";
        case ErrorCode::OutOfDomain: return "OutOfDomain";
        case ErrorCode::Unbounded: return "Unbounded";
        case ErrorCode::SamplingExhausted: return "SamplingExhausted";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

InteractionMatrix InteractionMatrix::make(double a11, double a12, double a21, double a22) {
    const std::array<double, 4> a{a11, a12, a21, a22};
    for (double x : a) {
        if (!std::isfinite(x) || x < 0.0) {
            std::ostringstream os;
            os << "matrix entries must be finite and nonnegative, got " << x;
            throw Error(ErrorCode::InvalidArgument, os.str());
        }
    }
    InteractionMatrix m(a);
    const double det = determinant(m);
    if (!(std::abs(det) > m.degenerate_tolerance())) {
        std::ostringstream os;
        os << "determinant " << det << " is within " << m.degenerate_tolerance() << " of zero";
        throw Error(ErrorCode::DegenerateMatrix, os.str());
    }
    return m;
}

double InteractionMatrix::norm_inf() const noexcept {
    return std::max(a_[0] + a_[1], a_[2] + a_[3]);
}

double InteractionMatrix::max_entry() const noexcept {
    return *std::max_element(a_.begin(), a_.end());
}

double InteractionMatrix::degenerate_tolerance() const noexcept {
    const double n = norm_inf();
    return 1e-9 * std::max(1.0, n * n);
}

InteractionMatrix InteractionMatrix::swapped() const noexcept {
    return InteractionMatrix({a_[3], a_[2], a_[1], a_[0]});
}

double determinant(const InteractionMatrix& m) noexcept {
    return m.a11() * m.a22() - m.a12() * m.a21();
}

Kappas kappas(const InteractionMatrix& m) {
    const double det = determinant(m);
    return {(m.a22() - m.a12()) / det, (m.a11() - m.a21()) / det};
}

Orientation canonical_orientation(const InteractionMatrix& m) {
    const Kappas k = kappas(m);
    if (!(k.k1 * k.k2 < 0.0)) {
        throw Error(ErrorCode::NotApplicable,
                    "canonical orientation needs kappas of opposite sign");
    }
    if (k.k2 > 0.0) return {m.swapped(), true};
    return {m, false};
}

namespace {

double tight_lambda_formula(const InteractionMatrix& m) {
    if (determinant(m) > 0.0) return m.a11() + m.a12();
    return std::max(m.a22() + m.a21(), m.a11() - m.a12());
}

}  // namespace

double min_row_sum(const InteractionMatrix& m) noexcept {
    return std::min(m.a11() + m.a12(), m.a21() + m.a22());
}

double lambda(const InteractionMatrix& m, LambdaVariant variant) {
    switch (variant) {
        case LambdaVariant::Simple:
            return min_row_sum(m);
        case LambdaVariant::PaperTight:
            return tight_lambda_formula(canonical_orientation(m).matrix);
        case LambdaVariant::Literal:
            canonical_orientation(m);  // same applicability condition
            return tight_lambda_formula(m);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown lambda variant");
}

InfluenceType influence_type(const InteractionMatrix& m, Group group) noexcept {
    const double own = m.at(group, group);
    const double cross = m.at(other(group), group);
    if (own > cross) return InfluenceType::Centripetal;
    if (own < cross) return InfluenceType::Centrifugal;
    return InfluenceType::Neutral;
}

CorrespondenceClass correspondence_class(const InteractionMatrix& m) {
    if (!(kappas(m).sum() < 0.0)) return CorrespondenceClass::NotApplicable;
    const InteractionMatrix c = canonical_orientation(m).matrix;
    if (determinant(c) > 0.0) return CorrespondenceClass::PosDet;
    // boundary a21 + a22 == a11 - a12 goes to NegDetA
    if (c.a21() + c.a22() >= c.a11() - c.a12()) return CorrespondenceClass::NegDetA;
    return CorrespondenceClass::NegDetB;
}

MatrixDiagnostics classify(const InteractionMatrix& m) {
    const Kappas k = kappas(m);
    MatrixDiagnostics d{};
    d.det = determinant(m);
    d.kappa1 = k.k1;
    d.kappa2 = k.k2;
    d.kappa_sum = k.sum();
    if (k.k1 * k.k2 < 0.0) d.lambda = lambda(m, LambdaVariant::PaperTight);
    d.lambda_simple = lambda(m, LambdaVariant::Simple);
    d.influence1 = influence_type(m, Group::first);
    d.influence2 = influence_type(m, Group::second);
    d.corr_class = correspondence_class(m);
    d.hotelling_possible = d.kappa_sum < 0.0;
    d.existence_sufficient = d.lambda.has_value() && d.kappa_sum <= -1.0 / *d.lambda;
    return d;
}

double both_split_radius(const InteractionMatrix& m) {
    const Kappas k = kappas(m);
    double r = std::numeric_limits<double>::infinity();
    for (double x : {k.k1, k.k2}) {
        if (x != 0.0) r = std::min(r, 1.0 / std::abs(x));
    }
    return r;
}

double negative_kappa(const InteractionMatrix& m) {
    const Kappas k = kappas(m);
    return std::min(k.k1, k.k2);
}

const char* to_string(InfluenceType t) noexcept {
    switch (t) {
        case InfluenceType::Centripetal: return "centripetal";
        case InfluenceType::Centrifugal: return "centrifugal";
        case InfluenceType::Neutral: return "neutral";
    }
    return "?";
}

const char* to_string(CorrespondenceClass c) noexcept {
    switch (c) {
        case CorrespondenceClass::PosDet: return "PosDet";
        case CorrespondenceClass::NegDetA: return "NegDetA";
        case CorrespondenceClass::NegDetB: return "NegDetB";
        case CorrespondenceClass::NotApplicable: return "NotApplicable";
    }
    return "?";
}

const char* to_string(LambdaVariant v) noexcept {
    switch (v) {
        case LambdaVariant::PaperTight: return "paper-tight";
        case LambdaVariant::Simple: return "simple";
        case LambdaVariant::Literal: return "literal";
    }
    return "?";
}

}  // namespace netduo

#pragma once

// JSON and CSV encodings of engine results.

#include <string>

#include <json.hpp>

#include "netduo/oracle.hpp"
#include "netduo/pricing.hpp"

namespace netduo {

using Json = nlohmann::ordered_json;

/// Shortest round-trip decimal; "inf", "-inf", "nan" for non-finite values.
std::string format_number(double x);

/// Reads {"a11": x, "a12": x, "a21": x, "a22": x}.
InteractionMatrix matrix_from_json(const Json& j);

Json to_json(const InteractionMatrix& m);
Json to_json(const MatrixDiagnostics& d);
Json to_json(const Interval& i);  // [lo, hi], null for infinite ends
Json to_json(const EquilibriumFamily& f);
Json to_json(const EquilibriumSet& s);
Json to_json(const MarketOutcome& o);
Json to_json(const ExistenceResult& e);
Json to_json(const DeviationReport& r);
Json to_json(const ClaimReport& r);
Json to_json(const LatticeAgreement& a);

}  // namespace netduo

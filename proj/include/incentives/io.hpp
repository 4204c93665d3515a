#pragma once

#include <json.hpp>

#include "incentives/contracts.hpp"
#include "incentives/costs.hpp"
#include "incentives/experiments.hpp"
#include "incentives/implementability.hpp"
#include "incentives/oracle.hpp"
#include "incentives/verdict.hpp"

namespace incentives::io {

using Json = nlohmann::json;

/// Finite doubles as numbers, infinities as "inf" / "-inf", NaN as null.
Json real(double v);
/// Inverse of real(); accepts numbers and the strings "inf", "-inf".
double parse_real(const Json& j, const char* what);

Json to_json(const Matrix& m);
Json to_json(const Vector& v);
Json to_json(const Belief& b);
Json to_json(const Experiment& e);
Json to_json(const PosteriorDistribution& d);
Json to_json(const PosteriorCost& c);
Json to_json(const Contract& c);
Json to_json(const GridSpec& g);
Json to_json(const ImplementabilityReport& r);
Json to_json(const CostReport& r);
Json to_json(const OrderVerdict& v);
Json to_json(const OracleResult& r);
Json to_json(const BinaryRentProfile& p);
Json to_json(const PseudoInverse& p);

/// Parsers reject unknown keys and malformed values with InputError.
Matrix matrix_from_json(const Json& j, const char* what);
Vector vector_from_json(const Json& j, const char* what);
Belief belief_from_json(const Json& j);
Experiment experiment_from_json(const Json& j);
PosteriorCost cost_from_json(const Json& j);
/// {"posteriors": [[...]], "weights": [...], "labels": [...]} with weights
/// optional (derived from the prior), or {"kernel": [[...]], "realizations": [...]}.
PosteriorDistribution target_from_json(const Json& j, const Belief& prior);
Contract contract_from_json(const Json& j);
GridSpec grid_from_json(const Json& j);

}  // namespace incentives::io

#pragma once

// Structured documents and tables for every computed object. Floats are
// rounded to 6 significant digits before emission.

#include <string>
#include <vector>

#include <json.hpp>

#include "excess/beta.hpp"
#include "excess/bounds.hpp"
#include "excess/gn.hpp"
#include "excess/hartree.hpp"

namespace excess {

using Json = nlohmann::ordered_json;

/// Value rounded to 6 significant digits (non-finite values pass through).
double round6(double v);
/// "%.6g" rendering.
std::string format6(double v);

Json to_json(const HartreeSolution& sol);
Json to_json(const LemmaReport& rep);
Json to_json(const KineticCertificate& cert);
Json to_json(const GNGroundState& gs);
Json to_json(const BetaEstimate& est);
Json to_json(const AlphaResult& res);
Json to_json(const BoundReport& rep);
Json to_json(const CrossoverReport& rep);
Json to_json(const Constants& c);

/// Header `Z,lieb,nam,hartree,main,a,hZ,best_real,best_integer`.
std::string bounds_csv(const std::vector<BoundReport>& rows);
Json bounds_json(const std::vector<BoundReport>& rows);

}  // namespace excess

#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "cmgiant/distributions.hpp"

namespace cmgiant {

using Json = nlohmann::ordered_json;

/// JSON spec of a distribution, e.g.
///   {"type":"finite","pmf":{"1":0.125,"2":0.75,"3":0.125}}
///   {"type":"poisson","lambda":2.0}
///   {"type":"binomial","n":10,"p":0.2}
///   {"type":"mpoi","mixing":{"type":"pareto","alpha":2.5,"scale":1.2}}
///   {"type":"mpoi","mixing":{"type":"lognormal","location":0.1,"scale2":0.5}}
///   {"type":"mpoi","mixing":{"type":"dirac","x":2.0}}
///   {"type":"thinned","r":0.6,"base":{...}}
///
/// Unknown or missing keys raise SpecError. Finite masses whose sum is off by
/// more than 1e-12 but at most 1e-9 are renormalized; larger gaps are rejected.
DegreeDistribution distribution_from_json(const Json& j);
DegreeDistribution parse_distribution(std::string_view text);

MixingDistribution mixing_from_json(const Json& j);
Json to_json(const MixingDistribution& mu);

/// Inverse of distribution_from_json: the printed spec re-parses to an equal value.
Json to_json(const DegreeDistribution& d);
Json to_json(const FinitePmf& p);

std::string to_spec_string(const DegreeDistribution& d);

}  // namespace cmgiant

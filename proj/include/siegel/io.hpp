#pragma once

#include <string>

#include <json.hpp>

#include "siegel/atlas.hpp"
#include "siegel/congruence.hpp"
#include "siegel/cyclotomic.hpp"
#include "siegel/quartic.hpp"
#include "siegel/ramification.hpp"
#include "siegel/toric.hpp"

namespace siegel {

using Json = nlohmann::ordered_json;

// subgroup spec file: {"level": n, "generators": [[16 integers, row-major]...]};
// entries are reduced mod n on load, every generator is validated
Subgroup parse_subgroup_json(const std::string& text, bool adjoin_center);
Subgroup load_subgroup(const std::string& path, bool adjoin_center);

std::string rational_str(const Rational& r);  // exact "num/den" form
Rational parse_rational(const std::string& s);

Json matrix_to_json(const Mat4& m);
Json report_to_json(const RamificationReport& rep);
Json verdict_to_json(const BoundVerdict& v);
Json identity_report_to_json(const IdentityReport& rep);
Json census_to_json(u32 p, u32 s, const Rational& eps, const CensusResult& res);

// atlas family listings
Json atlas_family_json(const Atlas& atlas, const std::string& family, bool dump);
std::string atlas_family_csv(const Atlas& atlas, const std::string& family);

// exact coordinate expressions for quartic points: rationals, z (the
// field's root of unity), theta (= z^(m/5)), i (= z^(m/4)), + - * ^ and
// parentheses; a point is a colon-separated list of six expressions
Cyclo parse_cyclo_expr(const std::string& text, std::shared_ptr<const CycloField> field);
QuarticPoint parse_quartic_point(const std::string& text, std::shared_ptr<const CycloField> field);

// weight lists "a,b,c;d,e,f" for the toric calculators
std::vector<Weight> parse_weights(const std::string& text);

}  // namespace siegel

#ifndef SWANCOND_JSON_IO_HPP
#define SWANCOND_JSON_IO_HPP

#include <json.hpp>

#include "families.hpp"

namespace swancond {

using Json = nlohmann::ordered_json;

// ---- parsing (throws SwanError{Schema} on malformed input) ----

FieldCtxPtr parse_field(const Json& j, std::optional<long> precision_override);
Rat parse_rat(const Json& j);
Elem parse_elem(const Json& j, const FieldCtxPtr& ctx);
LaurentSeries parse_series(const Json& j, const FieldCtxPtr& ctx);
CoverSpec parse_cover(const Json& j, const FieldCtxPtr& ctx);
PLProfile parse_profile(const Json& j);
TowerSpec parse_tower(const Json& j, const FieldCtxPtr& ctx);
FamilySpec parse_family(const Json& j, const FieldCtxPtr& ctx);
std::vector<Witness> parse_witnesses(const Json& j);
std::vector<GroupEntry> parse_group_data(const Json& j);

// ---- serialization ----

Json rat_json(const Rat& q);
Json fq_json(const FqElem& c);
Json rational_fn_json(const RationalFn& f);
Json place_json(const Place& p);
Json swan_value_json(const SwanValue& v);
Json profile_json(const PLProfile& p);
Json disk_report_json(const DiskReport& r);
Json vc_report_json(const VcReport& r);
Json tower_report_json(const TowerDiskReport& r);
Json certificate_json(const MinimizerCertificate& c);
Json verdict_json(const KinkTheoremVerdict& v);
Json diff_swan_json(const DiffSwanCertificate& c);
Json lambda_result_json(const LambdaResult& l);

std::string profile_csv(const PLProfile& profile, const std::vector<Rat>& sample_radii);

}  // namespace swancond

#endif

#pragma once

#include <json.hpp>

#include "fnb/cover_homotopy.hpp"
#include "fnb/domains.hpp"
#include "fnb/maps.hpp"
#include "fnb/mu_opt.hpp"
#include "fnb/neighbors.hpp"

namespace fnb {

using Json = nlohmann::ordered_json;

Json point_json(const Eigen::Ref<const Eigen::VectorXd>& p);
Json domain_json(const SampledDomain& domain, const CoverAssignment* cover = nullptr);

Json map_json(const MapSpec& map);
/// Accepts {family, m_out, params}; throws InvalidArgument on malformed input.
MapSpec map_from_json(const Json& j);

Json tolerances_json(const NeighborConfig& cfg);
Json certificate_json(const NeighborCertificate& cert);
Json certificates_json(const std::vector<NeighborCertificate>& certs);
Json witness_json(const WitnessReport& report);
Json estimate_json(const HomotopyEstimate& est);
Json cover_certificate_json(const CoverCertificate& cert);
Json mu_json(const MuEstimate& est);
Json thm_json(const ThmReport& report);
Json histogram_json(const Histogram& h);

}  // namespace fnb

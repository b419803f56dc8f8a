#pragma once

#include <string>
#include <utility>

#include "fnb/neighbors.hpp"

namespace fnb::cli {

/// Two panels: the image curve with the extremal witness circle and pair,
/// and the domain with the same pair marked. Only planar images and planar
/// domains are drawn; other panels are left out.
std::string neighbors_svg(const SampledDomain& domain, const ImageSet& images, const NeighborCertificate* extremal,
                          std::pair<std::size_t, std::size_t> pair);

}  // namespace fnb::cli

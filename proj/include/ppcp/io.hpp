#pragma once

#include <json.hpp>

#include "ppcp/offspring.hpp"
#include "ppcp/pointproc.hpp"

namespace ppcp {

/// {"window": {...}, "points": [[x, y], ...], "marks": [...], "origin_index": i}
nlohmann::json pattern_to_json(const PointPattern& pat);
PointPattern pattern_from_json(const nlohmann::json& j);

/// {"type": "thomas", "sigma2": ...} or {"type": "matern", "radius": ...}
nlohmann::json kernel_to_json(const OffspringKernel& k);
OffspringKernel kernel_from_json(const nlohmann::json& j);

}  // namespace ppcp

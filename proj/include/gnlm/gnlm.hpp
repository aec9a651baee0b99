#pragma once

#include "gnlm/distances.hpp"
#include "gnlm/error.hpp"
#include "gnlm/gbf.hpp"
#include "gnlm/gnlm_filter.hpp"
#include "gnlm/image_io.hpp"
#include "gnlm/metrics.hpp"
#include "gnlm/raster.hpp"
#include "gnlm/simulator.hpp"
#include "gnlm/speckle_stats.hpp"

namespace gnlm {
inline constexpr const char* kVersion = "0.1.0";
}

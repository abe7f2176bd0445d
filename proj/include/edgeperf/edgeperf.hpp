#pragma once

#include "edgeperf/error.hpp"
#include "edgeperf/measurements.hpp"
#include "edgeperf/metrics.hpp"
#include "edgeperf/models.hpp"
#include "edgeperf/netsim.hpp"
#include "edgeperf/optimizer.hpp"

namespace edgeperf {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace edgeperf

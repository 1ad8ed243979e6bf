#pragma once

// Umbrella header: rate estimation for converging/diverging block statistics
// via log-log regression along nested-block scans.

#include "scanrate/rng.hpp"
#include "scanrate/scan.hpp"
#include "scanrate/blockstats.hpp"
#include "scanrate/regression.hpp"
#include "scanrate/ratemap.hpp"
#include "scanrate/estimators.hpp"
#include "scanrate/simulate.hpp"
#include "scanrate/experiment.hpp"
#include "scanrate/io.hpp"

// Umbrella header.

#pragma once

#include "urnlab/batch.hpp"
#include "urnlab/cli.hpp"
#include "urnlab/config.hpp"
#include "urnlab/io.hpp"
#include "urnlab/reinforcement.hpp"
#include "urnlab/rng.hpp"
#include "urnlab/stats.hpp"
#include "urnlab/thresholds.hpp"
#include "urnlab/trajectory.hpp"
#include "urnlab/urn.hpp"
#include "urnlab/verify.hpp"

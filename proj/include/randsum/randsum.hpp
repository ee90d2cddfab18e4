#pragma once

// Umbrella header for the randsum toolkit.

#include "randsum/cf_engine.hpp"
#include "randsum/conditions.hpp"
#include "randsum/distributions.hpp"
#include "randsum/harness.hpp"
#include "randsum/index_laws.hpp"
#include "randsum/metrics.hpp"
#include "randsum/nvm.hpp"
#include "randsum/report.hpp"
#include "randsum/scenario.hpp"
#include "randsum/scheme.hpp"

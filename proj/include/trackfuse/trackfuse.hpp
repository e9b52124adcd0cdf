#pragma once

#include "trackfuse/core.hpp"
#include "trackfuse/fcm.hpp"
#include "trackfuse/fusion.hpp"
#include "trackfuse/lbfgs.hpp"
#include "trackfuse/metrics.hpp"
#include "trackfuse/mlp.hpp"
#include "trackfuse/oracle.hpp"
#include "trackfuse/random.hpp"
#include "trackfuse/scenario.hpp"
#include "trackfuse/standardizer.hpp"
#include "trackfuse/vc.hpp"

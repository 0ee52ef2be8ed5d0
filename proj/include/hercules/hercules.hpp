#pragma once

#include "hercules/baselines.hpp"
#include "hercules/core.hpp"
#include "hercules/fairness.hpp"
#include "hercules/ratecontrol.hpp"
#include "hercules/scenario.hpp"
#include "hercules/sim.hpp"
#include "hercules/utility.hpp"

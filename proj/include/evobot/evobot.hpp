#pragma once

#include "evobot/analysis.hpp"
#include "evobot/body.hpp"
#include "evobot/calibrate.hpp"
#include "evobot/config.hpp"
#include "evobot/controller.hpp"
#include "evobot/experiment.hpp"
#include "evobot/lsystem.hpp"
#include "evobot/moea.hpp"
#include "evobot/random.hpp"
#include "evobot/records.hpp"
#include "evobot/sim.hpp"
#include "evobot/stats.hpp"
#include "evobot/svg.hpp"

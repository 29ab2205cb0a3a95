#pragma once

#include "herdsim/attacker.hpp"
#include "herdsim/defender_control.hpp"
#include "herdsim/environment.hpp"
#include "herdsim/errors.hpp"
#include "herdsim/formation_field.hpp"
#include "herdsim/geom.hpp"
#include "herdsim/herding.hpp"
#include "herdsim/scenario.hpp"
#include "herdsim/sim.hpp"
#include "herdsim/validation.hpp"

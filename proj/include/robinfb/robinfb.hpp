#pragma once

#include "robinfb/certificates.hpp"
#include "robinfb/config.hpp"
#include "robinfb/energy.hpp"
#include "robinfb/field_io.hpp"
#include "robinfb/geometry.hpp"
#include "robinfb/grid.hpp"
#include "robinfb/maxflow.hpp"
#include "robinfb/outer_loop.hpp"
#include "robinfb/presets.hpp"
#include "robinfb/set_solver.hpp"
#include "robinfb/state_solver.hpp"

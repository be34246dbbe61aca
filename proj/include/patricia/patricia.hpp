#pragma once

#include "asymptotics.hpp"
#include "brute_force.hpp"
#include "cseries.hpp"
#include "numerics.hpp"
#include "poisson_mellin.hpp"
#include "profile_exact.hpp"
#include "simulator.hpp"
#include "xi_engine.hpp"

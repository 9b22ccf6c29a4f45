#pragma once

#include "rasqp/active_set.hpp"
#include "rasqp/bench.hpp"
#include "rasqp/error.hpp"
#include "rasqp/generators.hpp"
#include "rasqp/index_set.hpp"
#include "rasqp/model.hpp"
#include "rasqp/problem_io.hpp"
#include "rasqp/prop31.hpp"
#include "rasqp/rng.hpp"
#include "rasqp/solvers.hpp"
#include "rasqp/spd_solve.hpp"

#pragma once

#include "galcount/arith.hpp"
#include "galcount/asymptotics.hpp"
#include "galcount/config.hpp"
#include "galcount/dirichlet_euler.hpp"
#include "galcount/error.hpp"
#include "galcount/global_classes.hpp"
#include "galcount/group_core.hpp"
#include "galcount/local_cohomology.hpp"
#include "galcount/local_conditions.hpp"
#include "galcount/poisson.hpp"
#include "galcount/runner.hpp"

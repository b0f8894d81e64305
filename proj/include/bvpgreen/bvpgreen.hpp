#pragma once

#include "bvpgreen/errors.hpp"
#include "bvpgreen/linalg.hpp"
#include "bvpgreen/quadrature.hpp"
#include "bvpgreen/ode.hpp"
#include "bvpgreen/boundary.hpp"
#include "bvpgreen/green.hpp"
#include "bvpgreen/convergence.hpp"
#include "bvpgreen/scenario.hpp"

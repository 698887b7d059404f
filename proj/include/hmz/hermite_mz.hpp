#pragma once

#include "hmz/errors.hpp"
#include "hmz/hermite.hpp"
#include "hmz/tridiagonal.hpp"
#include "hmz/quadrature.hpp"
#include "hmz/panel_integration.hpp"
#include "hmz/function_space.hpp"
#include "hmz/interpolation.hpp"
#include "hmz/expansion.hpp"
#include "hmz/parallel.hpp"
#include "hmz/random.hpp"
#include "hmz/regression.hpp"
#include "hmz/experiments.hpp"
#include "hmz/report.hpp"

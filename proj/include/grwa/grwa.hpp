#pragma once

// Umbrella header for the numerical library (everything except the Eigen
// based reference oracle and the I/O helpers).

#include "grwa/density.hpp"
#include "grwa/dynamics.hpp"
#include "grwa/error.hpp"
#include "grwa/model.hpp"
#include "grwa/observables.hpp"
#include "grwa/parallel.hpp"
#include "grwa/phase_space.hpp"
#include "grwa/specfun.hpp"
#include "grwa/spectrum.hpp"

#pragma once

// Umbrella header: pulls in the whole library.

#include "gapspec/bifurcation.hpp"
#include "gapspec/chebyshev.hpp"
#include "gapspec/config.hpp"
#include "gapspec/io.hpp"
#include "gapspec/operators.hpp"
#include "gapspec/parallel.hpp"
#include "gapspec/potential.hpp"
#include "gapspec/soliton.hpp"
#include "gapspec/spectrum.hpp"

#pragma once

// Finite-dimensional quantum mechanics on the Schwinger grid: Weyl pairs,
// the finite Heisenberg group and its SL(2,Z_N) automorphisms, Gauss-sum
// propagators, the emergent lattice Lagrangian, and mutually unbiased bases.

#include "weylgrid/errors.hpp"
#include "weylgrid/modular.hpp"
#include "weylgrid/weyl.hpp"
#include "weylgrid/gauss.hpp"
#include "weylgrid/grid.hpp"
#include "weylgrid/mub.hpp"

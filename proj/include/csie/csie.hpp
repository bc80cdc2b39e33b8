#pragma once

// Umbrella header for the combined-source integral equation solver.

#include "csie/assembly.hpp"
#include "csie/common.hpp"
#include "csie/excitation.hpp"
#include "csie/farfield.hpp"
#include "csie/gmres.hpp"
#include "csie/job.hpp"
#include "csie/kernels.hpp"
#include "csie/mesh.hpp"
#include "csie/mie.hpp"
#include "csie/potentials.hpp"
#include "csie/quadrature.hpp"
#include "csie/rwg.hpp"
#include "csie/shapes.hpp"
#include "csie/system.hpp"

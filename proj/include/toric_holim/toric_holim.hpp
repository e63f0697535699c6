#pragma once

#include "toric_holim/errors.hpp"
#include "toric_holim/scalar.hpp"
#include "toric_holim/linalg.hpp"
#include "toric_holim/integer_matrix.hpp"
#include "toric_holim/feasibility.hpp"
#include "toric_holim/lattice_fan.hpp"
#include "toric_holim/complexes.hpp"
#include "toric_holim/diagram.hpp"
#include "toric_holim/graded_modules.hpp"
#include "toric_holim/presheaf.hpp"
#include "toric_holim/holim.hpp"
#include "toric_holim/colocal.hpp"

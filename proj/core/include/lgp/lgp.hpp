#pragma once

#include "lgp/carnot.hpp"
#include "lgp/errors.hpp"
#include "lgp/functionals.hpp"
#include "lgp/group_checks.hpp"
#include "lgp/io.hpp"
#include "lgp/kernel.hpp"
#include "lgp/lattice.hpp"
#include "lgp/limit_lab.hpp"
#include "lgp/parallel.hpp"
#include "lgp/polynomial.hpp"
#include "lgp/solver.hpp"

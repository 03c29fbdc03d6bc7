#pragma once

#include "shiftforge/errors.hpp"
#include "shiftforge/limits.hpp"
#include "shiftforge/rings.hpp"
#include "shiftforge/sparse_poly.hpp"
#include "shiftforge/circuit.hpp"
#include "shiftforge/equation_system.hpp"
#include "shiftforge/quadratizer.hpp"
#include "shiftforge/hn_reduce.hpp"
#include "shiftforge/amplifier.hpp"
#include "shiftforge/max3lin.hpp"
#include "shiftforge/oracles.hpp"

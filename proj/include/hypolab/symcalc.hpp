#pragma once

#include "symcalc/adjoint.hpp"
#include "symcalc/generator.hpp"
#include "symcalc/numeric.hpp"
#include "symcalc/poly.hpp"
#include "symcalc/rational.hpp"
#include "symcalc/vector_field.hpp"

#pragma once

#include "lyapunov/drift.hpp"
#include "lyapunov/quadratic.hpp"

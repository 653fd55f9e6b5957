#pragma once

#include "models/catalog.hpp"
#include "models/conditions.hpp"
#include "models/lattice.hpp"

#pragma once

#include "simulate/ensemble.hpp"
#include "simulate/estimate.hpp"
#include "simulate/oracle.hpp"
#include "simulate/sde.hpp"

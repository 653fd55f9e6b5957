#pragma once

#include "decaylab/experiments.hpp"
#include "decaylab/probes.hpp"
#include "decaylab/spec.hpp"
#include "decaylab/test_functions.hpp"
#include "decaylab/verdict.hpp"

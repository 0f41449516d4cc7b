#pragma once

// Umbrella header for the continuous-time open quantum walk toolkit.

#include "ctoqw/tolerances.hpp"
#include "ctoqw/graph.hpp"
#include "ctoqw/dense.hpp"
#include "ctoqw/lindblad.hpp"
#include "ctoqw/dynamics.hpp"
#include "ctoqw/steady_state.hpp"
#include "ctoqw/io.hpp"

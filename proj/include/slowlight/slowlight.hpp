#pragma once

// Semiclassical EIT-4WM slow-light toolkit: transfer-function evaluation,
// spectral pulse propagation, a time-domain reference integrator, pulse
// figures of merit, and global parameter fitting.

#include "slowlight/angular.hpp"
#include "slowlight/config.hpp"
#include "slowlight/errors.hpp"
#include "slowlight/fitting.hpp"
#include "slowlight/medium.hpp"
#include "slowlight/metrics.hpp"
#include "slowlight/oracle.hpp"
#include "slowlight/propagation.hpp"
#include "slowlight/trace.hpp"
#include "slowlight/trace_io.hpp"
#include "slowlight/transfer.hpp"
#include "slowlight/units.hpp"

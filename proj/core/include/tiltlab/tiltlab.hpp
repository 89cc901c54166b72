#pragma once

#include "tiltlab/asym1d.hpp"
#include "tiltlab/asymhd.hpp"
#include "tiltlab/diagnostics.hpp"
#include "tiltlab/dist.hpp"
#include "tiltlab/errors.hpp"
#include "tiltlab/io.hpp"
#include "tiltlab/limit_target.hpp"
#include "tiltlab/limitlab.hpp"
#include "tiltlab/numerics.hpp"
#include "tiltlab/rng.hpp"
#include "tiltlab/sample_set.hpp"
#include "tiltlab/tilt.hpp"
#include "tiltlab/unbounded.hpp"

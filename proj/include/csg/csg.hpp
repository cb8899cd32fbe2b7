#pragma once

#include "csg/core.hpp"
#include "csg/rng.hpp"
#include "csg/instances.hpp"
#include "csg/neighborhoods.hpp"
#include "csg/counter.hpp"
#include "csg/grasp.hpp"
#include "csg/pathrelink.hpp"
#include "csg/exact.hpp"
#include "csg/bench.hpp"

#pragma once

#include "normkit/core.hpp"
#include "normkit/spaces.hpp"
#include "normkit/duality.hpp"
#include "normkit/convexgeo.hpp"
#include "normkit/cones.hpp"
#include "normkit/opnorm.hpp"
#include "normkit/tracenorm.hpp"
#include "normkit/quotient.hpp"
#include "normkit/vecfun.hpp"
#include "normkit/selftest.hpp"

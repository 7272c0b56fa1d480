#pragma once

#include "crosshair/attack.hpp"
#include "crosshair/endpoint.hpp"
#include "crosshair/error.hpp"
#include "crosshair/fingerprint.hpp"
#include "crosshair/grid.hpp"
#include "crosshair/net.hpp"
#include "crosshair/noise.hpp"
#include "crosshair/router.hpp"
#include "crosshair/simlab.hpp"
#include "crosshair/wire.hpp"
#include "crosshair/zoo.hpp"
#include "crosshair/zoo_io.hpp"

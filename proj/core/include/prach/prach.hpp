// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "prach/analytic.hpp"
#include "prach/channel.hpp"
#include "prach/correlation.hpp"
#include "prach/detect.hpp"
#include "prach/error.hpp"
#include "prach/harness.hpp"
#include "prach/receiver.hpp"
#include "prach/rng.hpp"
#include "prach/scenario.hpp"
#include "prach/selftest.hpp"
#include "prach/specfun.hpp"
#include "prach/zadoff_chu.hpp"

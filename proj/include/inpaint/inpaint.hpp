#pragma once

// Umbrella header.

#include "inpaint/core.hpp"
#include "inpaint/engine.hpp"
#include "inpaint/matcher.hpp"
#include "inpaint/metrics.hpp"
#include "inpaint/png_io.hpp"
#include "inpaint/priority.hpp"

#pragma once

// Umbrella header.

#include "shiftest/config.hpp"
#include "shiftest/config_io.hpp"
#include "shiftest/densities.hpp"
#include "shiftest/errors.hpp"
#include "shiftest/estimator.hpp"
#include "shiftest/kde.hpp"
#include "shiftest/kernels.hpp"
#include "shiftest/outputs.hpp"
#include "shiftest/quadrature.hpp"
#include "shiftest/rng.hpp"
#include "shiftest/shapes.hpp"
#include "shiftest/simulate.hpp"
#include "shiftest/stats.hpp"
#include "shiftest/version.hpp"

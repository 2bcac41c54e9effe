#pragma once

// Umbrella header for the whole library.

#include "circle_means.hpp"
#include "coeff_poly.hpp"
#include "construction.hpp"
#include "enumeration.hpp"
#include "fft.hpp"
#include "growth.hpp"
#include "hypercyclicity.hpp"
#include "inequality_checks.hpp"
#include "logdomain.hpp"
#include "parallel.hpp"
#include "rational.hpp"
#include "report.hpp"

#pragma once

// Umbrella header for the quaternionic S-functional calculus library.

#include "squatcalc/errors.hpp"
#include "squatcalc/fixtures.hpp"
#include "squatcalc/functional_calculus.hpp"
#include "squatcalc/quat_matrix.hpp"
#include "squatcalc/quaternion.hpp"
#include "squatcalc/s_resolvent.hpp"
#include "squatcalc/s_spectrum.hpp"
#include "squatcalc/serialization.hpp"
#include "squatcalc/slice_function.hpp"

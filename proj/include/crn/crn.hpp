#pragma once

#include "crn/child_selection.hpp"
#include "crn/dsl.hpp"
#include "crn/kinetics.hpp"
#include "crn/linalg.hpp"
#include "crn/network.hpp"
#include "crn/polynomial.hpp"
#include "crn/rational.hpp"
#include "crn/symbolic.hpp"
#include "crn/validation.hpp"

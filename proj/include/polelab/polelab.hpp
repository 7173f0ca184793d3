#pragma once

#include "polelab/errors.hpp"
#include "polelab/expression.hpp"
#include "polelab/field.hpp"
#include "polelab/geodesic.hpp"
#include "polelab/harness.hpp"
#include "polelab/manifold.hpp"
#include "polelab/numeric.hpp"
#include "polelab/point.hpp"
#include "polelab/quadrature.hpp"
#include "polelab/scenario.hpp"
#include "polelab/sphere_rule.hpp"
#include "polelab/symmetrization.hpp"

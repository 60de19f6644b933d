#pragma once

#include "obtuse/big.hpp"
#include "obtuse/config_search.hpp"
#include "obtuse/constructions/arc_triple.hpp"
#include "obtuse/constructions/fixed_point.hpp"
#include "obtuse/constructions/self_similar.hpp"
#include "obtuse/distribution_spec.hpp"
#include "obtuse/errors.hpp"
#include "obtuse/exact_bounds.hpp"
#include "obtuse/geometry.hpp"
#include "obtuse/io.hpp"
#include "obtuse/monte_carlo.hpp"
#include "obtuse/quadrature.hpp"
#include "obtuse/random.hpp"
#include "obtuse/special_functions.hpp"
#include "obtuse/sphere_model.hpp"

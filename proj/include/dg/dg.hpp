#pragma once

#include "dg/clip.hpp"
#include "dg/errors.hpp"
#include "dg/flow.hpp"
#include "dg/geometry.hpp"
#include "dg/horseshoe.hpp"
#include "dg/integrate.hpp"
#include "dg/manifold.hpp"
#include "dg/melnikov.hpp"
#include "dg/numeric_manifold.hpp"
#include "dg/polyline.hpp"
#include "dg/quadrature.hpp"
#include "dg/special.hpp"

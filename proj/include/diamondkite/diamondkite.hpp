#pragma once

// Umbrella header for the diamond-kite meshing library.

#include "diamondkite/adapt.hpp"
#include "diamondkite/checks.hpp"
#include "diamondkite/coloring.hpp"
#include "diamondkite/dkm_io.hpp"
#include "diamondkite/duals.hpp"
#include "diamondkite/errors.hpp"
#include "diamondkite/field_config.hpp"
#include "diamondkite/lattice.hpp"
#include "diamondkite/mesh.hpp"
#include "diamondkite/packing.hpp"
#include "diamondkite/replacement.hpp"
#include "diamondkite/size_field.hpp"
#include "diamondkite/stats.hpp"
#include "diamondkite/svg.hpp"
#include "diamondkite/tutte.hpp"

#ifndef LSSW_LSSW_HPP
#define LSSW_LSSW_HPP

// Wasserstein geometry of one-dimensional location-scale-shape models:
// densities, Wasserstein scores, information matrices, flat coordinates,
// geodesics, optimal-transport maps, and exact 1-D W2 distances, with GEV
// and GPD as the built-in families.

#include "lssw/base_density.hpp"
#include "lssw/errors.hpp"
#include "lssw/geodesics.hpp"
#include "lssw/interp.hpp"
#include "lssw/lss_model.hpp"
#include "lssw/metric.hpp"
#include "lssw/numerics.hpp"
#include "lssw/rng.hpp"
#include "lssw/scores.hpp"
#include "lssw/special.hpp"
#include "lssw/verify.hpp"

#endif

#pragma once

// Umbrella header for the numerical core.

#include "dampwave/bounds.hpp"
#include "dampwave/char_poly.hpp"
#include "dampwave/closed_form.hpp"
#include "dampwave/decay.hpp"
#include "dampwave/dense_eigen.hpp"
#include "dampwave/energy.hpp"
#include "dampwave/errors.hpp"
#include "dampwave/filter.hpp"
#include "dampwave/initial_data.hpp"
#include "dampwave/integrate.hpp"
#include "dampwave/matching.hpp"
#include "dampwave/modal.hpp"
#include "dampwave/model.hpp"
#include "dampwave/observability.hpp"
#include "dampwave/spectrum.hpp"
#include "dampwave/tridiagonal.hpp"

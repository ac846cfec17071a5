#pragma once

#include "wderiv/types.hpp"
#include "wderiv/scalar.hpp"
#include "wderiv/hyperseries.hpp"
#include "wderiv/quadrature.hpp"
#include "wderiv/whittaker.hpp"
#include "wderiv/log_integrals.hpp"
#include "wderiv/param_derivs.hpp"
#include "wderiv/oracle.hpp"
#include "wderiv/tables.hpp"

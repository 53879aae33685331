#pragma once

// Unilateral spatial AR(1,1) field toolkit:
//   X(k,l) = alpha X(k-1,l) + beta X(k,l-1) + gamma X(k-1,l-1) + eps(k,l),
//   X(k,0) = X(0,l) = 0.

#include "sar2d/asymptotics.hpp"
#include "sar2d/binomial.hpp"
#include "sar2d/covariance.hpp"
#include "sar2d/error.hpp"
#include "sar2d/macoef.hpp"
#include "sar2d/numeric.hpp"
#include "sar2d/params.hpp"
#include "sar2d/philox.hpp"
#include "sar2d/report_io.hpp"
#include "sar2d/simulate.hpp"
#include "sar2d/special.hpp"

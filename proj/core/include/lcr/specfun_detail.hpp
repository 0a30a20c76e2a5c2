// SPDX-License-Identifier: Apache-2.0
//
// Individual evaluation branches of log_bessel_i, exposed so the switchover
// between them can be checked.

#pragma once

namespace lcr::specfun::detail {

double log_bessel_i_series(double order, double x);

// Large-argument Hankel expansion. Returns false when the expansion does not
// reach full precision before diverging (large order relative to x).
bool log_bessel_i_asymptotic(double order, double x, double& out);

}  // namespace lcr::specfun::detail

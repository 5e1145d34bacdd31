// SPDX-License-Identifier: Apache-2.0

#ifndef NLSWAG_BOXCAR_HPP
#define NLSWAG_BOXCAR_HPP

#include "nlswag/grid.hpp"

namespace nlswag {

// k x k multilook reference filter.  Windows are clipped at borders (no
// padding); ENL is the number of pixels actually averaged.  k must be odd.
EstimateBundle boxcar(const SlcPair& pair, int k);

}  // namespace nlswag

#endif

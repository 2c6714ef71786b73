#pragma once

#include "gridadapt/image.hpp"

namespace gridadapt {

/// Exact Euclidean distance from every pixel to the nearest nonzero pixel of a
/// 2-D mask. Separable lower-envelope-of-parabolas transform: one pass down
/// the columns, one along the rows. Throws EvaluationError on an empty mask.
Image distanceTransform(const Image& mask);

}  // namespace gridadapt

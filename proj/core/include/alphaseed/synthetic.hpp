#pragma once

#include <cstdint>

#include "alphaseed/dataset.hpp"

namespace alphaseed {

// Two 2-D Gaussian blobs, labels +1/-1, deterministic for a given seed
// (hand-rolled Box-Muller so results do not depend on the standard library's
// distribution internals). Demo, test and benchmark data.
struct BlobsSpec {
    int n = 300;
    std::uint64_t seed = 1;
    double center_x = 1.0;  // class centers at (+-center_x, 0)
    double sigma = 1.0;
};

Dataset make_blobs(const BlobsSpec& spec);

} // namespace alphaseed

#include "alphaseed/synthetic.hpp"

#include <cmath>
#include <random>

namespace alphaseed {

namespace {

// Box-Muller over mt19937_64; bit-stable across standard libraries.
struct Gauss {
    std::mt19937_64 rng;
    bool have_spare = false;
    double spare = 0.0;

    explicit Gauss(std::uint64_t seed) : rng(seed) {}

    double uniform01() {
        // 53-bit mantissa, strictly inside (0, 1].
        return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
    }

    double operator()() {
        if (have_spare) {
            have_spare = false;
            return spare;
        }
        const double u = uniform01();
        const double v = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u));
        const double theta = 2.0 * 3.14159265358979323846 * v;
        spare = r * std::sin(theta);
        have_spare = true;
        return r * std::cos(theta);
    }
};

} // namespace

Dataset make_blobs(const BlobsSpec& spec) {
    Gauss gauss(spec.seed);
    Dataset ds;
    ds.instances.reserve(static_cast<std::size_t>(spec.n));
    ds.max_dim = 2;
    for (int i = 0; i < spec.n; ++i) {
        const int label = i % 2 == 0 ? +1 : -1;
        Instance inst;
        inst.id = i;
        inst.label = label;
        const double cx = label > 0 ? spec.center_x : -spec.center_x;
        inst.features = {Feature{1, cx + spec.sigma * gauss()}, Feature{2, spec.sigma * gauss()}};
        ds.instances.push_back(std::move(inst));
    }
    return ds;
}

} // namespace alphaseed

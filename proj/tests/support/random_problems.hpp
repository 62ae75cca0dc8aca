#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "alphaseed/dataset.hpp"
#include "alphaseed/kernel.hpp"
#include "alphaseed/solver.hpp"

// Deterministic generators for property tests.
namespace testsupport {

struct Rng {
    std::mt19937_64 engine;
    explicit Rng(std::uint64_t seed) : engine(seed) {}

    double uniform01() { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    int below(int n) { return static_cast<int>(engine() % static_cast<std::uint64_t>(n)); }
};

// Random sparse dataset with both labels present, dimension <= max_dim.
alphaseed::Dataset random_dataset(Rng& rng, int n, int max_dim = 4);

// Dense kernel matrix for the oracle, computed through the public evaluator.
std::vector<std::vector<double>> dense_kernel(const alphaseed::KernelEvaluator& kern);

std::vector<int> labels_of(const alphaseed::Dataset& ds);

// Random alpha vector satisfying the box and equality constraints exactly
// enough for init_state (uses a final water-filling correction).
std::vector<double> random_feasible_alpha(Rng& rng, const std::vector<int>& y, double C);

} // namespace testsupport

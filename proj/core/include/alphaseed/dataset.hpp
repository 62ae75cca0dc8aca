#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace alphaseed {

struct Feature {
    int dim = 0; // 1-based feature index
    double value = 0.0;
};

// One sparse instance with a binary label.
struct Instance {
    int id = 0;
    int label = 0; // +1 or -1
    std::vector<Feature> features; // strictly increasing dim
};

struct Dataset {
    std::vector<Instance> instances;
    int max_dim = 0;

    int size() const { return static_cast<int>(instances.size()); }
    const Instance& operator[](int id) const { return instances[static_cast<std::size_t>(id)]; }
};

// Deterministic assignment of instances to k folds (shuffle-then-stripe).
struct FoldPlan {
    int k = 0;
    std::vector<int> assignment; // instance id -> fold in [0, k)
    std::uint64_t seed = 0;

    int fold_size(int fold) const;
    std::vector<int> fold_ids(int fold) const; // ascending ids
};

// Parses lines of the form "<label> d1:v1 d2:v2 ...". Labels other than
// +1/-1 are accepted when the file holds exactly two distinct label tokens;
// they are remapped with map_labels. Throws ParseError with the offending
// line number otherwise.
Dataset parse_dataset(std::istream& in);
Dataset parse_dataset_string(const std::string& text);
Dataset load_dataset(const std::string& path);

// Inverse of parse_dataset up to label canonicalization: parsing the result
// yields an identical Dataset.
std::string serialize_dataset(const Dataset& ds);

// Maps exactly two distinct raw label tokens onto {+1, -1}; the
// lexicographically larger token becomes +1. Throws ConfigError otherwise.
std::map<std::string, int> map_labels(const std::vector<std::string>& raw_labels);

// Requires 3 <= k <= n. Fold sizes differ by at most one.
FoldPlan make_folds(const Dataset& ds, int k, std::uint64_t seed);

// k = n, fold i = {instance i}.
FoldPlan make_loocv_plan(const Dataset& ds);

} // namespace alphaseed

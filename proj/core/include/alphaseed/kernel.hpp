#pragma once

#include <cstddef>
#include <list>
#include <memory>
#include <mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "alphaseed/dataset.hpp"

namespace alphaseed {

enum class KernelKind { gaussian, linear };

struct KernelSpec {
    KernelKind kind = KernelKind::gaussian;
    double gamma = 1.0; // gaussian only, > 0

    void validate() const; // throws ConfigError
};

// One row of Q: values[j] = y_i * y_j * K(x_i, x_j) over a requested id set.
struct QRow {
    int row_index = 0;
    std::vector<double> values;
};

// Stateless kernel evaluation between two instances.
double kernel_value(const KernelSpec& spec, const Instance& a, const Instance& b);

// Kernel evaluations against one dataset, with per-instance squared norms
// precomputed and an LRU cache of full kernel rows. Rows are immutable once
// built, so concurrent readers only contend on the cache map itself.
class KernelEvaluator {
public:
    using Row = std::shared_ptr<const std::vector<double>>;

    KernelEvaluator(const Dataset& ds, KernelSpec spec, std::size_t cache_bytes);

    const Dataset& dataset() const { return *ds_; }
    const KernelSpec& spec() const { return spec_; }

    // K(x_i, x_j); identical bits to row(i)->at(j).
    double value(int i, int j) const;

    // K(x_i, x) for an instance outside the dataset.
    double value_against(int i, const Instance& x) const;

    // Full kernel row K(x_i, *) over all dataset ids, served from the cache.
    Row row(int i) const;

    QRow q_row(int i, std::span<const int> ids) const;

    std::size_t rows_cached() const;
    std::size_t max_cached_rows() const { return max_rows_; }

private:
    void check_id(int i) const;
    Row build_row(int i) const;

    const Dataset* ds_;
    KernelSpec spec_;
    std::vector<double> sq_norm_;
    std::size_t max_rows_;

    struct CacheEntry {
        Row row;
        std::list<int>::iterator lru_it;
    };
    mutable std::mutex mu_;
    mutable std::list<int> lru_; // front = most recently used
    mutable std::unordered_map<int, CacheEntry> cache_;
};

} // namespace alphaseed

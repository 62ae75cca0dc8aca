#include "alphaseed/kernel.hpp"

#include <algorithm>
#include <cmath>

#include "alphaseed/errors.hpp"

namespace alphaseed {

namespace {

double sparse_dot(const std::vector<Feature>& a, const std::vector<Feature>& b) {
    double dot = 0.0;
    std::size_t ia = 0, ib = 0;
    while (ia < a.size() && ib < b.size()) {
        if (a[ia].dim == b[ib].dim) {
            dot += a[ia].value * b[ib].value;
            ++ia;
            ++ib;
        } else if (a[ia].dim < b[ib].dim) {
            ++ia;
        } else {
            ++ib;
        }
    }
    return dot;
}

double sq_norm(const std::vector<Feature>& a) {
    double s = 0.0;
    for (const auto& f : a) s += f.value * f.value;
    return s;
}

// Single scalar path shared by every evaluation route so that cached rows,
// direct lookups and the free function agree bit-for-bit.
double eval(const KernelSpec& spec, double norm_a, double norm_b, double dot) {
    if (spec.kind == KernelKind::linear) return dot;
    const double dist2 = std::max(0.0, norm_a + norm_b - 2.0 * dot);
    return std::exp(-spec.gamma * dist2);
}

} // namespace

void KernelSpec::validate() const {
    if (kind == KernelKind::gaussian && !(gamma > 0.0))
        throw ConfigError("gaussian kernel requires gamma > 0");
}

double kernel_value(const KernelSpec& spec, const Instance& a, const Instance& b) {
    spec.validate();
    return eval(spec, sq_norm(a.features), sq_norm(b.features), sparse_dot(a.features, b.features));
}

KernelEvaluator::KernelEvaluator(const Dataset& ds, KernelSpec spec, std::size_t cache_bytes)
    : ds_(&ds), spec_(spec) {
    spec_.validate();
    sq_norm_.reserve(ds.instances.size());
    for (const auto& inst : ds.instances) sq_norm_.push_back(sq_norm(inst.features));
    const std::size_t row_bytes = std::max<std::size_t>(1, ds.instances.size() * sizeof(double));
    max_rows_ = std::max<std::size_t>(1, cache_bytes / row_bytes);
}

void KernelEvaluator::check_id(int i) const {
    if (i < 0 || i >= ds_->size())
        throw IndexError("instance id " + std::to_string(i) + " out of range [0, " +
                         std::to_string(ds_->size()) + ")");
}

double KernelEvaluator::value(int i, int j) const {
    check_id(i);
    check_id(j);
    const auto ui = static_cast<std::size_t>(i);
    const auto uj = static_cast<std::size_t>(j);
    return eval(spec_, sq_norm_[ui], sq_norm_[uj],
                sparse_dot(ds_->instances[ui].features, ds_->instances[uj].features));
}

double KernelEvaluator::value_against(int i, const Instance& x) const {
    check_id(i);
    return eval(spec_, sq_norm_[static_cast<std::size_t>(i)], sq_norm(x.features),
                sparse_dot(ds_->instances[static_cast<std::size_t>(i)].features, x.features));
}

KernelEvaluator::Row KernelEvaluator::build_row(int i) const {
    const auto ui = static_cast<std::size_t>(i);
    auto row = std::make_shared<std::vector<double>>(ds_->instances.size());
    const auto& fi = ds_->instances[ui].features;
    const double ni = sq_norm_[ui];
    for (std::size_t j = 0; j < ds_->instances.size(); ++j)
        (*row)[j] = eval(spec_, ni, sq_norm_[j], sparse_dot(fi, ds_->instances[j].features));
    return row;
}

KernelEvaluator::Row KernelEvaluator::row(int i) const {
    check_id(i);
    {
        std::lock_guard lock(mu_);
        auto it = cache_.find(i);
        if (it != cache_.end()) {
            lru_.splice(lru_.begin(), lru_, it->second.lru_it);
            return it->second.row;
        }
    }
    Row built = build_row(i); // outside the lock; duplicate builds are identical
    std::lock_guard lock(mu_);
    auto it = cache_.find(i);
    if (it != cache_.end()) {
        lru_.splice(lru_.begin(), lru_, it->second.lru_it);
        return it->second.row;
    }
    while (cache_.size() >= max_rows_) {
        cache_.erase(lru_.back());
        lru_.pop_back();
    }
    lru_.push_front(i);
    cache_.emplace(i, CacheEntry{built, lru_.begin()});
    return built;
}

QRow KernelEvaluator::q_row(int i, std::span<const int> ids) const {
    check_id(i);
    for (int id : ids) check_id(id);
    Row krow = row(i);
    const double yi = ds_->instances[static_cast<std::size_t>(i)].label;
    QRow out;
    out.row_index = i;
    out.values.reserve(ids.size());
    for (int id : ids) {
        const double yj = ds_->instances[static_cast<std::size_t>(id)].label;
        out.values.push_back(yi * yj * (*krow)[static_cast<std::size_t>(id)]);
    }
    return out;
}

std::size_t KernelEvaluator::rows_cached() const {
    std::lock_guard lock(mu_);
    return cache_.size();
}

} // namespace alphaseed

#include <doctest.h>

#include <cmath>

#include "alphaseed/errors.hpp"
#include "alphaseed/kernel.hpp"
#include "random_problems.hpp"

using namespace alphaseed;

namespace {

Instance make_instance(int id, int label, std::vector<Feature> f) {
    Instance inst;
    inst.id = id;
    inst.label = label;
    inst.features = std::move(f);
    return inst;
}

} // namespace

TEST_SUITE("kernel") {

TEST_CASE("gaussian kernel of an instance with itself is exactly one") {
    KernelSpec spec{KernelKind::gaussian, 0.7};
    Instance a = make_instance(0, +1, {{1, 0.3}, {4, -1.2}});
    CHECK(kernel_value(spec, a, a) == 1.0);
}

TEST_CASE("gaussian kernel matches the closed form") {
    KernelSpec spec{KernelKind::gaussian, 0.5};
    Instance a = make_instance(0, +1, {{1, 0.0}});
    Instance b = make_instance(1, -1, {{1, 1.0}});
    CHECK(kernel_value(spec, a, b) == std::exp(-0.5));
    CHECK(kernel_value(spec, a, b) == doctest::Approx(0.606531).epsilon(1e-6));
}

TEST_CASE("linear kernel is the sparse dot product") {
    KernelSpec spec{KernelKind::linear, 0.0};
    Instance a = make_instance(0, +1, {{1, 2.0}});
    Instance b = make_instance(1, -1, {{1, 3.0}, {2, 5.0}});
    CHECK(kernel_value(spec, a, b) == 6.0);
    CHECK(kernel_value(spec, b, a) == 6.0);
}

TEST_CASE("gaussian spec requires positive gamma") {
    KernelSpec bad{KernelKind::gaussian, 0.0};
    Instance a = make_instance(0, +1, {});
    CHECK_THROWS_AS(kernel_value(bad, a, a), ConfigError);
}

TEST_CASE("q_row diagonal is one for the gaussian kernel") {
    testsupport::Rng rng(21);
    Dataset ds = testsupport::random_dataset(rng, 12);
    KernelEvaluator kern(ds, {KernelKind::gaussian, 0.8}, 1 << 20);
    std::vector<int> ids;
    for (int i = 0; i < ds.size(); ++i) ids.push_back(i);
    for (int i = 0; i < ds.size(); ++i) {
        QRow row = kern.q_row(i, ids);
        CHECK(row.values[static_cast<std::size_t>(i)] == 1.0);
        for (double v : row.values) CHECK(std::abs(v) <= 1.0);
    }
}

TEST_CASE("q_row applies the label sign rule") {
    // K(a, b) = exp(-ln2 * 1) = 1/2 with opposite labels.
    Dataset ds;
    ds.instances.push_back(make_instance(0, +1, {{1, 0.0}}));
    ds.instances.push_back(make_instance(1, -1, {{1, 1.0}}));
    ds.max_dim = 1;
    KernelEvaluator kern(ds, {KernelKind::gaussian, std::log(2.0)}, 1 << 20);
    const std::vector<int> ids{0, 1};
    QRow row = kern.q_row(0, ids);
    CHECK(row.values[1] == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("q_row equals elementwise kernel products") {
    testsupport::Rng rng(22);
    Dataset ds = testsupport::random_dataset(rng, 3);
    KernelSpec spec{KernelKind::gaussian, 1.3};
    KernelEvaluator kern(ds, spec, 1 << 20);
    const std::vector<int> ids{0, 1, 2};
    for (int i = 0; i < 3; ++i) {
        QRow row = kern.q_row(i, ids);
        for (int j = 0; j < 3; ++j) {
            const double expected = ds[i].label * ds[j].label * kernel_value(spec, ds[i], ds[j]);
            CHECK(row.values[static_cast<std::size_t>(j)] == expected);
        }
    }
}

TEST_CASE("q matrix is symmetric on a 50-instance set") {
    testsupport::Rng rng(23);
    Dataset ds = testsupport::random_dataset(rng, 50);
    KernelEvaluator kern(ds, {KernelKind::gaussian, 0.6}, 8 << 20);
    std::vector<int> ids;
    for (int i = 0; i < 50; ++i) ids.push_back(i);
    std::vector<QRow> rows;
    for (int i = 0; i < 50; ++i) rows.push_back(kern.q_row(i, ids));
    for (int i = 0; i < 50; ++i)
        for (int j = 0; j < 50; ++j)
            CHECK(rows[static_cast<std::size_t>(i)].values[static_cast<std::size_t>(j)] ==
                  rows[static_cast<std::size_t>(j)].values[static_cast<std::size_t>(i)]);
}

TEST_CASE("tiny cache evicts rows but returns identical values") {
    testsupport::Rng rng(24);
    Dataset ds = testsupport::random_dataset(rng, 20);
    KernelSpec spec{KernelKind::gaussian, 0.9};
    KernelEvaluator big(ds, spec, 64 << 20);
    KernelEvaluator tiny(ds, spec, 1); // one row at most
    CHECK(tiny.max_cached_rows() == 1);
    std::vector<int> ids;
    for (int i = 0; i < 20; ++i) ids.push_back(i);
    for (int pass = 0; pass < 2; ++pass) {
        for (int i = 0; i < 20; ++i) {
            QRow a = big.q_row(i, ids);
            QRow b = tiny.q_row(i, ids);
            CHECK(a.values == b.values);
        }
    }
    CHECK(tiny.rows_cached() <= 1);
}

TEST_CASE("cached and uncached rows are bit-identical") {
    testsupport::Rng rng(25);
    Dataset ds = testsupport::random_dataset(rng, 15);
    KernelEvaluator kern(ds, {KernelKind::gaussian, 1.1}, 64 << 20);
    std::vector<int> ids;
    for (int i = 0; i < 15; ++i) ids.push_back(i);
    QRow first = kern.q_row(7, ids); // built
    QRow second = kern.q_row(7, ids); // served from cache
    CHECK(first.values == second.values);
    for (int j = 0; j < 15; ++j)
        CHECK(first.values[static_cast<std::size_t>(j)] ==
              ds[7].label * ds[j].label * kern.value(7, j));
}

TEST_CASE("out-of-range ids are rejected") {
    testsupport::Rng rng(26);
    Dataset ds = testsupport::random_dataset(rng, 5);
    KernelEvaluator kern(ds, {KernelKind::gaussian, 1.0}, 1 << 20);
    const std::vector<int> bad{0, 5};
    CHECK_THROWS_AS(kern.q_row(5, std::span<const int>{bad.data(), 1}), IndexError);
    CHECK_THROWS_AS(kern.q_row(0, bad), IndexError);
    CHECK_THROWS_AS(kern.value(-1, 0), IndexError);
}

} // TEST_SUITE

#include <doctest.h>

#include <cmath>

#include "alphaseed/cross_validation.hpp"
#include "alphaseed/errors.hpp"
#include "alphaseed/synthetic.hpp"
#include "random_problems.hpp"

using namespace alphaseed;

TEST_SUITE("cross_validation") {

TEST_CASE("zero strategy folds match standalone training") {
    testsupport::Rng rng(61);
    Dataset ds = testsupport::random_dataset(rng, 40);
    const double C = 2.0;
    KernelEvaluator kern(ds, {KernelKind::gaussian, 0.8}, 4 << 20);
    FoldPlan plan = make_folds(ds, 4, 5);
    CvConfig cfg;

    const CvReport report = run_cv(kern, plan, C, Strategy::zero, cfg);
    REQUIRE(report.per_fold.size() == 4);

    for (int round = 1; round <= 4; ++round) {
        std::vector<int> train;
        for (int id = 0; id < ds.size(); ++id)
            if (plan.assignment[static_cast<std::size_t>(id)] != round - 1) train.push_back(id);
        SvmState s = init_state(kern, train, C, std::vector<double>(train.size(), 0.0));
        s = solve(std::move(s), kern, cfg.solver);
        int correct = 0;
        for (int id : plan.fold_ids(round - 1))
            if (predict_for_id(s, kern, id) == ds[id].label) ++correct;
        const FoldMetrics& fm = report.per_fold[static_cast<std::size_t>(round - 1)];
        CHECK(fm.iterations == s.iterations);
        CHECK(fm.test_correct == correct);
    }
}

TEST_CASE("each instance is tested exactly once") {
    testsupport::Rng rng(62);
    Dataset ds = testsupport::random_dataset(rng, 35);
    KernelEvaluator kern(ds, {KernelKind::gaussian, 0.6}, 4 << 20);
    FoldPlan plan = make_folds(ds, 5, 2);
    const CvReport report = run_cv(kern, plan, 1.5, Strategy::sir, CvConfig{});
    int total = 0;
    for (const auto& fm : report.per_fold) total += fm.test_total;
    CHECK(total == ds.size());
    for (int id = 0; id < ds.size(); ++id)
        CHECK(report.predicted[static_cast<std::size_t>(id)] != 0);
}

TEST_CASE("reports are deterministic apart from wall-clock fields") {
    testsupport::Rng rng(63);
    Dataset ds = testsupport::random_dataset(rng, 45);
    KernelEvaluator kern(ds, {KernelKind::gaussian, 0.9}, 4 << 20);
    FoldPlan plan = make_folds(ds, 5, 7);
    CvConfig cfg;
    cfg.rng_seed = 9;
    const CvReport a = run_cv(kern, plan, 2.0, Strategy::sir, cfg);
    const CvReport b = run_cv(kern, plan, 2.0, Strategy::sir, cfg);
    CHECK(a.accuracy_percent == b.accuracy_percent);
    CHECK(a.total_iterations == b.total_iterations);
    CHECK(a.decision_values == b.decision_values);
    CHECK(a.predicted == b.predicted);
    REQUIRE(a.per_fold.size() == b.per_fold.size());
    for (std::size_t i = 0; i < a.per_fold.size(); ++i) {
        CHECK(a.per_fold[i].iterations == b.per_fold[i].iterations);
        CHECK(a.per_fold[i].test_correct == b.per_fold[i].test_correct);
        CHECK(a.per_fold[i].seed_residual == b.per_fold[i].seed_residual);
    }
}

TEST_CASE("strategies agree on accuracy over the shared fold plan") {
    BlobsSpec spec;
    spec.n = 300;
    spec.seed = 37;
    spec.center_x = 4.0;
    spec.sigma = 2.2;
    Dataset ds = make_blobs(spec);
    KernelEvaluator kern(ds, {KernelKind::gaussian, 0.5}, 64 << 20);
    FoldPlan plan = make_folds(ds, 10, 1);
    CvConfig cfg;

    const CvReport zero = run_cv(kern, plan, 10.0, Strategy::zero, cfg);
    for (Strategy s : {Strategy::sir, Strategy::avg}) {
        const CvReport other = run_cv(kern, plan, 10.0, s, cfg);
        CHECK(other.accuracy_percent == zero.accuracy_percent);
        CHECK(other.predicted == zero.predicted);
    }
}

TEST_CASE("every fold is certified against the KKT stopping rule") {
    testsupport::Rng rng(64);
    Dataset ds = testsupport::random_dataset(rng, 60);
    KernelEvaluator kern(ds, {KernelKind::gaussian, 0.8}, 4 << 20);
    FoldPlan plan = make_folds(ds, 6, 3);
    CvConfig cfg;
    for (Strategy s : {Strategy::zero, Strategy::mir, Strategy::top}) {
        const CvReport report = run_cv(kern, plan, 3.0, s, cfg);
        CHECK(report.all_converged);
        for (const auto& fm : report.per_fold) {
            CHECK(fm.converged);
            CHECK(fm.kkt_gap <= cfg.solver.epsilon);
        }
    }
}

TEST_CASE("a three-instance toy set runs leave-one-out with unit folds") {
    Dataset ds = parse_dataset_string("+1 1:0.0\n-1 1:1.0\n+1 1:0.2");
    KernelEvaluator kern(ds, {KernelKind::gaussian, 1.0}, 1 << 20);
    const CvReport report = run_loocv(kern, 1.0, Strategy::zero, CvConfig{});
    CHECK(report.k == 3);
    REQUIRE(report.per_fold.size() == 3);
    for (const auto& fm : report.per_fold) CHECK(fm.test_total == 1);
    // Round 2 trains on two same-label instances and is recorded as failed.
    CHECK(report.per_fold[1].failed);
    CHECK_FALSE(report.all_converged);
}

TEST_CASE("loocv accuracy is identical between zero and sir") {
    BlobsSpec spec;
    spec.n = 60;
    spec.seed = 11;
    spec.center_x = 1.2;
    spec.sigma = 0.7;
    Dataset ds = make_blobs(spec);
    KernelEvaluator kern(ds, {KernelKind::gaussian, 0.5}, 8 << 20);
    CvConfig cfg;
    const CvReport zero = run_loocv(kern, 5.0, Strategy::zero, cfg);
    const CvReport sir = run_loocv(kern, 5.0, Strategy::sir, cfg);
    CHECK(zero.accuracy_percent == sir.accuracy_percent);
}

TEST_CASE("loocv with sir needs no more iterations than zero") {
    BlobsSpec spec;
    spec.n = 100;
    spec.seed = 4;
    spec.center_x = 1.5;
    spec.sigma = 0.8;
    Dataset ds = make_blobs(spec);
    KernelEvaluator kern(ds, {KernelKind::gaussian, 0.5}, 16 << 20);
    CvConfig cfg;
    const CvReport zero = run_loocv(kern, 5.0, Strategy::zero, cfg);
    const CvReport sir = run_loocv(kern, 5.0, Strategy::sir, cfg);
    CHECK(sir.total_iterations <= zero.total_iterations);
}

TEST_CASE("run_cv validates its inputs") {
    testsupport::Rng rng(65);
    Dataset ds = testsupport::random_dataset(rng, 12);
    KernelEvaluator kern(ds, {KernelKind::gaussian, 1.0}, 1 << 20);
    FoldPlan plan = make_folds(ds, 4, 1);
    CHECK_THROWS_AS(run_cv(kern, plan, -1.0, Strategy::zero, CvConfig{}), ConfigError);
    plan.assignment.pop_back();
    CHECK_THROWS_AS(run_cv(kern, plan, 1.0, Strategy::zero, CvConfig{}), ConfigError);
}

} // TEST_SUITE

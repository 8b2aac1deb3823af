#include "dsm/validation.hpp"
#include "support.hpp"

#include <doctest.h>

#include <random>

using namespace dsm;
using dsm::testing::dataset_from;

namespace {

Partition make_partition(std::vector<int> labels)
{
    Partition p;
    p.labels = std::move(labels);
    p.k = *std::max_element(p.labels.begin(), p.labels.end());
    for (std::size_t i = 0; i < p.labels.size(); ++i)
        p.ids.push_back("r" + std::to_string(i));
    return p;
}

Dataset two_blobs(std::size_t per_blob, std::size_t dims)
{
    std::vector<std::string> names;
    for (std::size_t m = 0; m < dims; ++m)
        names.push_back("D" + std::to_string(m));
    std::vector<Record> recs;
    for (std::size_t i = 0; i < per_blob; ++i)
        recs.push_back({"a" + std::to_string(i), std::vector<std::string>(dims, "a")});
    for (std::size_t i = 0; i < per_blob; ++i)
        recs.push_back({"b" + std::to_string(i), std::vector<std::string>(dims, "b")});
    return Dataset("id", names, recs);
}

} // namespace

TEST_CASE("silhouette of perfectly separated clusters is 1")
{
    const auto m = gower_matrix(two_blobs(3, 2));
    const auto r = silhouette(m.values, make_partition({1, 1, 1, 2, 2, 2}));
    for (Eigen::Index i = 0; i < 6; ++i)
        CHECK(r.values(i) == 1.0);
    CHECK(r.asw == 1.0);
    CHECK(r.cluster_means(0) == 1.0);
}

TEST_CASE("silhouette degenerate conventions")
{
    // identical records: a = b = 0
    const auto same = gower_matrix(dataset_from("id,A\np1,x\np2,x\np3,x\np4,x\n"));
    const auto r = silhouette(same.values, make_partition({1, 2, 1, 2}));
    CHECK(r.values.isZero(0));
    CHECK(r.asw == 0.0);

    // singletons score 0
    std::mt19937_64 rng(1);
    const auto d = dsm::testing::random_dataset(rng, 5, 3, 3);
    const auto m = gower_matrix(d);
    CHECK(silhouette(m.values, make_partition({1, 2, 3, 4, 5})).asw == 0.0);
    const auto mixed = silhouette(m.values, make_partition({1, 1, 2, 3, 3}));
    CHECK(mixed.values(2) == 0.0);

    try {
        silhouette(m.values, make_partition({1, 1, 1, 1, 1}));
        FAIL("expected degenerate_input");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::degenerate_input);
    }
    CHECK_THROWS_AS(silhouette(m.values, make_partition({1, 2})), Error);
}

TEST_CASE("random 7-point silhouette matches direct formula")
{
    std::mt19937_64 rng(77);
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(7, 7);
    for (int i = 0; i < 7; ++i)
        for (int j = i + 1; j < 7; ++j)
            d(i, j) = d(j, i) = std::uniform_real_distribution<double>(0, 1)(rng);
    std::vector<int> labels{1, 2, 3, 1, 2, 3, 1};
    const auto r = silhouette(d, make_partition(labels));
    std::vector<std::vector<double>> nested(7, std::vector<double>(7));
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j)
            nested[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = d(i, j);
    const auto oracle = dsm::testing::direct_silhouette(nested, labels);
    double mean = 0;
    for (int i = 0; i < 7; ++i) {
        CHECK(std::abs(r.values(i) - oracle[static_cast<std::size_t>(i)]) <= 1e-12);
        mean += oracle[static_cast<std::size_t>(i)] / 7;
    }
    CHECK(std::abs(r.asw - mean) <= 1e-12);
}

TEST_CASE("property: silhouette bounds and oracle equivalence")
{
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 300; ++trial) {
        const auto n = 2 + rng() % 7;
        Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (Eigen::Index i = 0; i < d.rows(); ++i)
            for (Eigen::Index j = i + 1; j < d.rows(); ++j)
                d(i, j) = d(j, i) = static_cast<double>(rng() % 5) / 4.0;
        const int k = 2 + static_cast<int>(rng() % (n - 1));
        std::vector<int> labels(n);
        for (std::size_t i = 0; i < n; ++i)
            labels[i] = static_cast<int>(i < static_cast<std::size_t>(k) ? i : rng() % static_cast<std::size_t>(k)) + 1;
        const auto r = silhouette(d, make_partition(labels));
        std::vector<std::vector<double>> nested(n, std::vector<double>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                nested[i][j] = d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        const auto oracle = dsm::testing::direct_silhouette(nested, labels);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(r.values(static_cast<Eigen::Index>(i)) >= -1.0);
            CHECK(r.values(static_cast<Eigen::Index>(i)) <= 1.0);
            CHECK(std::abs(r.values(static_cast<Eigen::Index>(i)) - oracle[i]) <= 1e-12);
        }
    }
}

TEST_CASE("silhouette sweep")
{
    const auto m = gower_matrix(two_blobs(10, 4));
    const auto sweep = silhouette_sweep(m, Linkage::average, 2, 4);
    REQUIRE(sweep.size() == 3);
    CHECK(sweep[0].k == 2);
    CHECK(sweep[0].asw == 1.0);
    CHECK(sweep[1].asw < 1.0);
    CHECK(sweep[2].asw < 1.0);

    std::mt19937_64 rng(12);
    const auto d = dsm::testing::random_dataset(rng, 9, 5, 4);
    const auto dm = gower_matrix(d);
    CHECK(silhouette_sweep(dm, Linkage::average, 9, 9).front().asw == 0.0);
    CHECK_THROWS_AS(silhouette_sweep(dm, Linkage::average, 5, 4), Error);
    CHECK_THROWS_AS(silhouette_sweep(dm, Linkage::average, 1, 4), Error);
    CHECK_THROWS_AS(silhouette_sweep(dm, Linkage::average, 2, 10), Error);
}

TEST_CASE("bootstrap on planted blobs is perfectly stable")
{
    StabilityOptions opt;
    opt.k = 2;
    opt.resamples = 100;
    opt.seed = 42;
    const auto r = bootstrap_stability(two_blobs(10, 4), opt);
    CHECK(r.stabilities == std::vector<double>{1.0, 1.0});
    CHECK(r.dissolved == std::vector<int>{0, 0});
    CHECK(r.redrawn == 0);

    for (std::uint64_t seed : {1ULL, 2ULL, 1234567ULL}) {
        opt.seed = seed;
        const auto s = bootstrap_stability(two_blobs(10, 4), opt);
        CHECK(s.stabilities == std::vector<double>{1.0, 1.0});
    }
}

TEST_CASE("bootstrap determinism and thread independence")
{
    std::mt19937_64 rng(21);
    const auto d = dsm::testing::random_dataset(rng, 25, 6, 3);
    StabilityOptions opt;
    opt.k = 3;
    opt.resamples = 40;
    opt.seed = 9;
    opt.threads = 1;
    const auto a = bootstrap_stability(d, opt);
    const auto b = bootstrap_stability(d, opt);
    opt.threads = 4;
    const auto c = bootstrap_stability(d, opt);
    CHECK(a == b);
    CHECK(a == c);
    for (std::size_t i = 0; i < a.stabilities.size(); ++i) {
        CHECK(a.stabilities[i] >= 0.0);
        CHECK(a.stabilities[i] <= 1.0);
        CHECK(a.dissolved[i] >= 0);
        CHECK(a.dissolved[i] <= opt.resamples);
    }
    opt.seed = 10;
    CHECK(bootstrap_stability(d, opt).stabilities != a.stabilities);
}

TEST_CASE("over-splitting the blobs loses stability")
{
    StabilityOptions opt;
    opt.k = 5;
    opt.resamples = 100;
    opt.seed = 42;
    const auto r = bootstrap_stability(two_blobs(10, 4), opt);
    CHECK(*std::min_element(r.stabilities.begin(), r.stabilities.end()) < 1.0);
}

TEST_CASE("bootstrap preconditions")
{
    const auto d = two_blobs(3, 2);
    StabilityOptions opt;
    opt.resamples = 0;
    CHECK_THROWS_AS(bootstrap_stability(d, opt), Error);
    opt.resamples = 10;
    opt.k = 7;
    CHECK_THROWS_AS(bootstrap_stability(d, opt), Error);
    opt.k = 1;
    CHECK_THROWS_AS(bootstrap_stability(d, opt), Error);
    opt.k = 2;
    opt.dissolution_threshold = 1.0;
    CHECK_THROWS_AS(bootstrap_stability(d, opt), Error);
}

TEST_CASE("tiny datasets trigger redraws and are counted once")
{
    // With N = 3 and k = 3 only draws covering every record are usable.
    const auto d = dataset_from("id,A\np1,x\np2,y\np3,z\n");
    StabilityOptions opt;
    opt.k = 3;
    opt.resamples = 30;
    opt.seed = 5;
    const auto r = bootstrap_stability(d, opt);
    CHECK(r.redrawn > 0);
    CHECK(r.redrawn <= 30);
    CHECK(r.stabilities == std::vector<double>{1.0, 1.0, 1.0});
}

TEST_CASE("uniform_index is unbiased enough and in range")
{
    std::mt19937_64 gen(substream_seed(3, 0));
    std::vector<int> hist(7, 0);
    for (int i = 0; i < 70000; ++i)
        ++hist[uniform_index(gen, 7)];
    for (int h : hist)
        CHECK(std::abs(h - 10000) < 500);
    CHECK(substream_seed(1, 0) != substream_seed(1, 1));
    CHECK(substream_seed(1, 0) != substream_seed(2, 0));
}

#ifndef DSM_VALIDATION_HPP
#define DSM_VALIDATION_HPP

#include "dsm/dataset.hpp"
#include "dsm/error.hpp"
#include "dsm/gower.hpp"
#include "dsm/hac.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace dsm {

template <typename Scalar>
struct BasicSilhouetteReport
{
    int k = 0;
    std::vector<std::string> ids;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> values;        // s(i) per record
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> cluster_means;  // entry c is cluster c+1
    Scalar asw = 0;
};

using SilhouetteReport = BasicSilhouetteReport<double>;

// Rousseeuw silhouettes. a(i) is the mean distance to the rest of i's cluster,
// b(i) the smallest mean distance to another cluster. Singletons and points
// with a(i) = b(i) = 0 get s(i) = 0. K = 1 is rejected as degenerate.
template <typename Derived>
BasicSilhouetteReport<typename Derived::Scalar> silhouette(const Eigen::MatrixBase<Derived>& distances,
                                                           const Partition& partition)
{
    using Scalar = typename Derived::Scalar;
    const auto n = static_cast<std::size_t>(distances.rows());
    if (partition.labels.size() != n || distances.cols() != distances.rows())
        throw Error(ErrorCode::bad_request, "partition does not label the distance matrix records");
    if (partition.k < 2)
        throw Error(ErrorCode::degenerate_input, "silhouette is undefined for a single cluster");

    const auto k = static_cast<std::size_t>(partition.k);
    const auto groups = partition.members();

    BasicSilhouetteReport<Scalar> report;
    report.k = partition.k;
    report.ids = partition.ids;
    report.values.setZero(static_cast<Eigen::Index>(n));
    report.cluster_means.setZero(static_cast<Eigen::Index>(k));

    std::vector<Scalar> sums(k);
    for (std::size_t i = 0; i < n; ++i) {
        const auto own = static_cast<std::size_t>(partition.labels[i] - 1);
        if (groups[own].size() == 1)
            continue;
        std::fill(sums.begin(), sums.end(), Scalar(0));
        for (std::size_t j = 0; j < n; ++j)
            sums[static_cast<std::size_t>(partition.labels[j] - 1)] += distances(i, j);
        const Scalar a = sums[own] / static_cast<Scalar>(groups[own].size() - 1);
        Scalar b = Eigen::NumTraits<Scalar>::highest();
        for (std::size_t c = 0; c < k; ++c)
            if (c != own && !groups[c].empty())
                b = std::min(b, sums[c] / static_cast<Scalar>(groups[c].size()));
        const Scalar denom = std::max(a, b);
        report.values(static_cast<Eigen::Index>(i)) = denom > Scalar(0) ? (b - a) / denom : Scalar(0);
    }
    for (std::size_t c = 0; c < k; ++c) {
        Scalar s(0);
        for (std::size_t i : groups[c])
            s += report.values(static_cast<Eigen::Index>(i));
        if (!groups[c].empty())
            report.cluster_means(static_cast<Eigen::Index>(c)) = s / static_cast<Scalar>(groups[c].size());
    }
    report.asw = n > 0 ? report.values.mean() : Scalar(0);
    return report;
}

struct SweepPoint
{
    int k;
    double asw;
};

// Cluster once, then cut and score every k in [k_min, k_max].
std::vector<SweepPoint> silhouette_sweep(const DistanceMatrix& matrix, Linkage linkage, int k_min, int k_max);

struct StabilityOptions
{
    int k = 2;
    int resamples = 100;
    std::uint64_t seed = 0;
    Linkage linkage = Linkage::average;
    double dissolution_threshold = 0.5;
    unsigned threads = 0;  // 0 = hardware concurrency
};

struct StabilityReport
{
    int k = 0;
    int resamples = 0;
    std::uint64_t seed = 0;
    Linkage linkage = Linkage::average;
    double threshold = 0.5;
    std::vector<double> stabilities;  // mean max-Jaccard per original cluster
    std::vector<int> dissolved;       // resamples with max-Jaccard below threshold
    int redrawn = 0;                  // resamples redrawn for having fewer than k distinct records

    bool operator==(const StabilityReport&) const = default;
};

// Cluster-wise bootstrap stability. Each replicate draws N records with
// replacement, re-runs Gower + HAC + cut(k) on the draw, and matches every
// original cluster to its best resample cluster by Jaccard similarity over
// the distinct original records present in the draw.
//
// Replicate b uses its own mt19937_64 stream seeded from
// substream_seed(seed, b), so results do not depend on thread scheduling.
StabilityReport bootstrap_stability(const DistanceMatrix& matrix, const StabilityOptions& options);
StabilityReport bootstrap_stability(const Dataset& dataset, const StabilityOptions& options);

// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x) noexcept;
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

// Unbiased draw from [0, n) by rejection; independent of the standard
// library's distribution implementations.
std::size_t uniform_index(std::mt19937_64& gen, std::size_t n);

} // namespace dsm

#endif // DSM_VALIDATION_HPP

#ifndef DSM_GOWER_HPP
#define DSM_GOWER_HPP

#include "dsm/dataset.hpp"
#include "dsm/error.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <string>
#include <vector>

namespace dsm {

// Dense symmetric distance matrix with the record ids of its rows/columns.
template <typename Scalar>
struct BasicDistanceMatrix
{
    using MatrixType = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    std::vector<std::string> ids;
    MatrixType values;

    Eigen::Index size() const noexcept { return values.rows(); }
    Scalar operator()(Eigen::Index i, Eigen::Index j) const { return values(i, j); }
};

using DistanceMatrix = BasicDistanceMatrix<double>;

// Number of dimensions on which records i and j differ.
inline std::size_t mismatch_count(const Dataset& dataset, std::size_t i, std::size_t j)
{
    std::size_t k = 0;
    for (std::size_t m = 0; m < dataset.dimension_count(); ++m)
        k += dataset.code(i, m) != dataset.code(j, m);
    return k;
}

// All-categorical Gower distance: the fraction of dimensions on which the two
// label vectors differ. Computed as k/M in a single division so the result is
// the correctly rounded rational.
template <typename Scalar = double>
Scalar gower_distance(const std::vector<std::string>& a, const std::vector<std::string>& b)
{
    if (a.size() != b.size() || a.empty())
        throw Error(ErrorCode::bad_request, "gower distance needs two records over the same non-empty dimension set");
    std::size_t k = 0;
    for (std::size_t m = 0; m < a.size(); ++m)
        k += a[m] != b[m];
    return static_cast<Scalar>(k) / static_cast<Scalar>(a.size());
}

template <typename Scalar = double>
Scalar gower_distance(const Record& a, const Record& b)
{
    return gower_distance<Scalar>(a.values, b.values);
}

template <typename Scalar = double>
BasicDistanceMatrix<Scalar> gower_matrix(const Dataset& dataset)
{
    const auto n = static_cast<Eigen::Index>(dataset.size());
    const auto M = static_cast<Scalar>(dataset.dimension_count());
    BasicDistanceMatrix<Scalar> result;
    result.ids.reserve(dataset.size());
    for (const auto& r : dataset.records())
        result.ids.push_back(r.id);
    result.values.setZero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const auto k = mismatch_count(dataset, static_cast<std::size_t>(i), static_cast<std::size_t>(j));
            result.values(i, j) = result.values(j, i) = static_cast<Scalar>(k) / M;
        }
    return result;
}

} // namespace dsm

#endif // DSM_GOWER_HPP

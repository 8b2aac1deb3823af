#ifndef DSM_MCA_HPP
#define DSM_MCA_HPP

#include "dsm/dataset.hpp"
#include "dsm/error.hpp"

#include <Eigen/Core>
#include <Eigen/SVD>

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace dsm {

// Disjunctive (one-hot) coding: one column per category, variables in dataset
// order and categories in domain order. Each row has exactly Q ones.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> indicator_matrix(const Dataset& dataset)
{
    std::vector<Eigen::Index> offset(dataset.dimension_count());
    Eigen::Index J = 0;
    for (std::size_t m = 0; m < dataset.dimension_count(); ++m) {
        offset[m] = J;
        J += static_cast<Eigen::Index>(dataset.dimensions()[m].domain.size());
    }
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> z;
    z.setZero(static_cast<Eigen::Index>(dataset.size()), J);
    for (std::size_t i = 0; i < dataset.size(); ++i)
        for (std::size_t m = 0; m < dataset.dimension_count(); ++m)
            z(static_cast<Eigen::Index>(i), offset[m] + static_cast<Eigen::Index>(dataset.code(i, m))) = Scalar(1);
    return z;
}

struct CategoryLabel
{
    std::string variable;
    std::string category;
};

template <typename Scalar>
struct BasicMcaResult
{
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    std::size_t variables = 0;   // Q
    std::size_t categories = 0;  // J
    std::size_t records = 0;     // N

    std::vector<CategoryLabel> labels;  // one per indicator column
    Vector masses;                      // c_j, sums to 1

    // Principal inertias of the non-trivial axes, descending. Axes whose
    // singular value falls below 1e-10 * sigma_max are dropped.
    Vector inertias;

    Matrix category_coordinates;  // J x axes, principal coordinates
    Matrix contributions;         // J x axes, each column sums to 1
    Matrix record_coordinates;    // N x axes, principal coordinates

    Eigen::Index axes() const noexcept { return inertias.size(); }

    Scalar total_inertia() const
    {
        return static_cast<Scalar>(categories - variables) / static_cast<Scalar>(variables);
    }

    // The J - Q principal inertias including the numerically zero ones.
    Vector spectrum() const
    {
        Vector s = Vector::Zero(static_cast<Eigen::Index>(categories - variables));
        const auto keep = std::min(s.size(), inertias.size());
        s.head(keep) = inertias.head(keep);
        return s;
    }
};

using McaResult = BasicMcaResult<double>;

// Correspondence analysis of the indicator matrix Z:
//   P = Z / (N Q),  r_i = 1 / N,  c_j = colsum_j / (N Q)
//   S = D_r^{-1/2} (P - r c^T) D_c^{-1/2} = U diag(sigma) V^T
// Inertias are sigma^2. Principal category coordinates are
// V_js sigma_s / sqrt(c_j), so the contribution c_j g_js^2 / lambda_s is V_js^2.
// Axis signs are fixed so the largest-magnitude category coordinate is positive.
template <typename Scalar = double>
BasicMcaResult<Scalar> mca(const Dataset& dataset)
{
    using Result = BasicMcaResult<Scalar>;
    using Matrix = typename Result::Matrix;
    using Vector = typename Result::Vector;

    Result out;
    out.variables = dataset.dimension_count();
    out.records = dataset.size();
    for (const auto& dim : dataset.dimensions())
        for (const auto& label : dim.domain)
            out.labels.push_back({dim.name, label});
    out.categories = out.labels.size();
    if (out.categories <= out.variables)
        throw Error(ErrorCode::degenerate_input,
                    "every variable has a single observed category; total inertia is zero");

    const Matrix z = indicator_matrix<Scalar>(dataset);
    const auto N = static_cast<Scalar>(out.records);
    const auto Q = static_cast<Scalar>(out.variables);
    const Matrix p = z / (N * Q);
    const Scalar r = Scalar(1) / N;
    out.masses = z.colwise().sum().transpose() / (N * Q);

    const Vector inv_sqrt_c = out.masses.cwiseSqrt().cwiseInverse();
    const Matrix residual = (p - Vector::Constant(z.rows(), r) * out.masses.transpose()) / std::sqrt(r);
    const Matrix standardized = residual * inv_sqrt_c.asDiagonal();

    Eigen::JacobiSVD<Matrix> svd(standardized, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& sigma = svd.singularValues();
    Eigen::Index rank = 0;
    const Scalar cutoff = sigma.size() > 0 ? Scalar(1e-10) * sigma(0) : Scalar(0);
    while (rank < sigma.size() && sigma(rank) > cutoff)
        ++rank;

    Matrix u = svd.matrixU().leftCols(rank);
    Matrix v = svd.matrixV().leftCols(rank);
    for (Eigen::Index a = 0; a < rank; ++a) {
        Eigen::Index idx;
        v.col(a).cwiseAbs().maxCoeff(&idx);
        if (v(idx, a) < Scalar(0)) {
            v.col(a) = -v.col(a);
            u.col(a) = -u.col(a);
        }
    }

    out.inertias = sigma.head(rank).array().square().matrix();
    out.category_coordinates = inv_sqrt_c.asDiagonal() * v * sigma.head(rank).asDiagonal();
    out.contributions = v.array().square().matrix();
    out.record_coordinates = (u * sigma.head(rank).asDiagonal()) / std::sqrt(r);
    return out;
}

struct CorrectedAxis
{
    int axis;           // 1-based index into the inertia list
    double inertia;     // raw principal inertia
    double adjusted;    // (Q/(Q-1))^2 (lambda - 1/Q)^2
    double percentage;  // adjusted / sum of adjusted * 100
};

// Optimistic Benzecri correction. Only axes with lambda > 1/Q survive; an
// empty result means no axis exceeds 1/Q.
std::vector<CorrectedAxis> benzecri_correct(std::span<const double> inertias, std::size_t variables);

struct Retention
{
    std::size_t count = 0;
    std::vector<CorrectedAxis> retained;
};

// Keeps axes whose corrected percentage is strictly above threshold_percent.
Retention retain_dimensions(const std::vector<CorrectedAxis>& corrected, double threshold_percent);

struct Contribution
{
    std::string variable;
    std::string category;
    double percent;
};

struct TopContributions
{
    int axis = 0;
    std::vector<Contribution> entries;
    double baseline_percent = 0;  // 100 / J, the equal-share line
};

// Ranked category contributions to a 1-based axis. Ties (to 12 decimals) keep
// variable order then category order.
TopContributions top_contributions(const McaResult& result, int axis, std::size_t n);

} // namespace dsm

#endif // DSM_MCA_HPP

#include "dsm/mca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dsm {

namespace {

// lambda within this of 1/Q counts as equal to it.
constexpr double kInertiaTolerance = 1e-12;

} // namespace

std::vector<CorrectedAxis> benzecri_correct(std::span<const double> inertias, std::size_t variables)
{
    if (variables < 2)
        throw Error(ErrorCode::bad_request, "Benzecri correction needs at least two variables");
    for (std::size_t s = 0; s < inertias.size(); ++s) {
        if (inertias[s] < -kInertiaTolerance || inertias[s] > 1.0 + kInertiaTolerance)
            throw Error(ErrorCode::bad_request, "principal inertias of an indicator MCA lie in [0, 1]");
        if (s > 0 && inertias[s] > inertias[s - 1] + kInertiaTolerance)
            throw Error(ErrorCode::bad_request, "principal inertias must be in descending order");
    }

    const double q = static_cast<double>(variables);
    const double scale = (q / (q - 1.0)) * (q / (q - 1.0));
    std::vector<CorrectedAxis> out;
    for (std::size_t s = 0; s < inertias.size(); ++s) {
        const double excess = inertias[s] - 1.0 / q;
        if (excess <= kInertiaTolerance)
            continue;
        out.push_back({static_cast<int>(s) + 1, inertias[s], scale * excess * excess, 0.0});
    }
    const double total = std::accumulate(out.begin(), out.end(), 0.0,
                                         [](double acc, const CorrectedAxis& a) { return acc + a.adjusted; });
    for (auto& a : out)
        a.percentage = 100.0 * (a.adjusted / total);
    return out;
}

Retention retain_dimensions(const std::vector<CorrectedAxis>& corrected, double threshold_percent)
{
    const double total = std::accumulate(corrected.begin(), corrected.end(), 0.0,
                                         [](double acc, const CorrectedAxis& a) { return acc + a.percentage; });
    if (total > 100.0 + 1e-9)
        throw Error(ErrorCode::bad_request, "corrected percentages sum to more than 100");
    Retention r;
    for (const auto& a : corrected)
        if (a.percentage > threshold_percent)
            r.retained.push_back(a);
    r.count = r.retained.size();
    return r;
}

TopContributions top_contributions(const McaResult& result, int axis, std::size_t n)
{
    if (axis < 1 || axis > result.axes())
        throw Error(ErrorCode::bad_request,
                    "axis " + std::to_string(axis) + " out of range [1, " + std::to_string(result.axes()) + "]");
    if (n < 1 || n > result.categories)
        throw Error(ErrorCode::bad_request, "n must be in [1, " + std::to_string(result.categories) + "]");

    const auto col = result.contributions.col(axis - 1);
    std::vector<std::size_t> order(result.categories);
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto key = [&](std::size_t j) { return std::round(col(static_cast<Eigen::Index>(j)) * 1e12); };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key(a) > key(b); });

    TopContributions top;
    top.axis = axis;
    top.baseline_percent = 100.0 / static_cast<double>(result.categories);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = order[i];
        top.entries.push_back({result.labels[j].variable, result.labels[j].category,
                               100.0 * col(static_cast<Eigen::Index>(j))});
    }
    return top;
}

} // namespace dsm

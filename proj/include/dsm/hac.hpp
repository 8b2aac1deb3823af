#ifndef DSM_HAC_HPP
#define DSM_HAC_HPP

#include "dsm/dataset.hpp"
#include "dsm/error.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

namespace dsm {

enum class Linkage { single, complete, average };

std::string_view to_string(Linkage linkage) noexcept;
// Throws dsm::Error(bad_request) for anything but single/complete/average.
Linkage parse_linkage(std::string_view name);

// Node numbering follows the usual convention: leaves are 0..N-1 and the
// t-th merge creates node N+t. `left` is the side holding the smaller record
// index.
template <typename Scalar>
struct BasicMerge
{
    std::size_t left;
    std::size_t right;
    Scalar height;

    bool operator==(const BasicMerge&) const = default;
};

template <typename Scalar>
struct BasicDendrogram
{
    std::vector<std::string> leaves;
    std::vector<BasicMerge<Scalar>> merges;
    Linkage linkage = Linkage::average;

    std::size_t leaf_count() const noexcept { return leaves.size(); }

    // Height of any node; leaves sit at 0.
    Scalar height(std::size_t node) const
    {
        return node < leaves.size() ? Scalar(0) : merges.at(node - leaves.size()).height;
    }
};

using Merge = BasicMerge<double>;
using Dendrogram = BasicDendrogram<double>;

// Flat clustering: labels[i] in 1..k for the record ids[i].
struct Partition
{
    std::vector<std::string> ids;
    std::vector<int> labels;
    int k = 0;

    // Record indices per cluster; element c holds cluster c+1.
    std::vector<std::vector<std::size_t>> members() const;

    bool operator==(const Partition&) const = default;
};

// Distances closer than this are treated as tied so that the deterministic
// tie-break applies regardless of the order in which linkage values were summed.
template <typename Scalar>
constexpr Scalar tie_tolerance()
{
    return Eigen::NumTraits<Scalar>::dummy_precision();
}

// Agglomerative clustering on a dense distance matrix.
//
// At each step the closest pair of active clusters is merged. Ties are broken
// by the lower smallest-member index, then by the other cluster's smallest
// member index. Average linkage uses the Lance-Williams update with exact
// cluster-size weights. Runs in O(N^3) time and O(N^2) memory, which is fine
// for the tens-to-hundreds of records this is meant for.
template <typename Derived>
BasicDendrogram<typename Derived::Scalar> cluster(const Eigen::MatrixBase<Derived>& distances,
                                                  std::vector<std::string> ids,
                                                  Linkage linkage = Linkage::average)
{
    using Scalar = typename Derived::Scalar;
    const auto n = static_cast<std::size_t>(distances.rows());
    if (distances.rows() != distances.cols())
        throw Error(ErrorCode::bad_request, "distance matrix must be square");
    if (ids.size() != n)
        throw Error(ErrorCode::bad_request, "id count does not match distance matrix size");

    BasicDendrogram<Scalar> tree;
    tree.leaves = std::move(ids);
    tree.linkage = linkage;
    if (n < 2)
        return tree;
    tree.merges.reserve(n - 1);

    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> d = distances;
    // Slot s starts as leaf s. When two slots merge the lower one survives, so
    // ascending slot order is ascending smallest-member order.
    std::vector<std::size_t> node(n), size(n, 1);
    std::iota(node.begin(), node.end(), std::size_t{0});
    std::vector<std::size_t> active(n);
    std::iota(active.begin(), active.end(), std::size_t{0});

    const Scalar eps = tie_tolerance<Scalar>();
    Scalar last_height(0);
    for (std::size_t step = 0; step + 1 < n; ++step) {
        std::size_t best_a = 0, best_b = 0;
        Scalar best = Eigen::NumTraits<Scalar>::highest();
        bool found = false;
        for (std::size_t ia = 0; ia < active.size(); ++ia)
            for (std::size_t ib = ia + 1; ib < active.size(); ++ib) {
                const Scalar v = d(active[ia], active[ib]);
                if (!found || v < best - eps) {
                    best = v;
                    best_a = ia;
                    best_b = ib;
                    found = true;
                }
            }

        const std::size_t a = active[best_a], b = active[best_b];
        // Keep the sequence monotone when a Lance-Williams value lands an ulp
        // below the previous height.
        const Scalar height = std::max(best, last_height);
        last_height = height;
        tree.merges.push_back({node[a], node[b], height});

        for (std::size_t c : active) {
            if (c == a || c == b)
                continue;
            Scalar v;
            switch (linkage) {
            case Linkage::single: v = std::min(d(a, c), d(b, c)); break;
            case Linkage::complete: v = std::max(d(a, c), d(b, c)); break;
            default:
                v = (static_cast<Scalar>(size[a]) * d(a, c) + static_cast<Scalar>(size[b]) * d(b, c))
                    / static_cast<Scalar>(size[a] + size[b]);
            }
            d(a, c) = d(c, a) = v;
        }
        size[a] += size[b];
        node[a] = n + step;
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_b));
    }
    return tree;
}

// Undo the last k-1 merges. Clusters are numbered 1..k by their smallest
// record index.
template <typename Scalar>
Partition cut(const BasicDendrogram<Scalar>& tree, int k)
{
    const std::size_t n = tree.leaf_count();
    if (k < 1 || static_cast<std::size_t>(k) > n)
        throw Error(ErrorCode::bad_request, "k must be in [1, " + std::to_string(n) + "], got " + std::to_string(k));

    // Union-find over leaves; root representative is the smallest leaf.
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    // Any leaf of each internal node, to join components.
    std::vector<std::size_t> representative(n + tree.merges.size());
    std::iota(representative.begin(), representative.begin() + static_cast<std::ptrdiff_t>(n), std::size_t{0});
    const std::size_t applied = n - static_cast<std::size_t>(k);
    for (std::size_t t = 0; t < tree.merges.size(); ++t) {
        const auto& m = tree.merges[t];
        representative[n + t] = representative[m.left];
        if (t < applied) {
            std::size_t ra = find(representative[m.left]), rb = find(representative[m.right]);
            if (ra > rb)
                std::swap(ra, rb);
            parent[rb] = ra;
        }
    }

    Partition p;
    p.ids = tree.leaves;
    p.labels.assign(n, 0);
    p.k = k;
    std::vector<int> label_of_root(n, 0);
    int next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = find(i);
        if (label_of_root[r] == 0)
            label_of_root[r] = ++next;
        p.labels[i] = label_of_root[r];
    }
    return p;
}

// One cluster per observed category of the dimension, numbered by domain order.
Partition partition_by_dimension(const Dataset& dataset, std::string_view dimension);

} // namespace dsm

#endif // DSM_HAC_HPP

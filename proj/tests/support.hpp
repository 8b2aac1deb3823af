// Test-only helpers: random dataset generation and independent reference
// implementations used as oracles. Nothing here calls into the code paths it
// is used to check.
#ifndef DSM_TESTS_SUPPORT_HPP
#define DSM_TESTS_SUPPORT_HPP

#include "dsm/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace dsm::testing {

inline std::string fixture(const std::string& name)
{
    return std::string(DSM_FIXTURES) + "/" + name;
}

inline Dataset dataset_from(const std::string& csv)
{
    std::istringstream in(csv);
    return load_dataset(in);
}

// N records over M dimensions named D0..D{M-1}; each dimension draws from at
// most `max_categories` labels c0, c1, ...
inline Dataset random_dataset(std::mt19937_64& rng, std::size_t n, std::size_t m, std::size_t max_categories)
{
    std::vector<std::string> names;
    for (std::size_t j = 0; j < m; ++j)
        names.push_back("D" + std::to_string(j));
    std::vector<std::size_t> cats(m);
    for (auto& c : cats)
        c = 1 + rng() % max_categories;
    std::vector<Record> records;
    for (std::size_t i = 0; i < n; ++i) {
        Record r{"r" + std::to_string(i), {}};
        for (std::size_t j = 0; j < m; ++j)
            r.values.push_back("c" + std::to_string(rng() % cats[j]));
        records.push_back(std::move(r));
    }
    return Dataset("id", names, records);
}

// Pairwise mismatch fraction straight from the label strings.
inline std::vector<std::vector<double>> brute_gower(const Dataset& d)
{
    const std::size_t n = d.size(), m = d.dimension_count();
    std::vector<std::vector<double>> out(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            int k = 0;
            for (std::size_t x = 0; x < m; ++x)
                k += d.record(i).values[x] != d.record(j).values[x];
            out[i][j] = static_cast<double>(k) / static_cast<double>(m);
        }
    return out;
}

// ---------------------------------------------------------------------------
// Naive HAC: clusters are explicit member lists; linkage values are recomputed
// from the original pairwise distances at every step.

enum class NaiveLinkage { single, complete, average };

struct NaiveMerge
{
    std::vector<std::size_t> left;   // sorted members
    std::vector<std::size_t> right;  // sorted members
    double height;
};

inline double naive_linkage(const std::vector<std::vector<double>>& d, const std::vector<std::size_t>& a,
                            const std::vector<std::size_t>& b, NaiveLinkage linkage)
{
    double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0;
    for (std::size_t i : a)
        for (std::size_t j : b) {
            lo = std::min(lo, d[i][j]);
            hi = std::max(hi, d[i][j]);
            sum += d[i][j];
        }
    switch (linkage) {
    case NaiveLinkage::single: return lo;
    case NaiveLinkage::complete: return hi;
    default: return sum / static_cast<double>(a.size() * b.size());
    }
}

// Ties within `tol` resolve to the pair with the lowest smallest member, then
// the other cluster's lowest smallest member.
inline std::vector<NaiveMerge> naive_hac(const std::vector<std::vector<double>>& d, NaiveLinkage linkage, double tol)
{
    std::vector<std::vector<std::size_t>> clusters;
    for (std::size_t i = 0; i < d.size(); ++i)
        clusters.push_back({i});
    std::vector<NaiveMerge> merges;
    while (clusters.size() > 1) {
        std::sort(clusters.begin(), clusters.end(),
                  [](const auto& x, const auto& y) { return x.front() < y.front(); });
        double best = 0;
        std::size_t ba = 0, bb = 0;
        bool found = false;
        for (std::size_t a = 0; a < clusters.size(); ++a)
            for (std::size_t b = a + 1; b < clusters.size(); ++b) {
                const double v = naive_linkage(d, clusters[a], clusters[b], linkage);
                if (!found || v < best - tol) {
                    best = v;
                    ba = a;
                    bb = b;
                    found = true;
                }
            }
        merges.push_back({clusters[ba], clusters[bb], best});
        std::vector<std::size_t> joined = clusters[ba];
        joined.insert(joined.end(), clusters[bb].begin(), clusters[bb].end());
        std::sort(joined.begin(), joined.end());
        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bb));
        clusters[ba] = std::move(joined);
    }
    return merges;
}

// Labels after applying the first N-k merges, numbered by smallest member.
inline std::vector<int> naive_cut(std::size_t n, const std::vector<NaiveMerge>& merges, std::size_t k)
{
    std::vector<std::set<std::size_t>> clusters;
    for (std::size_t i = 0; i < n; ++i)
        clusters.push_back({i});
    for (std::size_t t = 0; t < n - k; ++t) {
        std::set<std::size_t> joined(merges[t].left.begin(), merges[t].left.end());
        joined.insert(merges[t].right.begin(), merges[t].right.end());
        std::erase_if(clusters, [&](const auto& c) { return joined.count(*c.begin()) > 0; });
        clusters.push_back(std::move(joined));
    }
    std::sort(clusters.begin(), clusters.end(), [](const auto& x, const auto& y) { return *x.begin() < *y.begin(); });
    std::vector<int> labels(n);
    for (std::size_t c = 0; c < clusters.size(); ++c)
        for (std::size_t i : clusters[c])
            labels[i] = static_cast<int>(c) + 1;
    return labels;
}

// ---------------------------------------------------------------------------
// Silhouette straight from the definition.

inline std::vector<double> direct_silhouette(const std::vector<std::vector<double>>& d, const std::vector<int>& labels)
{
    const std::size_t n = d.size();
    std::vector<double> s(n, 0.0);
    std::set<int> all(labels.begin(), labels.end());
    for (std::size_t i = 0; i < n; ++i) {
        double own_sum = 0;
        int own_n = 0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i && labels[j] == labels[i]) {
                own_sum += d[i][j];
                ++own_n;
            }
        if (own_n == 0)
            continue;
        const double a = own_sum / own_n;
        double b = std::numeric_limits<double>::infinity();
        for (int c : all) {
            if (c == labels[i])
                continue;
            double sum = 0;
            int cnt = 0;
            for (std::size_t j = 0; j < n; ++j)
                if (labels[j] == c) {
                    sum += d[i][j];
                    ++cnt;
                }
            b = std::min(b, sum / cnt);
        }
        const double mx = std::max(a, b);
        s[i] = mx == 0 ? 0.0 : (b - a) / mx;
    }
    return s;
}

// ---------------------------------------------------------------------------
// Cyclic Jacobi eigenvalue iteration for a small symmetric matrix stored as
// nested vectors. Returns eigenvalues in descending order.

inline std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> a)
{
    const std::size_t n = a.size();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                off += a[p][q] * a[p][q];
        if (off < 1e-30)
            break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-300)
                    continue;
                const double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
                const double c = 1 / std::sqrt(t * t + 1), s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i)
        ev[i] = a[i][i];
    std::sort(ev.begin(), ev.end(), std::greater<>());
    return ev;
}

// J x J cross-product S^T S of the standardized MCA residuals, built with
// plain loops from category counts.
inline std::vector<std::vector<double>> mca_cross_product(const Dataset& d)
{
    std::vector<std::pair<std::size_t, std::string>> cols;
    for (std::size_t m = 0; m < d.dimension_count(); ++m)
        for (const auto& v : d.dimensions()[m].domain)
            cols.emplace_back(m, v);
    const std::size_t n = d.size(), J = cols.size();
    const double N = static_cast<double>(n), Q = static_cast<double>(d.dimension_count());
    std::vector<std::vector<double>> s(n, std::vector<double>(J));
    std::vector<double> c(J, 0.0);
    for (std::size_t j = 0; j < J; ++j)
        for (std::size_t i = 0; i < n; ++i)
            c[j] += d.record(i).values[cols[j].first] == cols[j].second ? 1.0 / (N * Q) : 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < J; ++j) {
            const double p = d.record(i).values[cols[j].first] == cols[j].second ? 1.0 / (N * Q) : 0.0;
            const double e = c[j] / N;
            s[i][j] = (p - e) / std::sqrt(e);
        }
    std::vector<std::vector<double>> g(J, std::vector<double>(J, 0.0));
    for (std::size_t a = 0; a < J; ++a)
        for (std::size_t b = 0; b < J; ++b)
            for (std::size_t i = 0; i < n; ++i)
                g[a][b] += s[i][a] * s[i][b];
    return g;
}

// ---------------------------------------------------------------------------
// Recommender by linear scan over label strings.

inline std::vector<std::size_t> scan_matches(const Dataset& d, const std::vector<std::pair<std::string, std::string>>& partial)
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < d.size(); ++i) {
        bool ok = true;
        for (const auto& [dim, value] : partial) {
            std::size_t m = 0;
            while (d.dimensions()[m].name != dim)
                ++m;
            ok = ok && d.record(i).values[m] == value;
        }
        if (ok)
            out.push_back(i);
    }
    return out;
}

inline std::map<std::string, std::size_t> scan_counts(const Dataset& d, const std::vector<std::size_t>& rows, std::size_t m)
{
    std::map<std::string, std::size_t> counts;
    for (std::size_t i : rows)
        ++counts[d.record(i).values[m]];
    return counts;
}

} // namespace dsm::testing

#endif // DSM_TESTS_SUPPORT_HPP

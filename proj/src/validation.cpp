#include "dsm/validation.hpp"

#include <algorithm>
#include <atomic>
#include <iostream>
#include <limits>
#include <thread>

namespace dsm {

std::vector<SweepPoint> silhouette_sweep(const DistanceMatrix& matrix, Linkage linkage, int k_min, int k_max)
{
    const auto n = static_cast<int>(matrix.size());
    if (k_min > k_max)
        throw Error(ErrorCode::bad_request, "empty k range");
    if (k_min < 2 || k_max > n)
        throw Error(ErrorCode::bad_request,
                    "k range must lie within [2, " + std::to_string(n) + "], got [" + std::to_string(k_min) + ", "
                        + std::to_string(k_max) + "]");
    const auto tree = cluster(matrix.values, matrix.ids, linkage);
    std::vector<SweepPoint> out;
    for (int k = k_min; k <= k_max; ++k)
        out.push_back({k, silhouette(matrix.values, cut(tree, k)).asw});
    return out;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) noexcept
{
    return splitmix64(splitmix64(seed) ^ splitmix64(~stream));
}

std::size_t uniform_index(std::mt19937_64& gen, std::size_t n)
{
    const std::uint64_t range = n;
    // 2^64 mod n; values below it would bias the modulo.
    const std::uint64_t floor = (0 - range) % range;
    std::uint64_t r;
    do {
        r = gen();
    } while (r < floor);
    return static_cast<std::size_t>(r % range);
}

namespace {

struct Replicate
{
    std::vector<double> best_jaccard;
    bool redrawn = false;
};

Replicate run_replicate(const DistanceMatrix& matrix,
                        const std::vector<std::vector<std::size_t>>& original,
                        const StabilityOptions& options,
                        std::uint64_t b)
{
    const std::size_t n = static_cast<std::size_t>(matrix.size());
    std::mt19937_64 gen(substream_seed(options.seed, b));

    Replicate out;
    std::vector<Eigen::Index> rows(n);
    std::vector<char> present(n);
    for (;;) {
        std::fill(present.begin(), present.end(), 0);
        std::size_t distinct = 0;
        for (auto& r : rows) {
            r = static_cast<Eigen::Index>(uniform_index(gen, n));
            distinct += !present[static_cast<std::size_t>(r)];
            present[static_cast<std::size_t>(r)] = 1;
        }
        if (distinct >= static_cast<std::size_t>(options.k))
            break;
        out.redrawn = true;
    }

    std::vector<std::string> ids(n);
    for (std::size_t i = 0; i < n; ++i)
        ids[i] = matrix.ids[static_cast<std::size_t>(rows[i])];
    const DistanceMatrix::MatrixType sub = matrix.values(rows, rows);
    const auto part = cut(cluster(sub, std::move(ids), options.linkage), options.k);

    // Resample clusters as sets (bitmaps) of distinct original records.
    std::vector<std::vector<char>> found(static_cast<std::size_t>(options.k), std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        found[static_cast<std::size_t>(part.labels[i] - 1)][static_cast<std::size_t>(rows[i])] = 1;

    std::vector<std::size_t> owner(n);
    for (std::size_t c = 0; c < original.size(); ++c)
        for (std::size_t i : original[c])
            owner[i] = c;

    out.best_jaccard.reserve(original.size());
    for (std::size_t c = 0; c < original.size(); ++c) {
        double best = 0;
        for (const auto& other : found) {
            std::size_t inter = 0, uni = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (!present[i])
                    continue;
                const bool mine = owner[i] == c;
                inter += mine && other[i];
                uni += mine || other[i];
            }
            if (uni > 0)
                best = std::max(best, static_cast<double>(inter) / static_cast<double>(uni));
        }
        out.best_jaccard.push_back(best);
    }
    return out;
}

} // namespace

StabilityReport bootstrap_stability(const DistanceMatrix& matrix, const StabilityOptions& options)
{
    const auto n = static_cast<int>(matrix.size());
    if (options.resamples < 1)
        throw Error(ErrorCode::bad_request, "number of resamples must be at least 1");
    if (options.k < 2 || options.k > n)
        throw Error(ErrorCode::bad_request, "k must be in [2, " + std::to_string(n) + "], got " + std::to_string(options.k));
    if (!(options.dissolution_threshold > 0.0 && options.dissolution_threshold < 1.0))
        throw Error(ErrorCode::bad_request, "dissolution threshold must lie in (0, 1)");

    const auto original = cut(cluster(matrix.values, matrix.ids, options.linkage), options.k).members();

    const auto B = static_cast<std::size_t>(options.resamples);
    std::vector<Replicate> replicates(B);
    unsigned workers = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, B));
    if (workers <= 1) {
        for (std::size_t b = 0; b < B; ++b)
            replicates[b] = run_replicate(matrix, original, options, b);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        std::exception_ptr failure;
        std::atomic<bool> failed{false};
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t b; (b = next++) < B;) {
                    try {
                        replicates[b] = run_replicate(matrix, original, options, b);
                    } catch (...) {
                        if (!failed.exchange(true))
                            failure = std::current_exception();
                    }
                }
            });
        for (auto& t : pool)
            t.join();
        if (failure)
            std::rethrow_exception(failure);
    }

    StabilityReport report;
    report.k = options.k;
    report.resamples = options.resamples;
    report.seed = options.seed;
    report.linkage = options.linkage;
    report.threshold = options.dissolution_threshold;
    report.stabilities.assign(original.size(), 0.0);
    report.dissolved.assign(original.size(), 0);
    for (std::size_t b = 0; b < B; ++b) {
        const auto& rep = replicates[b];
        if (rep.redrawn) {
            ++report.redrawn;
            std::clog << "bootstrap: resample " << b << " had fewer than " << options.k << " distinct records, redrawn\n";
        }
        for (std::size_t c = 0; c < original.size(); ++c) {
            report.stabilities[c] += rep.best_jaccard[c];
            report.dissolved[c] += rep.best_jaccard[c] < options.dissolution_threshold;
        }
    }
    for (auto& s : report.stabilities)
        s /= static_cast<double>(B);
    return report;
}

StabilityReport bootstrap_stability(const Dataset& dataset, const StabilityOptions& options)
{
    return bootstrap_stability(gower_matrix(dataset), options);
}

} // namespace dsm

#include "dsm/hac.hpp"

namespace dsm {

std::string_view to_string(Linkage linkage) noexcept
{
    switch (linkage) {
    case Linkage::single: return "single";
    case Linkage::complete: return "complete";
    case Linkage::average: return "average";
    }
    return "average";
}

Linkage parse_linkage(std::string_view name)
{
    if (name == "single")
        return Linkage::single;
    if (name == "complete")
        return Linkage::complete;
    if (name == "average")
        return Linkage::average;
    throw Error(ErrorCode::bad_request, "unsupported linkage '" + std::string(name) + "' (expected single, complete or average)");
}

std::vector<std::vector<std::size_t>> Partition::members() const
{
    std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < labels.size(); ++i)
        out.at(static_cast<std::size_t>(labels[i] - 1)).push_back(i);
    return out;
}

Partition partition_by_dimension(const Dataset& dataset, std::string_view dimension)
{
    const std::size_t m = dataset.dimension_index(dimension);
    Partition p;
    p.k = static_cast<int>(dataset.dimensions()[m].domain.size());
    p.ids.reserve(dataset.size());
    p.labels.reserve(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        p.ids.push_back(dataset.record(i).id);
        p.labels.push_back(static_cast<int>(dataset.code(i, m)) + 1);
    }
    return p;
}

} // namespace dsm

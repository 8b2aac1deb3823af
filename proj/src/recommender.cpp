#include "dsm/recommender.hpp"
#include "dsm/error.hpp"

#include <algorithm>
#include <numeric>

namespace dsm {

std::vector<Binding> resolve(const Dataset& dataset, const PartialAssignment& partial)
{
    std::vector<Binding> out;
    std::vector<char> bound(dataset.dimension_count(), 0);
    for (const auto& [name, value] : partial) {
        const std::size_t m = dataset.dimension_index(name);
        if (bound[m])
            throw Error(ErrorCode::bad_request, "dimension '" + name + "' bound more than once");
        bound[m] = 1;
        const auto code = dataset.dimensions()[m].index_of(value);
        if (!code)
            throw Error(ErrorCode::unknown_value, "value '" + value + "' is not in the domain of '" + name + "'");
        out.push_back({m, *code});
    }
    return out;
}

namespace {

std::vector<std::size_t> filter(const Dataset& dataset, const std::vector<Binding>& bindings)
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < dataset.size(); ++i)
        if (std::all_of(bindings.begin(), bindings.end(),
                        [&](const Binding& b) { return dataset.code(i, b.dimension) == b.code; }))
            out.push_back(i);
    return out;
}

std::vector<char> bound_mask(const Dataset& dataset, const std::vector<Binding>& bindings)
{
    std::vector<char> mask(dataset.dimension_count(), 0);
    for (const auto& b : bindings)
        mask[b.dimension] = 1;
    return mask;
}

} // namespace

std::vector<std::size_t> match_indices(const Dataset& dataset, const PartialAssignment& partial)
{
    return filter(dataset, resolve(dataset, partial));
}

std::vector<std::string> matches(const Dataset& dataset, const PartialAssignment& partial)
{
    std::vector<std::string> ids;
    for (std::size_t i : match_indices(dataset, partial))
        ids.push_back(dataset.record(i).id);
    return ids;
}

Recommendation recommend(const Dataset& dataset, const PartialAssignment& partial)
{
    const auto bindings = resolve(dataset, partial);
    const auto rows = filter(dataset, bindings);
    const auto bound = bound_mask(dataset, bindings);

    Recommendation rec;
    rec.match_count = rows.size();
    rec.no_evidence = rows.empty();
    for (std::size_t m = 0; m < dataset.dimension_count(); ++m) {
        if (bound[m])
            continue;
        const auto& dim = dataset.dimensions()[m];
        std::vector<std::size_t> counts(dim.domain.size(), 0);
        for (std::size_t i : rows)
            ++counts[dataset.code(i, m)];

        DimensionRecommendation d;
        d.dimension = dim.name;
        std::vector<std::size_t> order(counts.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return counts[a] > counts[b]; });
        for (std::size_t c : order)
            if (counts[c] > 0)
                d.values.push_back({dim.domain[c],
                                    100.0 * static_cast<double>(counts[c]) / static_cast<double>(rows.size()),
                                    counts[c]});
        for (std::size_t c = 0; c < counts.size(); ++c)
            if (counts[c] == 0)
                d.gaps.push_back(dim.domain[c]);
        rec.dimensions.push_back(std::move(d));
    }
    return rec;
}

GapSets gaps(const Dataset& dataset, const PartialAssignment& partial)
{
    GapSets out;
    for (auto& d : recommend(dataset, partial).dimensions)
        out.emplace_back(std::move(d.dimension), std::move(d.gaps));
    return out;
}

std::vector<std::string> NavigationTree::order_names() const
{
    std::vector<std::string> names;
    for (std::size_t m : m_order)
        names.push_back(m_dimensions[m].name);
    return names;
}

NavigationTree::View NavigationTree::descend(const std::vector<std::string>& path) const
{
    if (path.size() > m_order.size())
        throw Error(ErrorCode::bad_request, "path has " + std::to_string(path.size()) + " steps but the tree has depth "
                                                + std::to_string(m_order.size()));
    std::optional<std::size_t> node = 0;
    for (std::size_t depth = 0; depth < path.size(); ++depth) {
        const auto& dim = m_dimensions[m_order[depth]];
        const auto code = dim.index_of(path[depth]);
        if (!code)
            throw Error(ErrorCode::unknown_value,
                        "value '" + path[depth] + "' is not in the domain of '" + dim.name + "'");
        if (!node)
            continue;
        const auto& children = m_nodes[*node].children;
        const auto it = std::find_if(children.begin(), children.end(), [&](const auto& c) { return c.first == *code; });
        node = it == children.end() ? std::nullopt : std::optional<std::size_t>(it->second);
    }

    View view;
    view.depth = path.size();
    view.count = node ? m_nodes[*node].count : 0;
    if (view.depth == m_order.size())
        return view;
    const auto& dim = m_dimensions[m_order[view.depth]];
    view.dimension = dim.name;
    std::vector<char> seen(dim.domain.size(), 0);
    if (node)
        for (const auto& [code, child] : m_nodes[*node].children) {
            view.children.emplace_back(dim.domain[code], m_nodes[child].count);
            seen[code] = 1;
        }
    for (std::size_t c = 0; c < dim.domain.size(); ++c)
        if (!seen[c])
            view.gaps.push_back(dim.domain[c]);
    return view;
}

namespace {

void grow(const Dataset& dataset, const std::vector<std::size_t>& order, std::vector<NavigationTree::Node>& nodes,
          std::size_t node, std::size_t depth, const std::vector<std::size_t>& rows)
{
    nodes[node].count = rows.size();
    if (depth == order.size())
        return;
    const std::size_t m = order[depth];
    std::vector<std::vector<std::size_t>> split(dataset.dimensions()[m].domain.size());
    for (std::size_t i : rows)
        split[dataset.code(i, m)].push_back(i);
    for (std::size_t code = 0; code < split.size(); ++code) {
        if (split[code].empty())
            continue;
        const std::size_t child = nodes.size();
        nodes.emplace_back();
        nodes[node].children.emplace_back(code, child);
        grow(dataset, order, nodes, child, depth + 1, split[code]);
    }
}

} // namespace

NavigationTree build_tree(const Dataset& dataset, const std::optional<std::vector<std::string>>& order)
{
    NavigationTree tree;
    tree.m_dimensions = dataset.dimensions();
    if (order) {
        if (order->size() != dataset.dimension_count())
            throw Error(ErrorCode::bad_request, "tree order must list every dimension exactly once");
        std::vector<char> used(dataset.dimension_count(), 0);
        for (const auto& name : *order) {
            const std::size_t m = dataset.dimension_index(name);
            if (used[m])
                throw Error(ErrorCode::bad_request, "dimension '" + name + "' repeated in tree order");
            used[m] = 1;
            tree.m_order.push_back(m);
        }
    } else {
        tree.m_order.resize(dataset.dimension_count());
        std::iota(tree.m_order.begin(), tree.m_order.end(), std::size_t{0});
    }
    std::vector<std::size_t> all(dataset.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    tree.m_nodes.emplace_back();
    grow(dataset, tree.m_order, tree.m_nodes, 0, 0, all);
    return tree;
}

} // namespace dsm

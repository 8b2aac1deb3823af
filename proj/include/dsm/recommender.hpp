#ifndef DSM_RECOMMENDER_HPP
#define DSM_RECOMMENDER_HPP

#include "dsm/dataset.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dsm {

// Dimension -> value bindings. Order is irrelevant to every query.
using PartialAssignment = std::vector<std::pair<std::string, std::string>>;

struct Binding
{
    std::size_t dimension;
    std::size_t code;
};

// Throws unknown_dimension, unknown_value, or bad_request when a dimension is
// bound twice.
std::vector<Binding> resolve(const Dataset& dataset, const PartialAssignment& partial);

// Indices of the records agreeing with every binding, ascending.
std::vector<std::size_t> match_indices(const Dataset& dataset, const PartialAssignment& partial);
std::vector<std::string> matches(const Dataset& dataset, const PartialAssignment& partial);

struct ValueConfidence
{
    std::string value;
    double confidence;  // percent of matching records
    std::size_t count;
};

struct DimensionRecommendation
{
    std::string dimension;
    std::vector<ValueConfidence> values;  // count > 0 only, confidence descending
    std::vector<std::string> gaps;        // observed values absent from the matches, domain order
};

struct Recommendation
{
    std::size_t match_count = 0;
    bool no_evidence = false;                      // match_count == 0
    std::vector<DimensionRecommendation> dimensions;  // unbound dimensions, dataset order
};

Recommendation recommend(const Dataset& dataset, const PartialAssignment& partial);

using GapSets = std::vector<std::pair<std::string, std::vector<std::string>>>;
GapSets gaps(const Dataset& dataset, const PartialAssignment& partial);

// Trie over dimension values in a fixed order; every node carries the number
// of records matching its root path. Only values that occur below a node get
// a child.
class NavigationTree
{
public:
    struct Node
    {
        std::size_t count = 0;
        std::vector<std::pair<std::size_t, std::size_t>> children;  // (value code, node index), by code
    };

    struct View
    {
        std::size_t depth = 0;
        std::size_t count = 0;
        std::string dimension;  // dimension chosen at this depth; empty at full depth
        std::vector<std::pair<std::string, std::size_t>> children;
        std::vector<std::string> gaps;
    };

    const std::vector<std::size_t>& order() const noexcept { return m_order; }
    const std::vector<Dimension>& dimensions() const noexcept { return m_dimensions; }
    const std::vector<Node>& nodes() const noexcept { return m_nodes; }
    const Node& root() const { return m_nodes.front(); }

    // The dimension name at each depth.
    std::vector<std::string> order_names() const;

    // Throws bad_request when the path is longer than the tree depth and
    // unknown_value when a step is outside its dimension's domain. A step with
    // no matching records is legal and yields an empty node.
    View descend(const std::vector<std::string>& path) const;

private:
    friend NavigationTree build_tree(const Dataset&, const std::optional<std::vector<std::string>>&);

    std::vector<std::size_t> m_order;
    std::vector<Dimension> m_dimensions;  // copy, in dataset order
    std::vector<Node> m_nodes;
};

// Default order is dataset column order. Throws bad_request for a
// non-permutation and unknown_dimension for a name not in the dataset.
NavigationTree build_tree(const Dataset& dataset, const std::optional<std::vector<std::string>>& order = std::nullopt);

} // namespace dsm

#endif // DSM_RECOMMENDER_HPP

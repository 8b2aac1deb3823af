#include "dsm/export.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace dsm {

std::string format_number(double value)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

double round_significant(double value, int digits)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, value);
    return std::strtod(buf, nullptr);
}

std::string csv_field(const std::string& value)
{
    if (value.find_first_of(",\"\n\r") == std::string::npos && !value.empty() && value.front() != ' '
        && value.back() != ' ')
        return value;
    std::string out = "\"";
    for (char c : value) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + '"';
}

Json summary_json(const Dataset& dataset)
{
    Json dims = Json::object();
    for (const auto& [name, counts] : summarize(dataset)) {
        Json entry = Json::object();
        for (const auto& [category, count] : counts)
            entry[category] = count;
        dims[name] = std::move(entry);
    }
    return dims;
}

Json distance_matrix_json(const DistanceMatrix& matrix)
{
    Json entries = Json::array();
    for (Eigen::Index i = 0; i < matrix.size(); ++i)
        for (Eigen::Index j = 0; j < matrix.size(); ++j)
            entries.push_back(round_significant(matrix(i, j), 12));
    return Json{{"ids", matrix.ids}, {"size", matrix.size()}, {"entries", std::move(entries)}};
}

namespace {

Json nested_node(const Dendrogram& tree, std::size_t node, const std::optional<Partition>& overlay)
{
    const std::size_t n = tree.leaf_count();
    if (node < n) {
        Json leaf{{"id", tree.leaves[node]}, {"height", 0.0}};
        if (overlay)
            leaf["overlay"] = overlay->labels[node];
        return leaf;
    }
    const auto& m = tree.merges[node - n];
    return Json{{"height", m.height},
                {"children", Json::array({nested_node(tree, m.left, overlay), nested_node(tree, m.right, overlay)})}};
}

std::string newick_label(const std::string& id)
{
    if (id.find_first_of(" \t()[]':;,") == std::string::npos)
        return id;
    std::string out = "'";
    for (char c : id) {
        if (c == '\'')
            out += '\'';
        out += c;
    }
    return out + "'";
}

void newick_node(const Dendrogram& tree, std::size_t node, std::ostringstream& out)
{
    const std::size_t n = tree.leaf_count();
    if (node < n) {
        out << newick_label(tree.leaves[node]);
        return;
    }
    const auto& m = tree.merges[node - n];
    out << '(';
    newick_node(tree, m.left, out);
    out << ':' << format_number(m.height - tree.height(m.left)) << ',';
    newick_node(tree, m.right, out);
    out << ':' << format_number(m.height - tree.height(m.right)) << ')';
}

} // namespace

Json dendrogram_json(const Dendrogram& tree, const std::optional<Partition>& overlay)
{
    if (overlay && overlay->ids != tree.leaves)
        throw Error(ErrorCode::bad_request, "overlay does not label the dendrogram's records");
    Json merges = Json::array();
    for (const auto& m : tree.merges)
        merges.push_back(Json{{"left", m.left}, {"right", m.right}, {"height", m.height}});
    Json out{{"leaves", tree.leaves}, {"merges", std::move(merges)}, {"linkage", std::string(to_string(tree.linkage))}};
    if (!tree.leaves.empty())
        out["tree"] = nested_node(tree, tree.leaf_count() + tree.merges.size() - 1, overlay);
    if (overlay)
        out["overlay"] = overlay->labels;
    return out;
}

std::string newick(const Dendrogram& tree)
{
    std::ostringstream out;
    if (!tree.leaves.empty())
        newick_node(tree, tree.leaf_count() + tree.merges.size() - 1, out);
    out << ';';
    return out.str();
}

Json partition_json(const Partition& partition)
{
    Json clusters = Json::array();
    for (const auto& members : partition.members()) {
        Json ids = Json::array();
        for (std::size_t i : members)
            ids.push_back(partition.ids[i]);
        clusters.push_back(std::move(ids));
    }
    return Json{{"k", partition.k}, {"ids", partition.ids}, {"labels", partition.labels}, {"clusters", std::move(clusters)}};
}

std::string partition_csv(const Partition& partition)
{
    std::string out = "id,cluster\n";
    for (std::size_t i = 0; i < partition.ids.size(); ++i)
        out += csv_field(partition.ids[i]) + ',' + std::to_string(partition.labels[i]) + '\n';
    return out;
}

Json silhouette_json(const SilhouetteReport& report)
{
    Json points = Json::array();
    for (std::size_t i = 0; i < report.ids.size(); ++i)
        points.push_back(Json{{"id", report.ids[i]}, {"s", report.values(static_cast<Eigen::Index>(i))}});
    Json means = Json::array();
    for (Eigen::Index c = 0; c < report.cluster_means.size(); ++c)
        means.push_back(report.cluster_means(c));
    return Json{{"k", report.k}, {"asw", report.asw}, {"per_point", std::move(points)}, {"cluster_means", std::move(means)}};
}

Json stability_json(const StabilityReport& report)
{
    return Json{{"k", report.k},
                {"B", report.resamples},
                {"seed", report.seed},
                {"threshold", report.threshold},
                {"linkage", std::string(to_string(report.linkage))},
                {"stabilities", report.stabilities},
                {"dissolved", report.dissolved},
                {"redrawn", report.redrawn}};
}

Json sweep_json(const std::vector<SweepPoint>& sweep)
{
    Json out = Json::array();
    for (const auto& p : sweep)
        out.push_back(Json{{"k", p.k}, {"asw", p.asw}});
    return out;
}

std::string sweep_csv(const std::vector<SweepPoint>& sweep)
{
    std::string out = "k,asw\n";
    for (const auto& p : sweep)
        out += std::to_string(p.k) + ',' + format_number(p.asw) + '\n';
    return out;
}

McaSummary summarize_mca(const Dataset& dataset, double retain_threshold, std::size_t top_n)
{
    McaSummary s;
    s.result = mca(dataset);
    const std::vector<double> inertias(s.result.inertias.data(), s.result.inertias.data() + s.result.inertias.size());
    s.corrected = benzecri_correct(inertias, s.result.variables);
    s.retention = retain_dimensions(s.corrected, retain_threshold);
    s.retain_threshold = retain_threshold;
    const std::size_t n = std::min(top_n, s.result.categories);
    if (n > 0)
        for (const auto& axis : s.retention.retained)
            s.contributions.push_back(top_contributions(s.result, axis.axis, n));
    return s;
}

Json mca_json(const McaSummary& s)
{
    Json corrected = Json::array();
    for (const auto& a : s.corrected)
        corrected.push_back(Json{{"axis", a.axis}, {"inertia", a.inertia}, {"adjusted", a.adjusted}, {"percentage", a.percentage}});
    Json retained = Json::array();
    for (const auto& a : s.retention.retained)
        retained.push_back(a.axis);
    Json contributions = Json::array();
    for (const auto& top : s.contributions) {
        Json entries = Json::array();
        for (const auto& e : top.entries)
            entries.push_back(Json{{"variable", e.variable}, {"category", e.category}, {"contribution_percent", e.percent}});
        contributions.push_back(Json{{"axis", top.axis}, {"baseline_percent", top.baseline_percent}, {"top", std::move(entries)}});
    }
    std::vector<double> inertias(s.result.inertias.data(), s.result.inertias.data() + s.result.inertias.size());
    return Json{{"variables", s.result.variables},
                {"categories", s.result.categories},
                {"records", s.result.records},
                {"total_inertia", s.result.total_inertia()},
                {"inertias", std::move(inertias)},
                {"corrected", std::move(corrected)},
                {"retain_threshold", s.retain_threshold},
                {"retained_count", s.retention.count},
                {"retained_axes", std::move(retained)},
                {"contributions", std::move(contributions)}};
}

std::string scree_csv(const std::vector<CorrectedAxis>& corrected)
{
    std::string out = "axis,corrected_percentage\n";
    for (const auto& a : corrected)
        out += std::to_string(a.axis) + ',' + format_number(a.percentage) + '\n';
    return out;
}

std::string contributions_csv(const std::vector<TopContributions>& contributions)
{
    std::string out = "axis,variable,category,contribution_percent,baseline_percent\n";
    for (const auto& top : contributions)
        for (const auto& e : top.entries)
            out += std::to_string(top.axis) + ',' + csv_field(e.variable) + ',' + csv_field(e.category) + ','
                + format_number(e.percent) + ',' + format_number(top.baseline_percent) + '\n';
    return out;
}

Json recommendation_json(const Recommendation& rec)
{
    Json recs = Json::object();
    Json gap_sets = Json::object();
    for (const auto& d : rec.dimensions) {
        Json values = Json::array();
        for (const auto& v : d.values)
            values.push_back(Json{{"value", v.value}, {"confidence", v.confidence}, {"count", v.count}});
        recs[d.dimension] = std::move(values);
        gap_sets[d.dimension] = d.gaps;
    }
    return Json{{"match_count", rec.match_count},
                {"recommendations", std::move(recs)},
                {"gaps", std::move(gap_sets)},
                {"no_evidence", rec.no_evidence}};
}

Json node_view_json(const NavigationTree::View& view)
{
    Json children = Json::array();
    for (const auto& [value, count] : view.children)
        children.push_back(Json{{"value", value}, {"count", count}});
    Json out{{"depth", view.depth}, {"count", view.count}};
    out["dimension"] = view.dimension.empty() ? Json(nullptr) : Json(view.dimension);
    out["children"] = std::move(children);
    out["gaps"] = view.gaps;
    return out;
}

namespace {

Json tree_node(const NavigationTree& tree, std::size_t node, std::size_t depth, std::size_t max_depth)
{
    const auto& n = tree.nodes()[node];
    Json out{{"count", n.count}};
    if (depth == tree.order().size())
        return out;
    const auto& dim = tree.dimensions()[tree.order()[depth]];
    out["dimension"] = dim.name;
    if (depth >= max_depth) {
        out["truncated"] = !n.children.empty();
        return out;
    }
    Json children = Json::array();
    std::vector<char> seen(dim.domain.size(), 0);
    for (const auto& [code, child] : n.children) {
        Json c = tree_node(tree, child, depth + 1, max_depth);
        Json entry{{"value", dim.domain[code]}};
        entry.update(c);
        children.push_back(std::move(entry));
        seen[code] = 1;
    }
    Json gap_values = Json::array();
    for (std::size_t c = 0; c < dim.domain.size(); ++c)
        if (!seen[c])
            gap_values.push_back(dim.domain[c]);
    out["children"] = std::move(children);
    out["gaps"] = std::move(gap_values);
    return out;
}

} // namespace

Json tree_json(const NavigationTree& tree, std::size_t max_depth)
{
    return Json{{"order", tree.order_names()}, {"root", tree_node(tree, 0, 0, max_depth)}};
}

Json metadata_json(const std::string& command, const Json& parameters)
{
    return Json{{"tool", "dsm"}, {"version", DSM_VERSION}, {"command", command}, {"parameters", parameters}};
}

} // namespace dsm

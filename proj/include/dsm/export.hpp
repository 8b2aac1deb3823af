#ifndef DSM_EXPORT_HPP
#define DSM_EXPORT_HPP

// Serialization of analysis results. These functions define the file and
// wire formats shared by the CLI and the HTTP service.

#include "dsm/dataset.hpp"
#include "dsm/gower.hpp"
#include "dsm/hac.hpp"
#include "dsm/mca.hpp"
#include "dsm/recommender.hpp"
#include "dsm/validation.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace dsm {

using Json = nlohmann::ordered_json;

// Shortest decimal text that round-trips the double.
std::string format_number(double value);
// Rounded to `digits` significant digits, then shortest form.
double round_significant(double value, int digits);
// Quotes a CSV field when needed.
std::string csv_field(const std::string& value);

Json summary_json(const Dataset& dataset);
Json distance_matrix_json(const DistanceMatrix& matrix);

// {leaves, merges:[{left,right,height}], linkage, tree, overlay?}. `tree` is
// the nested form; leaves carry their overlay cluster index when given.
Json dendrogram_json(const Dendrogram& tree, const std::optional<Partition>& overlay = std::nullopt);
std::string newick(const Dendrogram& tree);

Json partition_json(const Partition& partition);
std::string partition_csv(const Partition& partition);

Json silhouette_json(const SilhouetteReport& report);
Json stability_json(const StabilityReport& report);
Json sweep_json(const std::vector<SweepPoint>& sweep);
std::string sweep_csv(const std::vector<SweepPoint>& sweep);

struct McaSummary
{
    McaResult result;
    std::vector<CorrectedAxis> corrected;
    Retention retention;
    double retain_threshold = 0;
    std::vector<TopContributions> contributions;  // one per retained axis
};

// Runs correction, retention and top-n contributions (n clamped to J).
McaSummary summarize_mca(const Dataset& dataset, double retain_threshold, std::size_t top_n);

Json mca_json(const McaSummary& summary);
std::string scree_csv(const std::vector<CorrectedAxis>& corrected);
std::string contributions_csv(const std::vector<TopContributions>& contributions);

Json recommendation_json(const Recommendation& rec);
Json node_view_json(const NavigationTree::View& view);
// Nested tree for the UI, expanded at most max_depth levels below the root.
Json tree_json(const NavigationTree& tree, std::size_t max_depth);

// Provenance header: {tool, version, command, parameters}.
Json metadata_json(const std::string& command, const Json& parameters);

} // namespace dsm

#endif // DSM_EXPORT_HPP

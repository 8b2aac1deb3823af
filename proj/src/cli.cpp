#include "dsm/cli.hpp"
#include "dsm/export.hpp"
#include "dsm/gower.hpp"
#include "dsm/hac.hpp"
#include "dsm/mca.hpp"
#include "dsm/recommender.hpp"
#include "dsm/service.hpp"
#include "dsm/validation.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <pthread.h>
#include <thread>

namespace dsm {

namespace {

namespace fs = std::filesystem;

struct RunConfig
{
    std::string input;
    std::string delimiter = ",";
    std::string output_dir = ".";
    std::string linkage = "average";
    int k = 2;
    int k_min = 2;
    int k_max = 10;
    int resamples = 100;
    std::uint64_t seed = 42;
    double threshold = 0.5;
    std::optional<double> min_asw;
    double retain_threshold = 7.0;
    std::size_t top = 5;
    std::vector<std::string> order;
    std::vector<std::string> path;
    std::size_t depth = 2;
    std::vector<std::string> bindings;
    std::string overlay;
    std::string format = "both";
    bool export_distances = false;
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string cors_origin = "*";
};

int exit_code(ErrorCode code)
{
    switch (code) {
    case ErrorCode::bad_request:
    case ErrorCode::unknown_dimension:
    case ErrorCode::unknown_value:
        return 2;
    default:
        return 1;
    }
}

Dataset load(const RunConfig& cfg)
{
    if (cfg.delimiter.size() != 1)
        throw Error(ErrorCode::bad_request, "delimiter must be a single character");
    return load_dataset_file(cfg.input, DsvFormat{cfg.delimiter.front()});
}

class Writer
{
public:
    Writer(const RunConfig& cfg, std::ostream& out, std::string command, Json parameters)
        : m_dir(cfg.output_dir), m_out(out), m_meta(metadata_json(command, parameters))
    {
        std::error_code ec;
        fs::create_directories(m_dir, ec);
        if (ec)
            throw Error(ErrorCode::io, "cannot create output directory '" + m_dir.string() + "': " + ec.message());
    }

    const Json& metadata() const { return m_meta; }

    void json(const std::string& name, const Json& body)
    {
        Json doc{{"metadata", m_meta}};
        for (const auto& [k, v] : body.items())
            doc[k] = v;
        text(name, doc.dump(2) + '\n');
    }

    void csv(const std::string& name, const std::string& body) { text(name, "# " + m_meta.dump() + '\n' + body); }

    void text(const std::string& name, const std::string& content)
    {
        const fs::path path = m_dir / name;
        std::ofstream f(path, std::ios::binary);
        if (!f)
            throw Error(ErrorCode::io, "cannot write '" + path.string() + "'");
        f << content;
        if (!f)
            throw Error(ErrorCode::io, "write failed for '" + path.string() + "'");
        m_out << "wrote " << path.string() << '\n';
    }

private:
    fs::path m_dir;
    std::ostream& m_out;
    Json m_meta;
};

Json common_parameters(const RunConfig& cfg)
{
    return Json{{"input", cfg.input}, {"delimiter", cfg.delimiter}};
}

void cmd_summary(const RunConfig& cfg, std::ostream& out)
{
    const auto d = load(cfg);
    Writer w(cfg, out, "summary", common_parameters(cfg));
    w.json("summary.json", Json{{"records", d.size()}, {"summary", summary_json(d)}});
}

void cmd_cluster(const RunConfig& cfg, std::ostream& out)
{
    const auto d = load(cfg);
    const auto linkage = parse_linkage(cfg.linkage);
    auto params = common_parameters(cfg);
    params["k"] = cfg.k;
    params["linkage"] = cfg.linkage;
    if (!cfg.overlay.empty())
        params["overlay"] = cfg.overlay;

    std::optional<Partition> overlay;
    if (!cfg.overlay.empty())
        overlay = partition_by_dimension(d, cfg.overlay);
    const auto matrix = gower_matrix(d);
    const auto tree = cluster(matrix.values, matrix.ids, linkage);
    const auto part = cut(tree, cfg.k);

    Writer w(cfg, out, "cluster", params);
    if (cfg.format == "json" || cfg.format == "both")
        w.json("dendrogram.json", dendrogram_json(tree, overlay));
    if (cfg.format == "newick" || cfg.format == "both")
        w.text("dendrogram.nwk", newick(tree) + '\n');
    w.csv("partition.csv", partition_csv(part));
    if (cfg.export_distances)
        w.json("distances.json", distance_matrix_json(matrix));
}

void cmd_validate(const RunConfig& cfg, std::ostream& out, bool k_max_given)
{
    const auto d = load(cfg);
    StabilityOptions opt;
    opt.linkage = parse_linkage(cfg.linkage);
    opt.resamples = cfg.resamples;
    opt.seed = cfg.seed;
    opt.dissolution_threshold = cfg.threshold;
    const int k_max = k_max_given ? cfg.k_max : std::min(cfg.k_max, static_cast<int>(d.size()));

    auto params = common_parameters(cfg);
    params["linkage"] = cfg.linkage;
    params["kmin"] = cfg.k_min;
    params["kmax"] = k_max;
    params["B"] = cfg.resamples;
    params["seed"] = cfg.seed;
    params["threshold"] = cfg.threshold;
    params["min_asw"] = cfg.min_asw ? Json(*cfg.min_asw) : Json(nullptr);

    const auto matrix = gower_matrix(d);
    const auto sweep = silhouette_sweep(matrix, opt.linkage, cfg.k_min, k_max);
    const auto tree = cluster(matrix.values, matrix.ids, opt.linkage);
    Json silhouettes = Json::array();
    Json reports = Json::array();
    for (const auto& p : sweep) {
        silhouettes.push_back(silhouette_json(silhouette(matrix.values, cut(tree, p.k))));
        if (cfg.min_asw && p.asw < *cfg.min_asw)
            continue;
        opt.k = p.k;
        reports.push_back(stability_json(bootstrap_stability(matrix, opt)));
    }

    Writer w(cfg, out, "validate", params);
    w.csv("silhouette_sweep.csv", sweep_csv(sweep));
    w.json("silhouette.json", Json{{"reports", std::move(silhouettes)}});
    w.json("stability.json", Json{{"reports", std::move(reports)}});
}

void cmd_mca(const RunConfig& cfg, std::ostream& out)
{
    const auto d = load(cfg);
    const auto summary = summarize_mca(d, cfg.retain_threshold, cfg.top);
    auto params = common_parameters(cfg);
    params["retain_threshold"] = cfg.retain_threshold;
    params["top"] = cfg.top;

    Writer w(cfg, out, "mca", params);
    w.csv("scree.csv", scree_csv(summary.corrected));
    w.csv("contributions.csv", contributions_csv(summary.contributions));
    w.json("mca.json", mca_json(summary));
}

PartialAssignment parse_bindings(const std::vector<std::string>& raw)
{
    PartialAssignment partial;
    for (const auto& b : raw) {
        const auto eq = b.find('=');
        if (eq == std::string::npos || eq == 0)
            throw Error(ErrorCode::bad_request, "binding '" + b + "' is not of the form Dimension=Value");
        partial.emplace_back(b.substr(0, eq), b.substr(eq + 1));
    }
    return partial;
}

void cmd_recommend(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    const auto d = load(cfg);
    const auto partial = parse_bindings(cfg.bindings);
    Recommendation rec;
    try {
        rec = recommend(d, partial);
    } catch (const Error& e) {
        throw Error(e.code(), std::string(e.what()) + " (in --set bindings)");
    }
    auto params = common_parameters(cfg);
    Json bindings = Json::object();
    for (const auto& [k, v] : partial)
        bindings[k] = v;
    params["bindings"] = bindings;

    Writer w(cfg, err, "recommend", params);
    const auto body = recommendation_json(rec);
    w.json("recommendation.json", body);
    Json doc{{"metadata", w.metadata()}};
    doc.update(body);
    out << doc.dump(2) << '\n';
}

void cmd_tree(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    const auto d = load(cfg);
    const auto tree = build_tree(d, cfg.order.empty() ? std::nullopt : std::optional(cfg.order));
    auto params = common_parameters(cfg);
    params["order"] = tree.order_names();
    params["depth"] = cfg.depth;
    params["path"] = cfg.path;

    Writer w(cfg, err, "tree", params);
    w.json("tree.json", tree_json(tree, cfg.depth));
    Json doc{{"metadata", w.metadata()}};
    doc.update(node_view_json(tree.descend(cfg.path)));
    out << doc.dump(2) << '\n';
}

int cmd_serve(const RunConfig& cfg, std::ostream& out)
{
    // Block termination signals before the server spawns its worker threads
    // so that only the watcher below receives them.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGTERM);
    sigaddset(&signals, SIGINT);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    Service service(load(cfg), ServiceOptions{cfg.cors_origin});
    const int port = service.bind(cfg.host, cfg.port);
    out << "serving " << service.dataset().size() << " records on http://" << cfg.host << ':' << port << std::endl;

    std::atomic<bool> signalled{false};
    std::thread watcher([&] {
        int sig = 0;
        sigwait(&signals, &sig);
        signalled = true;
        service.stop();
    });
    service.listen();
    // listen() may also return on its own; wake the watcher in that case.
    if (!signalled)
        pthread_kill(watcher.native_handle(), SIGTERM);
    watcher.join();
    pthread_sigmask(SIG_UNBLOCK, &signals, nullptr);
    return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    RunConfig cfg;
    CLI::App app{"dsm: design-space mining over categorical design-decision datasets"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(DSM_VERSION));

    const auto add_input = [&](CLI::App* sub) {
        sub->add_option("input,-i,--input", cfg.input, "Dataset file (delimiter-separated, header row, id first)")
            ->required()
            ->envname("DSM_DATASET");
        sub->add_option("-d,--delimiter", cfg.delimiter, "Field delimiter")->capture_default_str();
    };
    const auto add_output = [&](CLI::App* sub) {
        sub->add_option("-o,--output-dir", cfg.output_dir, "Directory for output files")
            ->envname("DSM_OUTPUT_DIR")
            ->capture_default_str();
    };
    const auto add_linkage = [&](CLI::App* sub) {
        sub->add_option("--linkage", cfg.linkage, "Linkage rule")
            ->check(CLI::IsMember({"single", "complete", "average"}))
            ->capture_default_str();
    };

    auto* summary = app.add_subcommand("summary", "Per-dimension category frequencies");
    add_input(summary);
    add_output(summary);

    auto* clus = app.add_subcommand("cluster", "Gower distances + hierarchical clustering, cut at k");
    add_input(clus);
    add_output(clus);
    add_linkage(clus);
    clus->add_option("-k,--k", cfg.k, "Number of clusters")->check(CLI::PositiveNumber)->capture_default_str();
    clus->add_option("--overlay", cfg.overlay, "Color dendrogram leaves by this dimension");
    clus->add_option("--format", cfg.format, "Dendrogram output")
        ->check(CLI::IsMember({"json", "newick", "both"}))
        ->capture_default_str();
    clus->add_flag("--export-distances", cfg.export_distances, "Also write distances.json");

    auto* val = app.add_subcommand("validate", "Silhouette sweep and bootstrap stability");
    add_input(val);
    add_output(val);
    add_linkage(val);
    val->add_option("--kmin", cfg.k_min, "Smallest k in the sweep")->check(CLI::Range(2, 1 << 20))->capture_default_str();
    auto* kmax_opt = val->add_option("--kmax", cfg.k_max, "Largest k in the sweep (clamped to N unless given)")
                         ->check(CLI::Range(2, 1 << 20))
                         ->capture_default_str();
    val->add_option("-B,--resamples", cfg.resamples, "Bootstrap resamples")->check(CLI::PositiveNumber)->capture_default_str();
    val->add_option("--seed", cfg.seed, "Bootstrap seed")->capture_default_str();
    val->add_option("--threshold", cfg.threshold, "Dissolution threshold on max-Jaccard, in (0,1)")
        ->check(CLI::Validator(
            [](std::string& s) -> std::string {
                double v = 0;
                try {
                    v = std::stod(s);
                } catch (const std::exception&) {
                    return "not a number";
                }
                return v > 0.0 && v < 1.0 ? std::string{} : std::string("must lie strictly between 0 and 1");
            },
            "(0,1)"))
        ->capture_default_str();
    val->add_option("--min-asw", cfg.min_asw, "Bootstrap only k whose average silhouette width is at least this");

    auto* mca_cmd = app.add_subcommand("mca", "Multiple correspondence analysis with Benzecri correction");
    add_input(mca_cmd);
    add_output(mca_cmd);
    mca_cmd->add_option("--retain-threshold", cfg.retain_threshold, "Keep axes whose corrected variance % exceeds this")
        ->check(CLI::Range(0.0, 100.0))
        ->capture_default_str();
    mca_cmd->add_option("--top", cfg.top, "Categories listed per retained axis")->check(CLI::PositiveNumber)->capture_default_str();

    auto* rec = app.add_subcommand("recommend", "Value confidences and gaps given partial design choices");
    add_input(rec);
    add_output(rec);
    rec->add_option("--set", cfg.bindings, "Binding Dimension=Value (repeatable)");

    auto* tree = app.add_subcommand("tree", "Navigation tree export and descent");
    add_input(tree);
    add_output(tree);
    tree->add_option("--order", cfg.order, "Dimension order (all dimensions)")->delimiter(',');
    tree->add_option("--path", cfg.path, "Values along the tree order (repeatable)");
    tree->add_option("--depth", cfg.depth, "Expansion depth of tree.json")->capture_default_str();

    auto* serve = app.add_subcommand("serve", "HTTP API over the dataset");
    add_input(serve);
    serve->add_option("--host", cfg.host, "Bind address")->envname("DSM_HOST")->capture_default_str();
    serve->add_option("--port", cfg.port, "Port (0 = ephemeral)")
        ->check(CLI::Range(0, 65535))
        ->envname("DSM_PORT")
        ->capture_default_str();
    serve->add_option("--cors-origin", cfg.cors_origin, "Access-Control-Allow-Origin value (empty disables)")
        ->envname("DSM_CORS_ORIGIN")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << DSM_VERSION << '\n';
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        err << "run with --help for usage\n";
        return 2;
    }

    try {
        if (*summary)
            cmd_summary(cfg, out);
        else if (*clus)
            cmd_cluster(cfg, out);
        else if (*val)
            cmd_validate(cfg, out, kmax_opt->count() > 0);
        else if (*mca_cmd)
            cmd_mca(cfg, out);
        else if (*rec)
            cmd_recommend(cfg, out, err);
        else if (*tree)
            cmd_tree(cfg, out, err);
        else if (*serve)
            return cmd_serve(cfg, out);
    } catch (const Error& e) {
        err << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
        return exit_code(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

} // namespace dsm

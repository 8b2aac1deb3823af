#include "dsm/service.hpp"
#include "dsm/gower.hpp"
#include "dsm/hac.hpp"
#include "dsm/validation.hpp"

#include <httplib.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <optional>

namespace dsm {

Json error_json(ErrorCode code, const std::string& message)
{
    return Json{{"error", {{"code", std::string(to_string(code))}, {"message", message.empty() ? "error" : message}}}};
}

namespace {

// ApiError codes are a subset of ErrorCode; anything else is internal.
ErrorCode api_code(ErrorCode code)
{
    switch (code) {
    case ErrorCode::bad_request:
    case ErrorCode::unknown_dimension:
    case ErrorCode::unknown_value:
    case ErrorCode::degenerate_input:
        return code;
    default:
        return ErrorCode::internal;
    }
}

int status_of(ErrorCode code)
{
    return code == ErrorCode::internal ? 500 : 422;
}

[[noreturn]] void bad(const std::string& message)
{
    throw Error(ErrorCode::bad_request, message);
}

Json parse_body(const std::string& body)
{
    if (body.empty())
        return Json::object();
    Json j = Json::parse(body, nullptr, false);
    if (j.is_discarded())
        bad("request body is not valid JSON");
    if (!j.is_object())
        bad("request body must be a JSON object");
    return j;
}

std::optional<long long> get_int(const Json& j, const char* key)
{
    if (!j.contains(key) || j[key].is_null())
        return std::nullopt;
    if (!j[key].is_number_integer())
        bad(std::string("'") + key + "' must be an integer");
    return j[key].get<long long>();
}

std::optional<double> get_number(const Json& j, const char* key)
{
    if (!j.contains(key) || j[key].is_null())
        return std::nullopt;
    if (!j[key].is_number())
        bad(std::string("'") + key + "' must be a number");
    return j[key].get<double>();
}

Linkage get_linkage(const Json& j)
{
    if (!j.contains("linkage"))
        return Linkage::average;
    if (!j["linkage"].is_string())
        bad("'linkage' must be a string");
    return parse_linkage(j["linkage"].get<std::string>());
}

int to_k(long long v)
{
    if (v < 1 || v > 1'000'000)
        bad("k must be a positive integer, got " + std::to_string(v));
    return static_cast<int>(v);
}

double parse_double(const std::string& text, const char* name)
{
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(v))
        bad(std::string("'") + name + "' must be a number");
    return v;
}

Json handle_summary(const Dataset& d)
{
    Json dims = Json::array();
    for (const auto& dim : d.dimensions())
        dims.push_back(Json{{"name", dim.name}, {"domain", dim.domain}});
    return Json{{"records", d.size()}, {"dimensions", std::move(dims)}, {"frequencies", summary_json(d)}};
}

Json handle_cluster(const Dataset& d, const Json& req)
{
    const auto k = get_int(req, "k");
    if (!k)
        bad("'k' is required");
    const int kk = to_k(*k);
    const Linkage linkage = get_linkage(req);
    std::optional<Partition> overlay;
    if (req.contains("overlay") && !req["overlay"].is_null()) {
        if (!req["overlay"].is_string())
            bad("'overlay' must be a dimension name");
        overlay = partition_by_dimension(d, req["overlay"].get<std::string>());
    }
    const auto matrix = gower_matrix(d);
    const auto tree = cluster(matrix.values, matrix.ids, linkage);
    const auto part = cut(tree, kk);
    return Json{{"dendrogram", dendrogram_json(tree, overlay)}, {"newick", newick(tree)}, {"partition", partition_json(part)}};
}

Json handle_validate(const Dataset& d, const Json& req)
{
    const int n = static_cast<int>(d.size());
    const int kmin = get_int(req, "kmin") ? to_k(*get_int(req, "kmin")) : 2;
    const int kmax = get_int(req, "kmax") ? to_k(*get_int(req, "kmax")) : std::min(10, n);
    const auto seed = get_int(req, "seed");
    if (!seed || *seed < 0)
        bad("'seed' is required and must be a non-negative integer");
    StabilityOptions opt;
    opt.resamples = static_cast<int>(get_int(req, "B").value_or(100));
    if (opt.resamples < 1)
        bad("'B' must be at least 1");
    opt.seed = static_cast<std::uint64_t>(*seed);
    opt.linkage = get_linkage(req);
    opt.dissolution_threshold = get_number(req, "threshold").value_or(0.5);
    const auto min_asw = get_number(req, "min_asw");

    const auto matrix = gower_matrix(d);
    const auto sweep = silhouette_sweep(matrix, opt.linkage, kmin, kmax);
    Json reports = Json::array();
    for (const auto& p : sweep) {
        if (min_asw && p.asw < *min_asw)
            continue;
        opt.k = p.k;
        reports.push_back(stability_json(bootstrap_stability(matrix, opt)));
    }
    return Json{{"sweep", sweep_json(sweep)}, {"stability", std::move(reports)}};
}

Json handle_mca(const Dataset& d, const std::map<std::string, std::string>& query)
{
    const auto it = query.find("retain_threshold");
    if (it == query.end())
        bad("'retain_threshold' query parameter is required");
    const double threshold = parse_double(it->second, "retain_threshold");
    std::size_t top = 5;
    if (const auto t = query.find("top"); t != query.end()) {
        const double v = parse_double(t->second, "top");
        if (v < 1 || v != std::floor(v))
            bad("'top' must be a positive integer");
        top = static_cast<std::size_t>(v);
    }
    const auto summary = summarize_mca(d, threshold, top);
    Json out = mca_json(summary);
    out["retain_threshold"] = threshold;
    return out;
}

PartialAssignment get_bindings(const Json& req)
{
    PartialAssignment partial;
    if (!req.contains("bindings") || req["bindings"].is_null())
        return partial;
    if (!req["bindings"].is_object())
        bad("'bindings' must be an object of dimension -> value");
    for (const auto& [dim, value] : req["bindings"].items()) {
        if (!value.is_string())
            bad("binding for '" + dim + "' must be a string");
        partial.emplace_back(dim, value.get<std::string>());
    }
    return partial;
}

Json handle_descend(const NavigationTree& tree, const Json& req)
{
    std::vector<std::string> path;
    if (req.contains("path") && !req["path"].is_null()) {
        if (!req["path"].is_array())
            bad("'path' must be an array of values");
        for (const auto& v : req["path"]) {
            if (!v.is_string())
                bad("'path' entries must be strings");
            path.push_back(v.get<std::string>());
        }
    }
    return node_view_json(tree.descend(path));
}

} // namespace

struct Service::Server
{
    httplib::Server http;
};

Service::Service(Dataset dataset, ServiceOptions options)
    : m_dataset(std::move(dataset)), m_tree(build_tree(m_dataset)), m_options(std::move(options))
{
}

Service::~Service()
{
    if (m_server)
        m_server->http.stop();
}

ApiResponse Service::handle(const std::string& method, const std::string& path,
                            const std::map<std::string, std::string>& query, const std::string& body) const
{
    try {
        if (method == "GET" && path == "/api/dataset/summary")
            return {200, handle_summary(m_dataset)};
        if (method == "GET" && path == "/api/mca")
            return {200, handle_mca(m_dataset, query)};
        if (method == "GET" && path == "/api/tree") {
            std::size_t depth = 1;
            if (const auto it = query.find("depth"); it != query.end()) {
                const double v = parse_double(it->second, "depth");
                if (v < 0 || v != std::floor(v))
                    bad("'depth' must be a non-negative integer");
                depth = static_cast<std::size_t>(v);
            }
            return {200, tree_json(m_tree, depth)};
        }
        if (method == "POST" && path == "/api/cluster")
            return {200, handle_cluster(m_dataset, parse_body(body))};
        if (method == "POST" && path == "/api/validate")
            return {200, handle_validate(m_dataset, parse_body(body))};
        if (method == "POST" && path == "/api/recommend")
            return {200, recommendation_json(recommend(m_dataset, get_bindings(parse_body(body))))};
        if (method == "POST" && path == "/api/tree/descend")
            return {200, handle_descend(m_tree, parse_body(body))};
        return {404, error_json(ErrorCode::bad_request, "no route for " + method + " " + path)};
    } catch (const Error& e) {
        const auto code = api_code(e.code());
        return {status_of(code), error_json(code, e.what())};
    } catch (const std::exception& e) {
        return {500, error_json(ErrorCode::internal, e.what())};
    }
}

int Service::bind(const std::string& host, int port)
{
    m_server = std::make_unique<Server>();
    auto& http = m_server->http;
    const std::string origin = m_options.cors_origin;

    const auto serve = [this, origin](const httplib::Request& req, httplib::Response& res) {
        std::map<std::string, std::string> query;
        for (const auto& [k, v] : req.params)
            query.emplace(k, v);
        const auto out = handle(req.method, req.path, query, req.body);
        res.status = out.status;
        res.set_content(out.body.dump(), "application/json; charset=utf-8");
    };
    for (const char* route : {"/api/dataset/summary", "/api/mca", "/api/tree"})
        http.Get(route, serve);
    for (const char* route : {"/api/cluster", "/api/validate", "/api/recommend", "/api/tree/descend"})
        http.Post(route, serve);
    http.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
    http.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
        if (!res.body.empty())
            return;
        const auto code = res.status >= 500 ? ErrorCode::internal : ErrorCode::bad_request;
        res.set_content(error_json(code, "no route for " + req.method + " " + req.path).dump(),
                        "application/json; charset=utf-8");
    });
    http.set_post_routing_handler([origin](const httplib::Request&, httplib::Response& res) {
        if (!origin.empty()) {
            res.set_header("Access-Control-Allow-Origin", origin);
            res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
            res.set_header("Access-Control-Allow-Headers", "Content-Type");
        }
    });

    int bound = port;
    if (port == 0)
        bound = http.bind_to_any_port(host);
    else if (!http.bind_to_port(host, port))
        bound = -1;
    if (bound < 0)
        throw Error(ErrorCode::io, "cannot bind " + host + ":" + std::to_string(port));
    return bound;
}

void Service::listen()
{
    if (!m_server)
        throw Error(ErrorCode::internal, "listen() before bind()");
    m_server->http.listen_after_bind();
}

void Service::stop()
{
    if (m_server)
        m_server->http.stop();
}

} // namespace dsm

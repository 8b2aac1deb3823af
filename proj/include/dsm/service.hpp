#ifndef DSM_SERVICE_HPP
#define DSM_SERVICE_HPP

#include "dsm/dataset.hpp"
#include "dsm/export.hpp"
#include "dsm/recommender.hpp"

#include <map>
#include <memory>
#include <string>

namespace dsm {

struct ServiceOptions
{
    std::string cors_origin = "*";
};

struct ApiResponse
{
    int status = 200;
    Json body;
};

// HTTP facade over one immutable dataset. All handlers are const and may run
// concurrently.
class Service
{
public:
    explicit Service(Dataset dataset, ServiceOptions options = {});
    ~Service();

    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    // Transport-independent dispatch; `query` holds URL query parameters.
    ApiResponse handle(const std::string& method, const std::string& path,
                       const std::map<std::string, std::string>& query, const std::string& body) const;

    // Binds to host:port (0 picks an ephemeral port) and returns the port, or
    // throws dsm::Error(io).
    int bind(const std::string& host, int port);
    // Blocks until stop() is called.
    void listen();
    void stop();

    const Dataset& dataset() const noexcept { return m_dataset; }

private:
    Dataset m_dataset;
    NavigationTree m_tree;
    ServiceOptions m_options;
    struct Server;
    std::unique_ptr<Server> m_server;
};

// {"error": {"code": ..., "message": ...}}
Json error_json(ErrorCode code, const std::string& message);

} // namespace dsm

#endif // DSM_SERVICE_HPP

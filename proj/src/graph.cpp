#include "airmax/graph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <string>

#include <nlohmann/json.hpp>

#include "airmax/error.hpp"

namespace airmax {

DirectedTopology::DirectedTopology(std::size_t node_count, std::vector<Arc> arcs)
    : n_(node_count), arcs_(std::move(arcs)), in_(node_count) {
    if (n_ < 2) throw InvalidArgument("topology needs at least 2 agents, got " + std::to_string(n_));
    for (const Arc& a : arcs_) {
        if (a.from >= n_ || a.to >= n_)
            throw InvalidArgument("arc (" + std::to_string(a.from) + "," + std::to_string(a.to) +
                                  ") references an agent outside 0.." + std::to_string(n_ - 1));
        if (a.from == a.to) throw InvalidArgument("self-loop on agent " + std::to_string(a.from));
    }
    std::sort(arcs_.begin(), arcs_.end());
    arcs_.erase(std::unique(arcs_.begin(), arcs_.end()), arcs_.end());
    for (const Arc& a : arcs_) in_[a.to].push_back(a.from);
    for (auto& list : in_) std::sort(list.begin(), list.end());
}

DirectedTopology DirectedTopology::complete(std::size_t n) {
    std::vector<Arc> arcs;
    for (AgentId i = 0; i < n; ++i)
        for (AgentId j = 0; j < n; ++j)
            if (i != j) arcs.push_back({i, j});
    return DirectedTopology(n, std::move(arcs));
}

DirectedTopology DirectedTopology::cycle(std::size_t n) {
    std::vector<Arc> arcs;
    for (AgentId i = 0; i < n; ++i) arcs.push_back({i, (i + 1) % n});
    return DirectedTopology(n, std::move(arcs));
}

DirectedTopology DirectedTopology::bidirectional_path(std::size_t n) {
    std::vector<Arc> arcs;
    for (AgentId i = 0; i + 1 < n; ++i) {
        arcs.push_back({i, i + 1});
        arcs.push_back({i + 1, i});
    }
    return DirectedTopology(n, std::move(arcs));
}

std::span<const AgentId> DirectedTopology::in_neighbors(AgentId i) const {
    if (i >= n_) throw InvalidArgument("agent id " + std::to_string(i) + " out of range");
    return in_[i];
}

bool DirectedTopology::has_arc(AgentId from, AgentId to) const {
    return std::binary_search(arcs_.begin(), arcs_.end(), Arc{from, to});
}

std::uint64_t DirectedTopology::fingerprint() const noexcept {
    std::uint64_t h = mix64(n_);
    for (const Arc& a : arcs_) h = mix64(h ^ (a.from * 0x100000001b3ULL + a.to));
    return h;
}

namespace {

// Hop distances from `source`; unreachable nodes keep SIZE_MAX.
std::vector<std::size_t> bfs(const DirectedTopology& g, AgentId source, bool reverse) {
    const std::size_t n = g.node_count();
    std::vector<std::vector<AgentId>> out(n);
    for (const Arc& a : g.arcs()) {
        if (reverse)
            out[a.to].push_back(a.from);
        else
            out[a.from].push_back(a.to);
    }
    std::vector<std::size_t> dist(n, SIZE_MAX);
    std::deque<AgentId> queue{source};
    dist[source] = 0;
    while (!queue.empty()) {
        AgentId u = queue.front();
        queue.pop_front();
        for (AgentId v : out[u]) {
            if (dist[v] == SIZE_MAX) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    return dist;
}

bool all_reached(const std::vector<std::size_t>& dist) {
    return std::none_of(dist.begin(), dist.end(), [](std::size_t d) { return d == SIZE_MAX; });
}

}  // namespace

bool is_strongly_connected(const DirectedTopology& g) {
    return all_reached(bfs(g, 0, false)) && all_reached(bfs(g, 0, true));
}

std::size_t diameter_bound(const DirectedTopology& g) {
    std::size_t longest = 0;
    for (AgentId s = 0; s < g.node_count(); ++s) {
        const auto dist = bfs(g, s, false);
        if (!all_reached(dist))
            throw InvalidArgument("diameter_bound: topology is not strongly connected");
        longest = std::max(longest, *std::max_element(dist.begin(), dist.end()));
    }
    return longest;
}

DirectedTopology random_strongly_connected(std::size_t n, double density, Stream rng) {
    if (n < 2) throw InvalidArgument("random_strongly_connected: n must be >= 2");
    if (!(density > 0.0 && density <= 1.0))
        throw InvalidArgument("random_strongly_connected: density must lie in (0, 1]");

    std::vector<AgentId> order(n);
    std::iota(order.begin(), order.end(), AgentId{0});
    for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);

    std::vector<Arc> arcs;
    for (std::size_t i = 0; i < n; ++i) arcs.push_back({order[i], order[(i + 1) % n]});

    // Fixed visiting order keeps the extra-arc draws independent of the cycle.
    Stream extra = rng.split("extra-arcs");
    for (AgentId from = 0; from < n; ++from) {
        for (AgentId to = 0; to < n; ++to) {
            if (from == to) continue;
            if (extra.bernoulli(density)) arcs.push_back({from, to});
        }
    }
    return DirectedTopology(n, std::move(arcs));
}

void to_json(nlohmann::json& j, const DirectedTopology& g) {
    nlohmann::json arcs = nlohmann::json::array();
    for (const Arc& a : g.arcs()) arcs.push_back({a.from, a.to});
    j = nlohmann::json{{"n", g.node_count()}, {"arcs", std::move(arcs)}};
}

namespace {

bool is_index(const nlohmann::json& v) {
    return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

}  // namespace

DirectedTopology topology_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("topology", "expected an object");
    for (const auto& [key, value] : j.items())
        if (key != "n" && key != "arcs") throw ConfigError("topology." + key, "unknown key");
    if (!j.contains("n") || !is_index(j["n"]))
        throw ConfigError("topology.n", "expected a non-negative integer");
    if (!j.contains("arcs") || !j["arcs"].is_array())
        throw ConfigError("topology.arcs", "expected an array of [from, to] pairs");
    std::vector<Arc> arcs;
    std::size_t index = 0;
    for (const auto& pair : j["arcs"]) {
        const std::string field = "topology.arcs[" + std::to_string(index++) + "]";
        if (!pair.is_array() || pair.size() != 2 || !is_index(pair[0]) || !is_index(pair[1]))
            throw ConfigError(field, "expected [from, to] with non-negative integer ids");
        arcs.push_back({pair[0].get<AgentId>(), pair[1].get<AgentId>()});
    }
    try {
        return DirectedTopology(j["n"].get<std::size_t>(), std::move(arcs));
    } catch (const InvalidArgument& e) {
        throw ConfigError("topology", e.what());
    }
}

}  // namespace airmax

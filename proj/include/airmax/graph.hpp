#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "airmax/rng.hpp"

namespace airmax {

using AgentId = std::size_t;

/// An arc (from, to): `from` transmits to `to`.
struct Arc {
    AgentId from;
    AgentId to;

    friend auto operator<=>(const Arc&, const Arc&) = default;
};

/// Directed communication topology on agents 0..n-1.
///
/// Immutable once built. Arcs are kept sorted and deduplicated; in-neighbor
/// lists are precomputed because every protocol step reads them.
class DirectedTopology {
public:
    /// Throws InvalidArgument for n < 2, self-loops or out-of-range ids.
    DirectedTopology(std::size_t node_count, std::vector<Arc> arcs);

    static DirectedTopology complete(std::size_t n);
    /// 0 -> 1 -> ... -> n-1 -> 0
    static DirectedTopology cycle(std::size_t n);
    /// 0 <-> 1 <-> ... <-> n-1
    static DirectedTopology bidirectional_path(std::size_t n);

    std::size_t node_count() const noexcept { return n_; }
    std::span<const Arc> arcs() const noexcept { return arcs_; }

    /// Sorted set { j | (j, i) is an arc }. Throws on invalid i.
    std::span<const AgentId> in_neighbors(AgentId i) const;
    bool has_arc(AgentId from, AgentId to) const;

    /// Order-sensitive 64-bit fingerprint of (n, arcs).
    std::uint64_t fingerprint() const noexcept;

    friend bool operator==(const DirectedTopology& a, const DirectedTopology& b) {
        return a.n_ == b.n_ && a.arcs_ == b.arcs_;
    }

private:
    std::size_t n_;
    std::vector<Arc> arcs_;
    std::vector<std::vector<AgentId>> in_;
};

bool is_strongly_connected(const DirectedTopology& g);

/// Largest shortest-path length over ordered pairs. Throws InvalidArgument
/// when the graph is not strongly connected.
std::size_t diameter_bound(const DirectedTopology& g);

/// Random Hamiltonian cycle plus every other ordered pair with probability
/// `density`. Always strongly connected; deterministic in the stream key.
DirectedTopology random_strongly_connected(std::size_t n, double density, Stream rng);

void to_json(nlohmann::json& j, const DirectedTopology& g);
DirectedTopology topology_from_json(const nlohmann::json& j);

}  // namespace airmax

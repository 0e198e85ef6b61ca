#pragma once

/**
 * @file graph.hpp
 * @brief Creational dependency graph: asset types, prerequisite edges with
 *        counts, reachability and prerequisite checks against holdings.
 */

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "pdg/report.hpp"

namespace pdg
{

using AssetId = std::string;

struct AssetType
{
    AssetId id;
    std::string display_name;

    bool operator==(const AssetType&) const = default;
};

/// Direct prerequisite relation: `required_count` live instances of
/// `prerequisite` must be held before `product` can be created.
struct CreationalEdge
{
    AssetId prerequisite;
    AssetId product;
    std::int64_t required_count = 1;

    bool operator==(const CreationalEdge&) const = default;
};

/// Thrown when an operation names an asset that is not part of the graph.
class UnknownAssetError : public std::out_of_range
{
public:
    explicit UnknownAssetError(const AssetId& id)
        : std::out_of_range("unknown asset id '" + id + "'")
        , m_id(id)
    {}

    const AssetId& id() const noexcept { return m_id; }

private:
    AssetId m_id;
};

/// Live asset counts owned by one player. Absent keys mean zero.
class Holdings
{
public:
    Holdings() = default;
    Holdings(std::initializer_list<std::pair<const AssetId, std::int64_t>> init);

    std::int64_t count(const AssetId& id) const;
    void add(const AssetId& id, std::int64_t n);
    /// Precondition: count(id) >= n.
    void remove(const AssetId& id, std::int64_t n);

    /// True when every count is zero.
    bool empty() const noexcept { return m_counts.empty(); }
    std::int64_t total() const noexcept;

    /// Only positive counts are stored.
    const std::map<AssetId, std::int64_t>& counts() const noexcept { return m_counts; }

    bool operator==(const Holdings&) const = default;

private:
    std::map<AssetId, std::int64_t> m_counts;
};

/// One unmet prerequisite of a creation attempt.
struct Shortfall
{
    AssetId prerequisite;
    std::int64_t required = 0;
    std::int64_t have = 0;

    bool operator==(const Shortfall&) const = default;
};

/**
 * @brief Immutable creational dependency graph.
 *
 * Construction accepts arbitrary candidate graphs (including cyclic ones,
 * duplicate edges and dangling endpoints) so that validate() can report
 * every defect. Queries ignore edges whose endpoints are unknown.
 */
class CreationalGraph
{
public:
    CreationalGraph() = default;
    CreationalGraph(std::vector<AssetType> assets, std::vector<CreationalEdge> edges);

    const std::vector<AssetType>& assets() const noexcept { return m_assets; }
    const std::vector<CreationalEdge>& edges() const noexcept { return m_edges; }
    std::size_t size() const noexcept { return m_index.size(); }

    bool contains(const AssetId& id) const { return m_index.contains(id); }
    const AssetType& asset(const AssetId& id) const;

    /// Assets without incoming edges, in declaration order.
    std::vector<AssetId> roots() const;

    /// Sorted asset ids.
    std::vector<AssetId> ids() const;

    /// Edges ending at `product`, in declaration order.
    std::vector<CreationalEdge> incoming(const AssetId& product) const;
    std::vector<CreationalEdge> outgoing(const AssetId& prerequisite) const;

    /// Strict reachability via a per-query graph search.
    bool reachable(const AssetId& ancestor, const AssetId& descendant) const;

    /// Read from the transitive closure computed at construction.
    std::set<AssetId> descendants(const AssetId& asset) const;

    bool can_create(const AssetId& asset, const Holdings& holdings) const;
    std::vector<Shortfall> missing_prerequisites(const AssetId& asset,
                                                 const Holdings& holdings) const;
    std::set<AssetId> creation_frontier(const Holdings& holdings) const;

    /// Largest required_count over all edges (1 for edgeless graphs).
    std::int64_t max_required_count() const noexcept;

private:
    std::size_t index_of(const AssetId& id) const;

    std::vector<AssetType> m_assets;
    std::vector<CreationalEdge> m_edges;
    std::unordered_map<AssetId, std::size_t> m_index;
    // Indexed by asset slot; hold positions into m_edges.
    std::vector<std::vector<std::size_t>> m_in;
    std::vector<std::vector<std::size_t>> m_out;
    std::vector<std::vector<bool>> m_closure;
};

/// Structural validation: duplicate ids, bad edges, cycles, disconnected
/// content. Errors are returned as data.
ValidationReport validate(const CreationalGraph& graph);

/// Kahn's algorithm; nullopt when some node lies on or behind a cycle.
std::optional<std::vector<AssetId>> topological_order(const CreationalGraph& graph);

inline bool reachable(const CreationalGraph& g, const AssetId& a, const AssetId& d)
{
    return g.reachable(a, d);
}

inline std::set<AssetId> descendants(const CreationalGraph& g, const AssetId& a)
{
    return g.descendants(a);
}

inline bool can_create(const CreationalGraph& g, const AssetId& a, const Holdings& h)
{
    return g.can_create(a, h);
}

inline std::set<AssetId> creation_frontier(const CreationalGraph& g, const Holdings& h)
{
    return g.creation_frontier(h);
}

} // namespace pdg

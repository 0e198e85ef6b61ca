#include "pdg/graph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <sstream>

namespace pdg
{

// ---------------------------------------------------------------------------
// Holdings

Holdings::Holdings(std::initializer_list<std::pair<const AssetId, std::int64_t>> init)
{
    for (const auto& [id, n] : init)
    {
        add(id, n);
    }
}

std::int64_t Holdings::count(const AssetId& id) const
{
    auto it = m_counts.find(id);
    return it == m_counts.end() ? 0 : it->second;
}

void Holdings::add(const AssetId& id, std::int64_t n)
{
    if (n < 0)
    {
        throw std::invalid_argument("Holdings::add: negative count for '" + id + "'");
    }
    if (n == 0)
    {
        return;
    }
    m_counts[id] += n;
}

void Holdings::remove(const AssetId& id, std::int64_t n)
{
    if (n < 0 || count(id) < n)
    {
        throw std::invalid_argument("Holdings::remove: cannot remove " + std::to_string(n) +
                                    " of '" + id + "'");
    }
    if (n == 0)
    {
        return;
    }
    auto it = m_counts.find(id);
    it->second -= n;
    if (it->second == 0)
    {
        m_counts.erase(it);
    }
}

std::int64_t Holdings::total() const noexcept
{
    std::int64_t sum = 0;
    for (const auto& [id, n] : m_counts)
    {
        sum += n;
    }
    return sum;
}

// ---------------------------------------------------------------------------
// CreationalGraph

CreationalGraph::CreationalGraph(std::vector<AssetType> assets, std::vector<CreationalEdge> edges)
    : m_assets(std::move(assets))
    , m_edges(std::move(edges))
{
    // First declaration of a duplicated id wins; validate() reports the rest.
    for (const auto& a : m_assets)
    {
        m_index.try_emplace(a.id, m_index.size());
    }
    const std::size_t n = m_index.size();
    m_in.assign(n, {});
    m_out.assign(n, {});
    m_closure.assign(n, std::vector<bool>(n, false));

    for (std::size_t e = 0; e < m_edges.size(); ++e)
    {
        const auto& edge = m_edges[e];
        auto p = m_index.find(edge.prerequisite);
        auto q = m_index.find(edge.product);
        if (p == m_index.end() || q == m_index.end())
        {
            continue;
        }
        m_out[p->second].push_back(e);
        m_in[q->second].push_back(e);
        m_closure[p->second][q->second] = true;
    }

    // Warshall closure over the direct-edge relation.
    for (std::size_t k = 0; k < n; ++k)
    {
        for (std::size_t i = 0; i < n; ++i)
        {
            if (!m_closure[i][k])
            {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j)
            {
                if (m_closure[k][j])
                {
                    m_closure[i][j] = true;
                }
            }
        }
    }
}

std::size_t CreationalGraph::index_of(const AssetId& id) const
{
    auto it = m_index.find(id);
    if (it == m_index.end())
    {
        throw UnknownAssetError(id);
    }
    return it->second;
}

const AssetType& CreationalGraph::asset(const AssetId& id) const
{
    index_of(id);
    return *std::find_if(m_assets.begin(), m_assets.end(),
                         [&](const AssetType& a) { return a.id == id; });
}

std::vector<AssetId> CreationalGraph::roots() const
{
    std::vector<AssetId> out;
    for (const auto& [id, slot] : m_index)
    {
        if (m_in[slot].empty())
        {
            out.push_back(id);
        }
    }
    std::sort(out.begin(), out.end(), [&](const AssetId& a, const AssetId& b) {
        return m_index.at(a) < m_index.at(b);
    });
    return out;
}

std::vector<AssetId> CreationalGraph::ids() const
{
    std::vector<AssetId> out;
    out.reserve(m_index.size());
    for (const auto& [id, slot] : m_index)
    {
        out.push_back(id);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<CreationalEdge> CreationalGraph::incoming(const AssetId& product) const
{
    std::vector<CreationalEdge> out;
    for (std::size_t e : m_in[index_of(product)])
    {
        out.push_back(m_edges[e]);
    }
    return out;
}

std::vector<CreationalEdge> CreationalGraph::outgoing(const AssetId& prerequisite) const
{
    std::vector<CreationalEdge> out;
    for (std::size_t e : m_out[index_of(prerequisite)])
    {
        out.push_back(m_edges[e]);
    }
    return out;
}

bool CreationalGraph::reachable(const AssetId& ancestor, const AssetId& descendant) const
{
    const std::size_t from = index_of(ancestor);
    const std::size_t to = index_of(descendant);
    if (from == to)
    {
        return false;
    }

    std::vector<bool> seen(m_index.size(), false);
    std::vector<std::size_t> stack{from};
    seen[from] = true;
    while (!stack.empty())
    {
        const std::size_t cur = stack.back();
        stack.pop_back();
        for (std::size_t e : m_out[cur])
        {
            const std::size_t next = m_index.at(m_edges[e].product);
            if (next == to)
            {
                return true;
            }
            if (!seen[next])
            {
                seen[next] = true;
                stack.push_back(next);
            }
        }
    }
    return false;
}

std::set<AssetId> CreationalGraph::descendants(const AssetId& asset) const
{
    const std::size_t from = index_of(asset);
    std::set<AssetId> out;
    for (const auto& [id, slot] : m_index)
    {
        if (slot != from && m_closure[from][slot])
        {
            out.insert(id);
        }
    }
    return out;
}

bool CreationalGraph::can_create(const AssetId& asset, const Holdings& holdings) const
{
    for (std::size_t e : m_in[index_of(asset)])
    {
        const auto& edge = m_edges[e];
        if (holdings.count(edge.prerequisite) < edge.required_count)
        {
            return false;
        }
    }
    return true;
}

std::vector<Shortfall> CreationalGraph::missing_prerequisites(const AssetId& asset,
                                                              const Holdings& holdings) const
{
    std::vector<Shortfall> out;
    for (std::size_t e : m_in[index_of(asset)])
    {
        const auto& edge = m_edges[e];
        const std::int64_t have = holdings.count(edge.prerequisite);
        if (have < edge.required_count)
        {
            out.push_back({edge.prerequisite, edge.required_count, have});
        }
    }
    return out;
}

std::set<AssetId> CreationalGraph::creation_frontier(const Holdings& holdings) const
{
    std::set<AssetId> out;
    for (const auto& [id, slot] : m_index)
    {
        if (can_create(id, holdings))
        {
            out.insert(id);
        }
    }
    return out;
}

std::int64_t CreationalGraph::max_required_count() const noexcept
{
    std::int64_t best = 1;
    for (const auto& e : m_edges)
    {
        best = std::max(best, e.required_count);
    }
    return best;
}

// ---------------------------------------------------------------------------
// Validation

namespace
{

std::string edge_name(const CreationalEdge& e)
{
    return e.prerequisite + "->" + e.product;
}

std::string join_path(const std::vector<std::string>& path)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < path.size(); ++i)
    {
        os << (i ? " -> " : "") << path[i];
    }
    return os.str();
}

std::string join(const std::vector<std::string>& names)
{
    std::string out;
    for (const auto& n : names)
    {
        out += (out.empty() ? "" : ", ") + n;
    }
    return out;
}

/// Edges that take part in ordering: known endpoints, not self loops.
std::vector<std::pair<std::size_t, std::size_t>>
ordering_edges(const CreationalGraph& g, const std::unordered_map<AssetId, std::size_t>& index)
{
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (const auto& e : g.edges())
    {
        auto p = index.find(e.prerequisite);
        auto q = index.find(e.product);
        if (p != index.end() && q != index.end() && p->second != q->second)
        {
            out.emplace_back(p->second, q->second);
        }
    }
    return out;
}

struct Indexed
{
    std::vector<AssetId> ids; // declaration order, unique
    std::unordered_map<AssetId, std::size_t> index;
};

Indexed index_assets(const CreationalGraph& g)
{
    Indexed out;
    for (const auto& a : g.assets())
    {
        if (out.index.try_emplace(a.id, out.ids.size()).second)
        {
            out.ids.push_back(a.id);
        }
    }
    return out;
}

/// Kahn's algorithm over slot indices. Returns the consumed order.
std::vector<std::size_t> kahn(std::size_t n,
                              const std::vector<std::pair<std::size_t, std::size_t>>& edges)
{
    std::vector<std::size_t> indegree(n, 0);
    std::vector<std::vector<std::size_t>> out(n);
    for (const auto& [p, q] : edges)
    {
        out[p].push_back(q);
        ++indegree[q];
    }
    std::queue<std::size_t> ready;
    for (std::size_t i = 0; i < n; ++i)
    {
        if (indegree[i] == 0)
        {
            ready.push(i);
        }
    }
    std::vector<std::size_t> order;
    while (!ready.empty())
    {
        const std::size_t cur = ready.front();
        ready.pop();
        order.push_back(cur);
        for (std::size_t next : out[cur])
        {
            if (--indegree[next] == 0)
            {
                ready.push(next);
            }
        }
    }
    return order;
}

/// Finds one closed cycle among `candidates` (nodes Kahn left behind).
std::vector<std::size_t> find_cycle(std::size_t n,
                                    const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                                    const std::vector<bool>& candidates)
{
    std::vector<std::vector<std::size_t>> out(n);
    for (const auto& [p, q] : edges)
    {
        if (candidates[p] && candidates[q])
        {
            out[p].push_back(q);
        }
    }

    enum class Color { white, grey, black };
    std::vector<Color> color(n, Color::white);
    std::vector<std::size_t> path;

    for (std::size_t start = 0; start < n; ++start)
    {
        if (!candidates[start] || color[start] != Color::white)
        {
            continue;
        }
        // Iterative DFS keeping the grey path explicit.
        std::vector<std::pair<std::size_t, std::size_t>> stack{{start, 0}};
        color[start] = Color::grey;
        path.assign(1, start);
        while (!stack.empty())
        {
            auto& [node, next_edge] = stack.back();
            if (next_edge < out[node].size())
            {
                const std::size_t next = out[node][next_edge++];
                if (color[next] == Color::grey)
                {
                    auto it = std::find(path.begin(), path.end(), next);
                    std::vector<std::size_t> cycle(it, path.end());
                    cycle.push_back(next);
                    return cycle;
                }
                if (color[next] == Color::white)
                {
                    color[next] = Color::grey;
                    path.push_back(next);
                    stack.emplace_back(next, 0);
                }
            }
            else
            {
                color[node] = Color::black;
                path.pop_back();
                stack.pop_back();
            }
        }
    }
    return {};
}

} // namespace

std::optional<std::vector<AssetId>> topological_order(const CreationalGraph& graph)
{
    const Indexed idx = index_assets(graph);
    const auto edges = ordering_edges(graph, idx.index);
    const auto order = kahn(idx.ids.size(), edges);
    if (order.size() != idx.ids.size())
    {
        return std::nullopt;
    }
    bool self_loop = std::any_of(graph.edges().begin(), graph.edges().end(),
                                 [](const CreationalEdge& e) { return e.prerequisite == e.product; });
    if (self_loop)
    {
        return std::nullopt;
    }
    std::vector<AssetId> out;
    out.reserve(order.size());
    for (std::size_t i : order)
    {
        out.push_back(idx.ids[i]);
    }
    return out;
}

ValidationReport validate(const CreationalGraph& graph)
{
    ValidationReport report;
    const Indexed idx = index_assets(graph);

    {
        std::set<AssetId> seen;
        for (const auto& a : graph.assets())
        {
            if (a.id.empty())
            {
                report.error("empty_asset_id", "asset with empty id");
            }
            else if (!seen.insert(a.id).second)
            {
                report.error("duplicate_asset", "duplicate asset id '" + a.id + "'", {a.id});
            }
        }
    }

    std::set<std::pair<AssetId, AssetId>> seen_edges;
    for (const auto& e : graph.edges())
    {
        for (const AssetId* end : {&e.prerequisite, &e.product})
        {
            if (!idx.index.contains(*end))
            {
                report.error("unknown_asset",
                             "edge " + edge_name(e) + " references unknown asset '" + *end + "'",
                             {e.prerequisite, e.product});
            }
        }
        if (e.prerequisite == e.product)
        {
            report.error("self_edge", "self edge on '" + e.prerequisite + "'",
                         {e.prerequisite, e.product});
        }
        if (e.required_count < 1)
        {
            report.error("invalid_count",
                         "edge " + edge_name(e) + " has required_count " +
                             std::to_string(e.required_count) + " (must be >= 1)",
                         {e.prerequisite, e.product});
        }
        if (!seen_edges.emplace(e.prerequisite, e.product).second)
        {
            report.error("duplicate_edge", "duplicate edge " + edge_name(e),
                         {e.prerequisite, e.product});
        }
    }

    const std::size_t n = idx.ids.size();
    const auto edges = ordering_edges(graph, idx.index);
    const auto order = kahn(n, edges);
    if (order.size() != n)
    {
        std::vector<bool> leftover(n, true);
        for (std::size_t i : order)
        {
            leftover[i] = false;
        }
        std::vector<std::string> path;
        for (std::size_t i : find_cycle(n, edges, leftover))
        {
            path.push_back(idx.ids[i]);
        }
        report.error("cycle", "dependency cycle " + join_path(path), path);
    }

    if (n == 0)
    {
        report.warning("no_roots", "graph has no assets and therefore no roots");
        return report;
    }

    std::vector<bool> has_incoming(n, false);
    std::vector<std::vector<std::size_t>> undirected(n);
    std::vector<std::vector<std::size_t>> forward(n);
    for (const auto& [p, q] : edges)
    {
        has_incoming[q] = true;
        undirected[p].push_back(q);
        undirected[q].push_back(p);
        forward[p].push_back(q);
    }

    std::vector<bool> from_root(n, false);
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < n; ++i)
    {
        if (!has_incoming[i])
        {
            from_root[i] = true;
            stack.push_back(i);
        }
    }
    if (stack.empty())
    {
        report.warning("no_roots", "every asset has a prerequisite; nothing is creatable");
    }
    while (!stack.empty())
    {
        const std::size_t cur = stack.back();
        stack.pop_back();
        for (std::size_t next : forward[cur])
        {
            if (!from_root[next])
            {
                from_root[next] = true;
                stack.push_back(next);
            }
        }
    }
    std::vector<std::string> orphans;
    for (std::size_t i = 0; i < n; ++i)
    {
        if (!from_root[i])
        {
            orphans.push_back(idx.ids[i]);
        }
    }
    if (!orphans.empty())
    {
        report.warning("orphan", "assets not reachable from any root: " + join(orphans), orphans);
    }

    // Weakly connected components; every component but the first is staged
    // content disconnected from the main tree.
    std::vector<int> component(n, -1);
    int components = 0;
    for (std::size_t start = 0; start < n; ++start)
    {
        if (component[start] >= 0)
        {
            continue;
        }
        std::vector<std::size_t> members{start};
        component[start] = components;
        for (std::size_t k = 0; k < members.size(); ++k)
        {
            for (std::size_t next : undirected[members[k]])
            {
                if (component[next] < 0)
                {
                    component[next] = components;
                    members.push_back(next);
                }
            }
        }
        if (components > 0)
        {
            std::vector<std::string> names;
            for (std::size_t m : members)
            {
                names.push_back(idx.ids[m]);
            }
            std::sort(names.begin(), names.end());
            report.warning("disconnected",
                           "component disconnected from '" + idx.ids[0] + "': " + join(names),
                           names);
        }
        ++components;
    }

    return report;
}

} // namespace pdg

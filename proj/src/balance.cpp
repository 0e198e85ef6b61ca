#include "pdg/balance.hpp"

#include <algorithm>

namespace pdg
{

ValidationReport check_matrix_entries(const CreationalGraph& graph,
                                      const std::vector<DependencyValueEntry>& entries)
{
    ValidationReport report;
    std::set<std::pair<AssetId, AssetId>> seen;
    for (const auto& e : entries)
    {
        const std::string pair = e.ancestor + "->" + e.descendant;
        bool known = true;
        for (const AssetId* id : {&e.ancestor, &e.descendant})
        {
            if (!graph.contains(*id))
            {
                report.error("unknown_asset",
                             "dependency value " + pair + " references unknown asset '" + *id +
                                 "'",
                             {e.ancestor, e.descendant});
                known = false;
            }
        }
        if (e.value < 1)
        {
            report.error("invalid_value",
                         "dependency value " + pair + " is " + std::to_string(e.value) +
                             " (must be >= 1; omit the pair for 0)",
                         {e.ancestor, e.descendant});
        }
        if (!seen.emplace(e.ancestor, e.descendant).second)
        {
            report.error("duplicate_value", "duplicate dependency value " + pair,
                         {e.ancestor, e.descendant});
        }
        if (known && !graph.reachable(e.ancestor, e.descendant))
        {
            report.error("unreachable_pair",
                         "value on unreachable pair " + pair + ": no creational path leads from '" +
                             e.ancestor + "' to '" + e.descendant + "'",
                         {e.ancestor, e.descendant});
        }
    }
    return report;
}

DependencyValueMatrix::DependencyValueMatrix(const CreationalGraph& graph,
                                             const std::vector<DependencyValueEntry>& entries)
{
    ValidationReport report = check_matrix_entries(graph, entries);
    if (!report.ok())
    {
        std::string what = "invalid dependency value matrix: " + report.errors().front().message;
        throw MatrixError(what, std::move(report));
    }
    for (const auto& a : graph.assets())
    {
        m_assets.insert(a.id);
    }
    for (const auto& e : entries)
    {
        m_values.emplace(std::make_pair(e.ancestor, e.descendant), e.value);
    }
}

void DependencyValueMatrix::require_known(const AssetId& id) const
{
    if (!m_assets.contains(id))
    {
        throw UnknownAssetError(id);
    }
}

std::int64_t DependencyValueMatrix::value(const AssetId& ancestor, const AssetId& descendant) const
{
    require_known(ancestor);
    require_known(descendant);
    auto it = m_values.find({ancestor, descendant});
    return it == m_values.end() ? 0 : it->second;
}

std::int64_t DependencyValueMatrix::row_sum(const AssetId& ancestor) const
{
    require_known(ancestor);
    std::int64_t sum = 0;
    for (auto it = m_values.lower_bound({ancestor, AssetId{}});
         it != m_values.end() && it->first.first == ancestor; ++it)
    {
        sum += it->second;
    }
    return sum;
}

std::vector<DependencyValueEntry> DependencyValueMatrix::entries() const
{
    std::vector<DependencyValueEntry> out;
    out.reserve(m_values.size());
    for (const auto& [key, v] : m_values)
    {
        out.push_back({key.first, key.second, v});
    }
    return out;
}

std::int64_t dependency_value(const DependencyValueMatrix& matrix, const AssetId& ancestor,
                              const AssetId& descendant)
{
    return matrix.value(ancestor, descendant);
}

std::int64_t aggregate_path_value(const CreationalGraph& graph,
                                  const DependencyValueMatrix& matrix, const AssetId& asset)
{
    if (!graph.contains(asset))
    {
        throw UnknownAssetError(asset);
    }
    return matrix.row_sum(asset);
}

AggregateTable aggregate_table(const CreationalGraph& graph, const DependencyValueMatrix& matrix)
{
    AggregateTable out;
    for (const auto& id : graph.ids())
    {
        out[id] = aggregate_path_value(graph, matrix, id);
    }
    return out;
}

std::vector<RankedAsset> significance_ranking(const CreationalGraph& graph,
                                              const DependencyValueMatrix& matrix)
{
    std::vector<RankedAsset> out;
    for (const auto& [id, total] : aggregate_table(graph, matrix))
    {
        out.push_back({id, total});
    }
    std::stable_sort(out.begin(), out.end(), [](const RankedAsset& a, const RankedAsset& b) {
        if (a.total != b.total)
        {
            return a.total > b.total;
        }
        return a.asset < b.asset;
    });
    return out;
}

// ---------------------------------------------------------------------------
// CeasefirePolicy

CeasefirePolicy::CeasefirePolicy(std::map<AssetId, Seconds> durations, AggregateTable totals,
                                 Interpolation interpolation)
    : m_durations(std::move(durations))
    , m_totals(std::move(totals))
    , m_interpolation(interpolation)
{
    for (const auto& [id, seconds] : m_durations)
    {
        auto t = m_totals.find(id);
        if (t == m_totals.end())
        {
            continue;
        }
        auto [it, inserted] = m_anchors.emplace(t->second, seconds);
        if (!inserted)
        {
            it->second = std::max(it->second, seconds);
        }
    }
}

Seconds CeasefirePolicy::interpolate(std::int64_t total) const
{
    if (total <= 0 || m_anchors.empty())
    {
        return 0;
    }
    auto upper = m_anchors.lower_bound(total);
    if (upper != m_anchors.end() && upper->first == total)
    {
        return std::max<Seconds>(upper->second, 0);
    }
    if (upper == m_anchors.begin())
    {
        return std::max<Seconds>(upper->second, 0);
    }
    auto lower = std::prev(upper);
    if (upper == m_anchors.end())
    {
        return std::max<Seconds>(lower->second, 0);
    }
    const std::int64_t span = upper->first - lower->first;
    const std::int64_t rise = upper->second - lower->second;
    const std::int64_t num = rise * (total - lower->first);
    // floor division; num may be negative for a non-monotone table
    std::int64_t step = num / span;
    if (num % span != 0 && num < 0)
    {
        --step;
    }
    return std::max<Seconds>(lower->second + step, 0);
}

Seconds CeasefirePolicy::duration(const AssetId& asset) const
{
    auto t = m_totals.find(asset);
    if (t == m_totals.end())
    {
        throw UnknownAssetError(asset);
    }
    if (auto it = m_durations.find(asset); it != m_durations.end())
    {
        return std::max<Seconds>(it->second, 0);
    }
    if (m_interpolation == Interpolation::none)
    {
        return 0;
    }
    return interpolate(t->second);
}

DurationSource CeasefirePolicy::source(const AssetId& asset) const
{
    if (!m_totals.contains(asset))
    {
        throw UnknownAssetError(asset);
    }
    return m_durations.contains(asset) ? DurationSource::explicit_entry
                                       : DurationSource::interpolated;
}

ValidationReport validate_policy(const CeasefirePolicy& policy, const CreationalGraph& graph,
                                 const DependencyValueMatrix& matrix)
{
    ValidationReport report;
    const AggregateTable totals = aggregate_table(graph, matrix);

    for (const auto& [id, seconds] : policy.durations())
    {
        if (!graph.contains(id))
        {
            report.error("unknown_asset", "cease-fire entry for unknown asset '" + id + "'", {id});
        }
        if (seconds < 0)
        {
            report.error("negative_duration",
                         "cease-fire for '" + id + "' is negative (" + std::to_string(seconds) +
                             " s)",
                         {id});
        }
    }

    std::map<AssetId, Seconds> effective;
    for (const auto& [id, total] : totals)
    {
        if (!policy.totals().contains(id))
        {
            report.error("unbound_asset",
                         "policy was built without an aggregate total for '" + id + "'", {id});
            continue;
        }
        const bool listed = policy.durations().contains(id);
        if (!listed && policy.interpolation() == Interpolation::none && total > 0)
        {
            report.error("missing_duration",
                         "no cease-fire duration for '" + id + "' (aggregate " +
                             std::to_string(total) + ") and interpolation is disabled",
                         {id});
        }
        effective[id] = policy.duration(id);
        if (total == 0 && effective[id] != 0)
        {
            report.error("nonzero_for_zero_total",
                         "'" + id + "' has aggregate 0 but cease-fire " +
                             std::to_string(effective[id]) + " s",
                         {id});
        }
    }

    for (const auto& [a, da] : effective)
    {
        for (const auto& [b, db] : effective)
        {
            if (totals.at(a) > totals.at(b) && da < db)
            {
                report.error("non_monotone",
                             "'" + a + "' (aggregate " + std::to_string(totals.at(a)) + ", " +
                                 std::to_string(da) + " s) is shorter than '" + b +
                                 "' (aggregate " + std::to_string(totals.at(b)) + ", " +
                                 std::to_string(db) + " s)",
                             {a, b});
            }
        }
    }
    return report;
}

} // namespace pdg

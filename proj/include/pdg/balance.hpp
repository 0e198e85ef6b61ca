#pragma once

/**
 * @file balance.hpp
 * @brief Dependency values on ancestor/descendant asset pairs, aggregate
 *        path values, significance ranking and the cease-fire policy.
 *
 * All weights are exact integers. Durations are whole seconds.
 */

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pdg/graph.hpp"
#include "pdg/report.hpp"

namespace pdg
{

using Seconds = std::int64_t;

struct DependencyValueEntry
{
    AssetId ancestor;
    AssetId descendant;
    std::int64_t value = 0;

    bool operator==(const DependencyValueEntry&) const = default;
};

/// Thrown when a matrix is built from entries that break its invariants.
class MatrixError : public std::invalid_argument
{
public:
    MatrixError(const std::string& what, ValidationReport report)
        : std::invalid_argument(what)
        , m_report(std::move(report))
    {}

    const ValidationReport& report() const noexcept { return m_report; }

private:
    ValidationReport m_report;
};

/// Checks entries against the graph: known ids, value >= 1, no duplicate
/// pair, and the descendant reachable from the ancestor.
ValidationReport check_matrix_entries(const CreationalGraph& graph,
                                      const std::vector<DependencyValueEntry>& entries);

/**
 * @brief Sparse (ancestor, descendant) -> weight map, keyed on reachable
 *        pairs of its companion graph. Absent pairs have value 0.
 */
class DependencyValueMatrix
{
public:
    DependencyValueMatrix() = default;

    /// Throws MatrixError when check_matrix_entries() reports any error.
    DependencyValueMatrix(const CreationalGraph& graph,
                          const std::vector<DependencyValueEntry>& entries);

    /// Throws UnknownAssetError for ids outside the companion graph.
    std::int64_t value(const AssetId& ancestor, const AssetId& descendant) const;

    /// Sum of the row keyed by `ancestor`.
    std::int64_t row_sum(const AssetId& ancestor) const;

    const std::map<std::pair<AssetId, AssetId>, std::int64_t>& values() const noexcept
    {
        return m_values;
    }

    std::vector<DependencyValueEntry> entries() const;

private:
    void require_known(const AssetId& id) const;

    std::set<AssetId> m_assets;
    std::map<std::pair<AssetId, AssetId>, std::int64_t> m_values;
};

/// Aggregate path dependency value per asset.
using AggregateTable = std::map<AssetId, std::int64_t>;

std::int64_t dependency_value(const DependencyValueMatrix& matrix, const AssetId& ancestor,
                              const AssetId& descendant);

std::int64_t aggregate_path_value(const CreationalGraph& graph,
                                  const DependencyValueMatrix& matrix, const AssetId& asset);

AggregateTable aggregate_table(const CreationalGraph& graph, const DependencyValueMatrix& matrix);

struct RankedAsset
{
    AssetId asset;
    std::int64_t total = 0;

    bool operator==(const RankedAsset&) const = default;
};

/// Totals descending, ties by id ascending.
std::vector<RankedAsset> significance_ranking(const CreationalGraph& graph,
                                              const DependencyValueMatrix& matrix);

enum class Interpolation
{
    none,
    piecewise_linear,
};

enum class DurationSource
{
    explicit_entry,
    interpolated,
};

/**
 * @brief Maps a destroyed asset to the No-Attack duration imposed on the
 *        attacker.
 *
 * Explicit durations come from a lookup table. Unlisted assets with a
 * positive aggregate total are interpolated piecewise-linearly between the
 * nearest listed totals and clamped at the ends (when interpolation is
 * enabled); unlisted assets otherwise get 0.
 */
class CeasefirePolicy
{
public:
    CeasefirePolicy() = default;
    CeasefirePolicy(std::map<AssetId, Seconds> durations, AggregateTable totals,
                    Interpolation interpolation = Interpolation::piecewise_linear);

    /// Throws UnknownAssetError for assets outside the bound totals.
    Seconds duration(const AssetId& asset) const;
    DurationSource source(const AssetId& asset) const;

    const std::map<AssetId, Seconds>& durations() const noexcept { return m_durations; }
    const AggregateTable& totals() const noexcept { return m_totals; }
    Interpolation interpolation() const noexcept { return m_interpolation; }

private:
    Seconds interpolate(std::int64_t total) const;

    std::map<AssetId, Seconds> m_durations;
    AggregateTable m_totals;
    Interpolation m_interpolation = Interpolation::piecewise_linear;
    // total -> largest listed duration at that total
    std::map<std::int64_t, Seconds> m_anchors;
};

inline Seconds ceasefire_duration(const CeasefirePolicy& policy, const AssetId& asset)
{
    return policy.duration(asset);
}

/// Monotonicity against aggregate totals, zero-total assets mapped to 0,
/// coverage when interpolation is off, and unknown or negative entries.
ValidationReport validate_policy(const CeasefirePolicy& policy, const CreationalGraph& graph,
                                 const DependencyValueMatrix& matrix);

} // namespace pdg

#pragma once

/**
 * @file analysis.hpp
 * @brief Report bundle (significance and cease-fire tables, experiment
 *        summaries, event logs) and its CSV/JSON serializers.
 */

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pdg/balance.hpp"
#include "pdg/scenario.hpp"
#include "pdg/simulator.hpp"

namespace pdg
{

/// One asset's row: aggregate path value and effective cease-fire.
struct SignificanceRow
{
    AssetId asset;
    std::int64_t aggregate_value = 0;
    Seconds ceasefire_seconds = 0;
    DurationSource source = DurationSource::explicit_entry;

    bool operator==(const SignificanceRow&) const = default;
};

struct NamedEventLog
{
    std::string name;
    std::vector<MatchEvent> events;

    bool operator==(const NamedEventLog&) const = default;
};

struct ReportBundle
{
    /// Ordered by significance ranking.
    std::vector<SignificanceRow> rows;
    std::optional<ExperimentReport> experiment;
    std::vector<NamedEventLog> event_logs;

    bool operator==(const ReportBundle&) const = default;
};

/// Tables only. Throws ScenarioError for scenarios that do not validate.
ReportBundle analyze(const ScenarioFile& scenario);

const char* to_string(DurationSource source) noexcept;

/// Header `asset,aggregate_value,ceasefire_seconds,source`, one row per asset.
std::string rows_to_csv(const std::vector<SignificanceRow>& rows);

/// Newline-terminated, 2-space indented JSON.
std::string bundle_to_json(const ReportBundle& bundle);
/// Throws std::runtime_error on malformed input.
ReportBundle bundle_from_json(const std::string& text);

/// Array of {tick, type, player, asset, count, detail}.
std::string events_to_json(const std::vector<MatchEvent>& events);
std::vector<MatchEvent> events_from_json(const std::string& text);

std::string experiment_to_json(const ExperimentReport& report);

} // namespace pdg

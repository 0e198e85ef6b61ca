#pragma once

/**
 * @file scenario.hpp
 * @brief JSON scenario documents: parsing with collected diagnostics,
 *        serialization, the bundled battle scenario, and conversion into a
 *        GameModel and MatchConfig.
 *
 * Top-level keys: `assets`, `edges`, `dependency_values`, `ceasefire`,
 * optional `ceasefire_interpolation` ("piecewise_linear" | "none") and
 * optional `simulation`.
 */

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pdg/balance.hpp"
#include "pdg/graph.hpp"
#include "pdg/simulator.hpp"

namespace pdg
{

struct CeasefireEntry
{
    AssetId asset;
    Seconds seconds = 0;

    bool operator==(const CeasefireEntry&) const = default;
};

struct PlayerSpec
{
    PlayerKey id;
    Controller controller = Controller::ai;
    BotPolicy bot;
    std::map<AssetId, std::int64_t> holdings;
    std::int64_t resources = 0;
    std::optional<std::int64_t> income;

    bool operator==(const PlayerSpec&) const = default;
};

/// Match defaults carried by a scenario. Omitted keys take these values.
struct SimulationSpec
{
    Tick max_ticks = 3600;
    std::int64_t income_per_tick = 1;
    std::int64_t cost_unit = 10;
    std::map<AssetId, std::int64_t> cost_overrides;
    std::int64_t attack_cost = 10;
    double success_probability = 0.5;
    Tick sample_interval = 60;
    bool log_income = false;
    std::vector<PlayerSpec> players;
    std::vector<PlayerKey> protected_players;

    bool operator==(const SimulationSpec&) const = default;
};

struct ScenarioFile
{
    std::vector<AssetType> assets;
    std::vector<CreationalEdge> edges;
    std::vector<DependencyValueEntry> dependency_values;
    std::vector<CeasefireEntry> ceasefire;
    Interpolation interpolation = Interpolation::piecewise_linear;
    std::optional<SimulationSpec> simulation;

    bool operator==(const ScenarioFile&) const = default;
};

struct ParseResult
{
    /// Present iff `errors` is empty.
    std::optional<ScenarioFile> scenario;
    std::vector<std::string> errors;
    std::vector<std::string> warnings;

    bool ok() const noexcept { return scenario.has_value(); }
};

/// Syntax errors carry "line L, column C"; semantic errors are collected
/// with a field path such as "dependency_values[3]".
ParseResult parse_scenario(std::string_view text);

/// Pretty-printed JSON, newline terminated. Every optional field is written
/// out so that parse(serialize(x)) == x for parsed scenarios.
std::string serialize_scenario(const ScenarioFile& scenario);

/// Thrown when a scenario cannot be turned into a model.
class ScenarioError : public std::runtime_error
{
public:
    explicit ScenarioError(std::vector<std::string> errors);
    const std::vector<std::string>& errors() const noexcept { return m_errors; }

private:
    std::vector<std::string> m_errors;
};

/// Throws ScenarioError when the scenario does not validate.
std::shared_ptr<const GameModel> build_model(const ScenarioFile& scenario);

/// Match configuration from the scenario's simulation block (or built-in
/// defaults: rusher "ai" versus builder "human", "human" protected).
MatchConfig match_config(const ScenarioFile& scenario, std::shared_ptr<const GameModel> model,
                         std::uint64_t seed = 0);

inline constexpr std::string_view kBuiltinPrefix = "builtin:";

/// Text of the bundled battle scenario.
std::string_view bundled_battle_text();
/// Parsed bundled scenario; throws ScenarioError if it ever fails to parse.
const ScenarioFile& bundled_battle();

/// Resolves "builtin:battle" or reads a file. Throws std::runtime_error on
/// unknown builtins and unreadable files.
std::string load_scenario_text(const std::string& source);

const char* to_string(BotKind kind) noexcept;
const char* to_string(TargetRule rule) noexcept;
const char* to_string(Controller controller) noexcept;
const char* to_string(Interpolation interpolation) noexcept;

} // namespace pdg

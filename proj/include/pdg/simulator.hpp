#pragma once

/**
 * @file simulator.hpp
 * @brief Deterministic tick-based match engine with scripted bots and the
 *        matched-seed balancing on/off experiment.
 *
 * One tick is one second. Within a tick: income accrues, then every live
 * player (in id order) takes at most one action, then eliminations are
 * checked. A player whose holdings are empty after a tick is eliminated
 * and the match ends.
 */

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pdg/balance.hpp"
#include "pdg/graph.hpp"
#include "pdg/runtime.hpp"

namespace pdg
{

/// Graph, dependency values and cease-fire policy of one scenario.
struct GameModel
{
    std::shared_ptr<const CreationalGraph> graph;
    DependencyValueMatrix matrix;
    CeasefirePolicy policy;
    AggregateTable totals;

    static std::shared_ptr<const GameModel> make(CreationalGraph graph,
                                                 DependencyValueMatrix matrix,
                                                 CeasefirePolicy policy);
};

enum class BotKind
{
    /// Builds the thinnest, most significant creatable layer first; attacks
    /// only above an explicit resource threshold.
    builder,
    /// Attacks whenever allowed and affordable; builds only while held by a
    /// No-Attack window.
    rusher,
    /// Attacks with probability `aggression` when affordable, else builds.
    balanced,
};

enum class TargetRule
{
    highest_value,
    random,
};

struct BotPolicy
{
    BotKind kind = BotKind::builder;
    /// Minimum resources before an attack is considered. nullopt means the
    /// attack cost for rusher/balanced and "never" for builder.
    std::optional<std::int64_t> attack_threshold;
    TargetRule target = TargetRule::highest_value;
    double aggression = 0.5;

    bool operator==(const BotPolicy&) const = default;
};

struct CostModel
{
    /// cost(a) = unit * (1 + sum of dependency values on a's direct
    /// incoming edges).
    std::int64_t unit = 10;
    std::map<AssetId, std::int64_t> overrides;

    std::int64_t cost(const GameModel& model, const AssetId& asset) const;
};

struct AttackModel
{
    std::int64_t attack_cost = 10;
    double success_probability = 0.5;
};

struct PlayerSetup
{
    PlayerId player;
    BotPolicy bot;
    Holdings holdings;
    std::int64_t resources = 0;
    /// Overrides MatchConfig::income_per_tick.
    std::optional<std::int64_t> income;
};

struct MatchConfig
{
    std::shared_ptr<const GameModel> model;
    std::vector<PlayerSetup> players;
    BalancingConfig balancing;
    Tick max_ticks = 3600;
    std::int64_t income_per_tick = 1;
    CostModel cost;
    AttackModel attack;
    std::uint64_t seed = 0;
    /// Player whose survival/win/margin the experiment reports. Defaults to
    /// the first protected player, else the first human proxy, else the
    /// first player by id.
    std::optional<PlayerKey> focus_player;
    bool log_income = false;
    Tick sample_interval = 60;

    /// Empty when the configuration is usable.
    std::vector<std::string> problems() const;
    PlayerKey resolved_focus() const;
};

class InvalidConfigError : public std::invalid_argument
{
public:
    explicit InvalidConfigError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const noexcept { return m_problems; }

private:
    std::vector<std::string> m_problems;
};

enum class EventType
{
    income,
    build,
    attack,
    attack_blocked,
    destruction,
    ceasefire_imposed,
    match_end,
};

const char* to_string(EventType type) noexcept;
std::optional<EventType> event_type_from_string(const std::string& name);

/**
 * One log record. Field use per type:
 *  - income: count = amount credited
 *  - build: asset, count = 1, detail "cost=N"
 *  - attack: player = attacker, asset = target, detail "target=P;result=hit|miss"
 *  - attack_blocked: player = attacker, asset = intended target,
 *    detail "target=P;until=T"
 *  - destruction: player = victim, asset, count, detail "by=P"
 *  - ceasefire_imposed: player = restricted attacker, asset = destroyed
 *    asset, count = duration in seconds, detail "until=T"
 *  - match_end: player = winner (may be empty), detail "reason=..."
 */
struct MatchEvent
{
    Tick tick = 0;
    EventType type = EventType::income;
    PlayerKey player;
    AssetId asset;
    std::int64_t count = 0;
    std::string detail;

    bool operator==(const MatchEvent&) const = default;
};

struct ScorePoint
{
    Tick tick = 0;
    std::int64_t value = 0;

    bool operator==(const ScorePoint&) const = default;
};

struct MatchResult
{
    std::optional<PlayerKey> winner;
    Tick end_tick = 0;
    /// First tick at which the player's holdings were empty.
    std::map<PlayerKey, std::optional<Tick>> survival_tick;
    std::map<PlayerKey, std::vector<ScorePoint>> holdings_value;
    std::map<PlayerKey, std::int64_t> final_score;
    std::map<PlayerKey, Holdings> final_holdings;
    std::vector<MatchEvent> events;
};

/// Aggregate-weighted holdings value: sum of count * (1 + aggregate).
std::int64_t holdings_value(const GameModel& model, const Holdings& holdings);

/// splitmix64 finalizer.
std::uint64_t mix_seed(std::uint64_t x) noexcept;
/// Seed of pair `index` in an experiment.
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index) noexcept;
/// Seed of a player's private RNG stream within one match.
std::uint64_t player_stream_seed(std::uint64_t match_seed, const PlayerKey& player) noexcept;

/**
 * @brief A running match. step() advances one tick and returns the events
 *        it emitted.
 */
class Match
{
public:
    /// Throws InvalidConfigError.
    explicit Match(MatchConfig config);

    bool finished() const noexcept { return m_finished; }
    Tick tick() const noexcept { return m_state.now(); }
    const MatchState& state() const noexcept { return m_state; }
    const MatchConfig& config() const noexcept { return m_config; }
    const std::vector<MatchEvent>& events() const noexcept { return m_events; }

    /// Throws std::logic_error when the match has already ended.
    std::vector<MatchEvent> step();

    MatchResult result() const;

private:
    struct Bot
    {
        BotPolicy policy;
        std::mt19937_64 rng;
        std::int64_t income = 0;
    };

    void act(const PlayerKey& id, Bot& bot, Tick t, std::vector<MatchEvent>& out);
    bool try_build(const PlayerKey& id, Tick t, std::vector<MatchEvent>& out);
    bool wants_attack(const PlayerKey& id, Bot& bot);
    std::optional<std::pair<PlayerKey, AssetId>> pick_target(const PlayerKey& id, Bot& bot);
    void check_end(Tick t, std::vector<MatchEvent>& out);
    void sample(Tick t);

    MatchConfig m_config;
    MatchState m_state;
    std::map<PlayerKey, Bot> m_bots;
    std::map<AssetId, std::int64_t> m_costs;
    std::map<PlayerKey, std::optional<Tick>> m_survival;
    std::map<PlayerKey, std::vector<ScorePoint>> m_series;
    std::vector<MatchEvent> m_events;
    std::optional<PlayerKey> m_winner;
    bool m_finished = false;
};

MatchResult run_match(const MatchConfig& config);

enum class Arms
{
    both,
    on_only,
    off_only,
};

struct ArmOutcome
{
    std::optional<PlayerKey> winner;
    Tick end_tick = 0;
    /// Elimination tick of the focus player, or max_ticks if never eliminated.
    Tick focus_survival = 0;
    bool focus_won = false;
    /// Focus score minus best opponent score at match end.
    std::int64_t focus_margin = 0;
    std::map<PlayerKey, std::optional<Tick>> survival_tick;
    std::map<PlayerKey, std::int64_t> final_score;

    bool operator==(const ArmOutcome&) const = default;
};

struct PairResult
{
    std::size_t index = 0;
    std::uint64_t seed = 0;
    std::optional<ArmOutcome> on;
    std::optional<ArmOutcome> off;

    bool operator==(const PairResult&) const = default;
};

struct ArmStats
{
    double mean_survival = 0.0;
    double win_rate = 0.0;
    double mean_margin = 0.0;

    bool operator==(const ArmStats&) const = default;
};

struct ExperimentSummary
{
    std::size_t n_pairs = 0;
    std::optional<ArmStats> on;
    std::optional<ArmStats> off;
    /// on minus off; present only when both arms ran.
    std::optional<ArmStats> delta;
    std::size_t pairs_on_ge_off = 0;
    std::size_t pairs_on_gt_off = 0;

    bool operator==(const ExperimentSummary&) const = default;
};

struct ExperimentReport
{
    PlayerKey focus_player;
    std::uint64_t base_seed = 0;
    std::vector<PairResult> pairs;
    ExperimentSummary summary;

    bool operator==(const ExperimentReport&) const = default;
};

/// Called once per finished match with (pair index, balancing enabled, result).
using MatchObserver = std::function<void(std::size_t, bool, const MatchResult&)>;

/**
 * Runs pair i with seed derive_seed(base_seed, i) under balancing on and
 * off. Both arms share every setting but BalancingConfig::enabled.
 * Results are ordered by pair index; `threads` > 1 runs pairs concurrently
 * without changing the report.
 */
ExperimentReport run_experiment(const MatchConfig& config, std::size_t n_pairs,
                                std::uint64_t base_seed, Arms arms = Arms::both,
                                const MatchObserver& observer = {}, unsigned threads = 1);

ArmOutcome summarize(const MatchConfig& config, const MatchResult& result);

} // namespace pdg

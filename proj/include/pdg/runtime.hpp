#pragma once

/**
 * @file runtime.hpp
 * @brief Parallel per-player instances of one creational graph, bridged by
 *        the balancing mechanism.
 *
 * Destroying an asset owned by a protected player imposes a No-Attack
 * window on the attacker whose length is the cease-fire duration of the
 * destroyed asset. Overlapping windows merge by their later end; windows
 * are half-open, [imposed_at, end). Only attacks are restricted: creation
 * and income are never blocked.
 */

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "pdg/balance.hpp"
#include "pdg/graph.hpp"

namespace pdg
{

/// Integer seconds.
using Tick = std::int64_t;
using PlayerKey = std::string;

enum class Controller
{
    human_proxy,
    ai,
};

struct PlayerId
{
    PlayerKey id;
    Controller controller = Controller::ai;

    bool operator==(const PlayerId&) const = default;
};

struct PlayerInstance
{
    PlayerId player;
    Holdings holdings;
    std::int64_t resources = 0;

    bool operator==(const PlayerInstance&) const = default;
};

struct DestructionEvent
{
    Tick time = 0;
    PlayerKey victim;
    PlayerKey attacker;
    AssetId asset;
    std::int64_t count = 1;
};

struct CeasefireWindow
{
    PlayerKey restricted_player;
    Tick end_time = 0;

    bool operator==(const CeasefireWindow&) const = default;
};

struct BalancingConfig
{
    bool enabled = true;
    /// Destroying assets of these players triggers windows on the attacker.
    std::set<PlayerKey> protected_players;
    CeasefirePolicy policy;
};

class UnknownPlayerError : public std::out_of_range
{
public:
    explicit UnknownPlayerError(const PlayerKey& id)
        : std::out_of_range("unknown player '" + id + "'")
        , m_id(id)
    {}

    const PlayerKey& id() const noexcept { return m_id; }

private:
    PlayerKey m_id;
};

enum class RejectReason
{
    unknown_player,
    unknown_asset,
    invalid_count,
    self_attack,
    insufficient_holdings,
    time_regression,
    prerequisites_unmet,
    insufficient_resources,
};

const char* to_string(RejectReason reason) noexcept;

struct Rejection
{
    RejectReason reason;
    std::string message;
    /// Filled for prerequisites_unmet.
    std::vector<Shortfall> missing;
};

struct DestructionOutcome
{
    std::optional<Rejection> rejection;
    /// Set when the attacker's window was created or extended.
    std::optional<CeasefireWindow> window;
    Seconds imposed_duration = 0;

    bool accepted() const noexcept { return !rejection; }
};

struct CreationOutcome
{
    std::optional<Rejection> rejection;

    bool accepted() const noexcept { return !rejection; }
};

/// Per-player record of everything that changed holdings.
struct AssetLedger
{
    Holdings initial;
    Holdings created;
    Holdings destroyed;

    bool operator==(const AssetLedger&) const = default;
};

/**
 * @brief Match state: parallel player instances over one shared graph plus
 *        active cease-fire windows. Mutated only through the free
 *        functions below, in non-decreasing time order.
 */
class MatchState
{
public:
    MatchState(std::shared_ptr<const CreationalGraph> graph, std::vector<PlayerInstance> players,
               Tick start = 0);

    const CreationalGraph& graph() const noexcept { return *m_graph; }
    Tick now() const noexcept { return m_now; }

    bool has_player(const PlayerKey& id) const { return m_players.contains(id); }
    /// Throws UnknownPlayerError.
    const PlayerInstance& player(const PlayerKey& id) const;
    /// Ordered by id.
    const std::map<PlayerKey, PlayerInstance>& players() const noexcept { return m_players; }

    /// End of the player's window; nullopt if none was ever imposed.
    std::optional<Tick> window_end(const PlayerKey& id) const;
    const std::map<PlayerKey, Tick>& windows() const noexcept { return m_windows; }

    const AssetLedger& ledger(const PlayerKey& id) const;

    bool operator==(const MatchState& other) const;

private:
    friend DestructionOutcome on_destruction(MatchState&, const DestructionEvent&,
                                             const BalancingConfig&);
    friend CreationOutcome apply_creation(MatchState&, const PlayerKey&, const AssetId&, Tick,
                                          std::int64_t);
    friend std::optional<Rejection> adjust_resources(MatchState&, const PlayerKey&, Tick,
                                                     std::int64_t);

    PlayerInstance& mutable_player(const PlayerKey& id);

    std::shared_ptr<const CreationalGraph> m_graph;
    std::map<PlayerKey, PlayerInstance> m_players;
    std::map<PlayerKey, Tick> m_windows;
    std::map<PlayerKey, AssetLedger> m_ledgers;
    Tick m_now = 0;
};

/// max(existing_end, now + duration). Windows never shorten.
Tick merge_window(Tick existing_end, Tick now, Seconds duration);

/**
 * Removes `event.count` instances from the victim. When balancing is
 * enabled, the victim is protected and the asset's cease-fire duration is
 * positive, the attacker's window end becomes
 * merge_window(end, event.time, duration). A multi-count event imposes a
 * single window. Invalid events leave the state untouched.
 */
DestructionOutcome on_destruction(MatchState& state, const DestructionEvent& event,
                                  const BalancingConfig& config);

/// False iff the attacker has a window ending after `time`. Throws
/// UnknownPlayerError.
bool is_attack_allowed(const MatchState& state, const PlayerKey& attacker, Tick time);

/// Adds one instance of `asset` to the player and charges `cost`. Allowed
/// inside the player's own No-Attack window.
CreationOutcome apply_creation(MatchState& state, const PlayerKey& player, const AssetId& asset,
                               Tick time, std::int64_t cost = 0);

/// Credits (delta > 0) or charges (delta < 0) resources. Rejects a charge
/// that would go negative.
std::optional<Rejection> adjust_resources(MatchState& state, const PlayerKey& player, Tick time,
                                          std::int64_t delta);

struct CreationAction
{
    Tick time = 0;
    PlayerKey player;
    AssetId asset;
    std::int64_t cost = 0;
};

struct ResourceAction
{
    Tick time = 0;
    PlayerKey player;
    std::int64_t delta = 0;
};

using MatchAction = std::variant<ResourceAction, CreationAction, DestructionEvent>;

struct ReplayResult
{
    std::size_t applied = 0;
    /// Index of the first rejected action, if any; replay stops there.
    std::optional<std::size_t> rejected_at;
    std::optional<Rejection> rejection;
};

/// Applies a time-ordered action log.
ReplayResult replay(MatchState& state, std::span<const MatchAction> actions,
                    const BalancingConfig& config);

} // namespace pdg

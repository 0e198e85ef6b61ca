#include "pdg/runtime.hpp"

#include <algorithm>

namespace pdg
{

const char* to_string(RejectReason reason) noexcept
{
    switch (reason)
    {
    case RejectReason::unknown_player: return "unknown_player";
    case RejectReason::unknown_asset: return "unknown_asset";
    case RejectReason::invalid_count: return "invalid_count";
    case RejectReason::self_attack: return "self_attack";
    case RejectReason::insufficient_holdings: return "insufficient_holdings";
    case RejectReason::time_regression: return "time_regression";
    case RejectReason::prerequisites_unmet: return "prerequisites_unmet";
    case RejectReason::insufficient_resources: return "insufficient_resources";
    }
    return "unknown";
}

MatchState::MatchState(std::shared_ptr<const CreationalGraph> graph,
                       std::vector<PlayerInstance> players, Tick start)
    : m_graph(std::move(graph))
    , m_now(start)
{
    if (!m_graph)
    {
        throw std::invalid_argument("MatchState: null graph");
    }
    for (auto& p : players)
    {
        if (p.resources < 0)
        {
            throw std::invalid_argument("MatchState: negative resources for '" + p.player.id + "'");
        }
        for (const auto& [asset, n] : p.holdings.counts())
        {
            if (!m_graph->contains(asset))
            {
                throw UnknownAssetError(asset);
            }
        }
        const PlayerKey key = p.player.id;
        AssetLedger ledger;
        ledger.initial = p.holdings;
        if (!m_players.emplace(key, std::move(p)).second)
        {
            throw std::invalid_argument("MatchState: duplicate player id '" + key + "'");
        }
        m_ledgers.emplace(key, std::move(ledger));
    }
}

const PlayerInstance& MatchState::player(const PlayerKey& id) const
{
    auto it = m_players.find(id);
    if (it == m_players.end())
    {
        throw UnknownPlayerError(id);
    }
    return it->second;
}

PlayerInstance& MatchState::mutable_player(const PlayerKey& id)
{
    auto it = m_players.find(id);
    if (it == m_players.end())
    {
        throw UnknownPlayerError(id);
    }
    return it->second;
}

std::optional<Tick> MatchState::window_end(const PlayerKey& id) const
{
    player(id);
    auto it = m_windows.find(id);
    if (it == m_windows.end())
    {
        return std::nullopt;
    }
    return it->second;
}

const AssetLedger& MatchState::ledger(const PlayerKey& id) const
{
    player(id);
    return m_ledgers.at(id);
}

bool MatchState::operator==(const MatchState& other) const
{
    return m_graph == other.m_graph && m_players == other.m_players &&
           m_windows == other.m_windows && m_ledgers == other.m_ledgers && m_now == other.m_now;
}

Tick merge_window(Tick existing_end, Tick now, Seconds duration)
{
    return std::max(existing_end, now + std::max<Seconds>(duration, 0));
}

namespace
{

Rejection reject(RejectReason reason, std::string message)
{
    return Rejection{reason, std::move(message), {}};
}

} // namespace

DestructionOutcome on_destruction(MatchState& state, const DestructionEvent& event,
                                  const BalancingConfig& config)
{
    DestructionOutcome out;
    if (!state.has_player(event.victim))
    {
        out.rejection = reject(RejectReason::unknown_player, "unknown victim '" + event.victim + "'");
        return out;
    }
    if (!state.has_player(event.attacker))
    {
        out.rejection =
            reject(RejectReason::unknown_player, "unknown attacker '" + event.attacker + "'");
        return out;
    }
    if (event.victim == event.attacker)
    {
        out.rejection = reject(RejectReason::self_attack, "victim and attacker are both '" +
                                                              event.victim + "'");
        return out;
    }
    if (!state.graph().contains(event.asset))
    {
        out.rejection = reject(RejectReason::unknown_asset, "unknown asset '" + event.asset + "'");
        return out;
    }
    if (event.count < 1)
    {
        out.rejection = reject(RejectReason::invalid_count,
                               "destruction count must be >= 1, got " + std::to_string(event.count));
        return out;
    }
    if (event.time < state.now())
    {
        out.rejection = reject(RejectReason::time_regression,
                               "event at t=" + std::to_string(event.time) +
                                   " precedes state time " + std::to_string(state.now()));
        return out;
    }
    const std::int64_t have = state.player(event.victim).holdings.count(event.asset);
    if (have < event.count)
    {
        out.rejection = reject(RejectReason::insufficient_holdings,
                               "'" + event.victim + "' holds " + std::to_string(have) + " of '" +
                                   event.asset + "', cannot destroy " +
                                   std::to_string(event.count));
        return out;
    }

    // Compute the window before mutating so a throwing policy lookup leaves
    // the state untouched.
    std::optional<Tick> new_end;
    Seconds duration = 0;
    if (config.enabled && config.protected_players.contains(event.victim))
    {
        duration = config.policy.duration(event.asset);
        if (duration > 0)
        {
            const Tick current = state.window_end(event.attacker).value_or(0);
            const Tick merged = merge_window(current, event.time, duration);
            if (merged != current)
            {
                new_end = merged;
            }
        }
    }

    state.m_now = event.time;
    state.mutable_player(event.victim).holdings.remove(event.asset, event.count);
    state.m_ledgers.at(event.victim).destroyed.add(event.asset, event.count);
    if (new_end)
    {
        state.m_windows[event.attacker] = *new_end;
        out.window = CeasefireWindow{event.attacker, *new_end};
        out.imposed_duration = duration;
    }
    return out;
}

bool is_attack_allowed(const MatchState& state, const PlayerKey& attacker, Tick time)
{
    const auto end = state.window_end(attacker);
    return !end || *end <= time;
}

CreationOutcome apply_creation(MatchState& state, const PlayerKey& player, const AssetId& asset,
                               Tick time, std::int64_t cost)
{
    CreationOutcome out;
    if (!state.has_player(player))
    {
        out.rejection = reject(RejectReason::unknown_player, "unknown player '" + player + "'");
        return out;
    }
    if (!state.graph().contains(asset))
    {
        out.rejection = reject(RejectReason::unknown_asset, "unknown asset '" + asset + "'");
        return out;
    }
    if (time < state.now())
    {
        out.rejection = reject(RejectReason::time_regression,
                               "creation at t=" + std::to_string(time) + " precedes state time " +
                                   std::to_string(state.now()));
        return out;
    }
    const PlayerInstance& inst = state.player(player);
    auto missing = state.graph().missing_prerequisites(asset, inst.holdings);
    if (!missing.empty())
    {
        std::string msg = "cannot create '" + asset + "': missing";
        for (const auto& m : missing)
        {
            msg += " " + m.prerequisite + " (" + std::to_string(m.have) + "/" +
                   std::to_string(m.required) + ")";
        }
        out.rejection = Rejection{RejectReason::prerequisites_unmet, msg, std::move(missing)};
        return out;
    }
    if (cost < 0 || inst.resources < cost)
    {
        out.rejection = reject(RejectReason::insufficient_resources,
                               "'" + player + "' has " + std::to_string(inst.resources) +
                                   " resources, '" + asset + "' costs " + std::to_string(cost));
        return out;
    }

    state.m_now = time;
    PlayerInstance& target = state.mutable_player(player);
    target.holdings.add(asset, 1);
    target.resources -= cost;
    state.m_ledgers.at(player).created.add(asset, 1);
    return out;
}

std::optional<Rejection> adjust_resources(MatchState& state, const PlayerKey& player, Tick time,
                                          std::int64_t delta)
{
    if (!state.has_player(player))
    {
        return reject(RejectReason::unknown_player, "unknown player '" + player + "'");
    }
    if (time < state.now())
    {
        return reject(RejectReason::time_regression,
                      "resource change at t=" + std::to_string(time) + " precedes state time " +
                          std::to_string(state.now()));
    }
    PlayerInstance& target = state.mutable_player(player);
    if (target.resources + delta < 0)
    {
        return reject(RejectReason::insufficient_resources,
                      "'" + player + "' has " + std::to_string(target.resources) +
                          " resources, cannot pay " + std::to_string(-delta));
    }
    state.m_now = time;
    target.resources += delta;
    return std::nullopt;
}

ReplayResult replay(MatchState& state, std::span<const MatchAction> actions,
                    const BalancingConfig& config)
{
    ReplayResult result;
    for (std::size_t i = 0; i < actions.size(); ++i)
    {
        std::optional<Rejection> rejection = std::visit(
            [&](const auto& action) -> std::optional<Rejection> {
                using T = std::decay_t<decltype(action)>;
                if constexpr (std::is_same_v<T, ResourceAction>)
                {
                    return adjust_resources(state, action.player, action.time, action.delta);
                }
                else if constexpr (std::is_same_v<T, CreationAction>)
                {
                    return apply_creation(state, action.player, action.asset, action.time,
                                          action.cost)
                        .rejection;
                }
                else
                {
                    return on_destruction(state, action, config).rejection;
                }
            },
            actions[i]);
        if (rejection)
        {
            result.rejected_at = i;
            result.rejection = std::move(rejection);
            return result;
        }
        ++result.applied;
    }
    return result;
}

} // namespace pdg

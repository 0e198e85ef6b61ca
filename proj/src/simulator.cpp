#include "pdg/simulator.hpp"

#include <algorithm>
#include <future>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace pdg
{

std::shared_ptr<const GameModel> GameModel::make(CreationalGraph graph,
                                                 DependencyValueMatrix matrix,
                                                 CeasefirePolicy policy)
{
    auto model = std::make_shared<GameModel>();
    model->graph = std::make_shared<const CreationalGraph>(std::move(graph));
    model->totals = aggregate_table(*model->graph, matrix);
    model->matrix = std::move(matrix);
    model->policy = std::move(policy);
    return model;
}

std::int64_t CostModel::cost(const GameModel& model, const AssetId& asset) const
{
    if (auto it = overrides.find(asset); it != overrides.end())
    {
        return it->second;
    }
    std::int64_t weight = 1;
    for (const auto& edge : model.graph->incoming(asset))
    {
        weight += model.matrix.value(edge.prerequisite, asset);
    }
    return unit * weight;
}

InvalidConfigError::InvalidConfigError(std::vector<std::string> problems)
    : std::invalid_argument("invalid match config: " +
                            (problems.empty() ? std::string("unknown problem") : problems.front()))
    , m_problems(std::move(problems))
{}

std::vector<std::string> MatchConfig::problems() const
{
    std::vector<std::string> out;
    if (!model || !model->graph)
    {
        out.emplace_back("no game model");
        return out;
    }
    if (max_ticks < 1)
    {
        out.emplace_back("max_ticks must be >= 1");
    }
    if (income_per_tick < 1)
    {
        out.emplace_back("income_per_tick must be >= 1");
    }
    if (sample_interval < 1)
    {
        out.emplace_back("sample_interval must be >= 1");
    }
    if (cost.unit < 0)
    {
        out.emplace_back("cost unit must be >= 0");
    }
    for (const auto& [asset, c] : cost.overrides)
    {
        if (!model->graph->contains(asset))
        {
            out.push_back("cost override for unknown asset '" + asset + "'");
        }
        if (c < 0)
        {
            out.push_back("negative cost override for '" + asset + "'");
        }
    }
    if (attack.attack_cost < 0)
    {
        out.emplace_back("attack_cost must be >= 0");
    }
    if (!(attack.success_probability >= 0.0 && attack.success_probability <= 1.0))
    {
        out.emplace_back("success_probability must lie in [0, 1]");
    }
    if (players.size() < 2)
    {
        out.emplace_back("a match needs at least two players");
    }
    std::set<PlayerKey> ids;
    for (const auto& p : players)
    {
        if (p.player.id.empty())
        {
            out.emplace_back("player with empty id");
        }
        if (!ids.insert(p.player.id).second)
        {
            out.push_back("duplicate player id '" + p.player.id + "'");
        }
        if (p.resources < 0)
        {
            out.push_back("negative starting resources for '" + p.player.id + "'");
        }
        if (p.income && *p.income < 1)
        {
            out.push_back("income for '" + p.player.id + "' must be >= 1");
        }
        if (!(p.bot.aggression >= 0.0 && p.bot.aggression <= 1.0))
        {
            out.push_back("aggression for '" + p.player.id + "' must lie in [0, 1]");
        }
        for (const auto& [asset, n] : p.holdings.counts())
        {
            if (!model->graph->contains(asset))
            {
                out.push_back("starting holdings of '" + p.player.id + "' name unknown asset '" +
                              asset + "'");
            }
        }
    }
    for (const auto& id : balancing.protected_players)
    {
        if (!ids.contains(id))
        {
            out.push_back("protected player '" + id + "' is not in the match");
        }
    }
    if (focus_player && !ids.contains(*focus_player))
    {
        out.push_back("focus player '" + *focus_player + "' is not in the match");
    }
    if (balancing.policy.totals().empty() && model->graph->size() > 0)
    {
        out.emplace_back("balancing policy has no aggregate totals bound");
    }
    return out;
}

PlayerKey MatchConfig::resolved_focus() const
{
    if (focus_player)
    {
        return *focus_player;
    }
    if (!balancing.protected_players.empty())
    {
        return *balancing.protected_players.begin();
    }
    std::vector<PlayerKey> humans;
    std::vector<PlayerKey> all;
    for (const auto& p : players)
    {
        all.push_back(p.player.id);
        if (p.player.controller == Controller::human_proxy)
        {
            humans.push_back(p.player.id);
        }
    }
    auto& pool = humans.empty() ? all : humans;
    if (pool.empty())
    {
        return {};
    }
    return *std::min_element(pool.begin(), pool.end());
}

const char* to_string(EventType type) noexcept
{
    switch (type)
    {
    case EventType::income: return "income";
    case EventType::build: return "build";
    case EventType::attack: return "attack";
    case EventType::attack_blocked: return "attack_blocked";
    case EventType::destruction: return "destruction";
    case EventType::ceasefire_imposed: return "ceasefire_imposed";
    case EventType::match_end: return "match_end";
    }
    return "unknown";
}

std::optional<EventType> event_type_from_string(const std::string& name)
{
    for (EventType t : {EventType::income, EventType::build, EventType::attack,
                        EventType::attack_blocked, EventType::destruction,
                        EventType::ceasefire_imposed, EventType::match_end})
    {
        if (name == to_string(t))
        {
            return t;
        }
    }
    return std::nullopt;
}

std::int64_t holdings_value(const GameModel& model, const Holdings& holdings)
{
    std::int64_t sum = 0;
    for (const auto& [asset, n] : holdings.counts())
    {
        auto it = model.totals.find(asset);
        const std::int64_t total = it == model.totals.end() ? 0 : it->second;
        sum += n * (1 + total);
    }
    return sum;
}

std::uint64_t mix_seed(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index) noexcept
{
    return mix_seed(base_seed ^ mix_seed(index));
}

std::uint64_t player_stream_seed(std::uint64_t match_seed, const PlayerKey& player) noexcept
{
    // FNV-1a over the id keeps streams stable across standard libraries.
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : player)
    {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return mix_seed(match_seed ^ h);
}

namespace
{

/// Uniform double in [0, 1) from the top 53 bits.
double unit_draw(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<PlayerInstance> initial_instances(const MatchConfig& config)
{
    std::vector<PlayerInstance> out;
    for (const auto& p : config.players)
    {
        out.push_back({p.player, p.holdings, p.resources});
    }
    return out;
}

const MatchConfig& checked(const MatchConfig& config)
{
    auto problems = config.problems();
    if (!problems.empty())
    {
        throw InvalidConfigError(std::move(problems));
    }
    return config;
}

} // namespace

Match::Match(MatchConfig config)
    : m_config(checked(config))
    , m_state(m_config.model->graph, initial_instances(m_config), 0)
{
    for (const auto& p : m_config.players)
    {
        Bot bot;
        bot.policy = p.bot;
        bot.rng.seed(player_stream_seed(m_config.seed, p.player.id));
        bot.income = p.income.value_or(m_config.income_per_tick);
        m_bots.emplace(p.player.id, std::move(bot));
        m_survival[p.player.id] = std::nullopt;
    }
    for (const auto& id : m_config.model->graph->ids())
    {
        m_costs[id] = m_config.cost.cost(*m_config.model, id);
    }
    sample(0);
    check_end(0, m_events);
}

void Match::sample(Tick t)
{
    for (const auto& [id, inst] : m_state.players())
    {
        auto& series = m_series[id];
        if (!series.empty() && series.back().tick == t)
        {
            continue;
        }
        series.push_back({t, holdings_value(*m_config.model, inst.holdings)});
    }
}

std::vector<MatchEvent> Match::step()
{
    if (m_finished)
    {
        throw std::logic_error("step: match already finished at tick " +
                               std::to_string(m_state.now()));
    }
    const Tick t = m_state.now() + 1;
    std::vector<MatchEvent> out;

    for (auto& [id, bot] : m_bots)
    {
        adjust_resources(m_state, id, t, bot.income);
        if (m_config.log_income)
        {
            out.push_back({t, EventType::income, id, {}, bot.income, {}});
        }
    }
    for (auto& [id, bot] : m_bots)
    {
        act(id, bot, t, out);
    }
    check_end(t, out);
    if (m_finished || t % m_config.sample_interval == 0)
    {
        sample(t);
    }

    m_events.insert(m_events.end(), out.begin(), out.end());
    return out;
}

bool Match::wants_attack(const PlayerKey& id, Bot& bot)
{
    std::optional<std::int64_t> threshold = bot.policy.attack_threshold;
    if (bot.policy.kind != BotKind::builder && !threshold)
    {
        threshold = m_config.attack.attack_cost;
    }
    if (!threshold)
    {
        return false;
    }
    const std::int64_t resources = m_state.player(id).resources;
    if (resources < std::max(*threshold, m_config.attack.attack_cost))
    {
        return false;
    }
    const bool any_target =
        std::any_of(m_state.players().begin(), m_state.players().end(),
                    [&](const auto& kv) { return kv.first != id && !kv.second.holdings.empty(); });
    if (!any_target)
    {
        return false;
    }
    if (bot.policy.kind == BotKind::balanced)
    {
        return unit_draw(bot.rng) < bot.policy.aggression;
    }
    return true;
}

std::optional<std::pair<PlayerKey, AssetId>> Match::pick_target(const PlayerKey& id, Bot& bot)
{
    const PlayerInstance* victim = nullptr;
    std::int64_t best_score = -1;
    for (const auto& [key, inst] : m_state.players())
    {
        if (key == id || inst.holdings.empty())
        {
            continue;
        }
        const std::int64_t score = holdings_value(*m_config.model, inst.holdings);
        if (score > best_score)
        {
            best_score = score;
            victim = &inst;
        }
    }
    if (!victim)
    {
        return std::nullopt;
    }

    const auto& owned = victim->holdings.counts();
    AssetId asset;
    if (bot.policy.target == TargetRule::random)
    {
        auto it = owned.begin();
        std::advance(it, static_cast<std::ptrdiff_t>(bot.rng() % owned.size()));
        asset = it->first;
    }
    else
    {
        std::int64_t best = -1;
        for (const auto& [a, n] : owned)
        {
            const std::int64_t total = m_config.model->totals.at(a);
            if (total > best)
            {
                best = total;
                asset = a;
            }
        }
    }
    return std::make_pair(victim->player.id, asset);
}

bool Match::try_build(const PlayerKey& id, Tick t, std::vector<MatchEvent>& out)
{
    const PlayerInstance& inst = m_state.player(id);
    const auto frontier = m_state.graph().creation_frontier(inst.holdings);
    if (frontier.empty())
    {
        return false;
    }
    // Thinnest layer first, then most significant, then id.
    const auto& totals = m_config.model->totals;
    auto better = [&](const AssetId& a, const AssetId& b) {
        const auto ca = inst.holdings.count(a);
        const auto cb = inst.holdings.count(b);
        if (ca != cb)
        {
            return ca < cb;
        }
        if (totals.at(a) != totals.at(b))
        {
            return totals.at(a) > totals.at(b);
        }
        return a < b;
    };
    const AssetId choice = *std::min_element(frontier.begin(), frontier.end(), better);
    const std::int64_t cost = m_costs.at(choice);
    if (inst.resources < cost)
    {
        return false;
    }
    const auto outcome = apply_creation(m_state, id, choice, t, cost);
    if (!outcome.accepted())
    {
        throw std::logic_error("bot chose an illegal build: " + outcome.rejection->message);
    }
    out.push_back({t, EventType::build, id, choice, 1, "cost=" + std::to_string(cost)});
    return true;
}

void Match::act(const PlayerKey& id, Bot& bot, Tick t, std::vector<MatchEvent>& out)
{
    const bool intent = wants_attack(id, bot);
    const bool blocked = !is_attack_allowed(m_state, id, t);

    if (!intent)
    {
        if (bot.policy.kind != BotKind::rusher || blocked)
        {
            try_build(id, t, out);
        }
        return;
    }

    const auto target = pick_target(id, bot);
    if (!target)
    {
        try_build(id, t, out);
        return;
    }
    const auto& [victim, asset] = *target;

    if (blocked)
    {
        out.push_back({t, EventType::attack_blocked, id, asset, 0,
                       "target=" + victim + ";until=" +
                           std::to_string(*m_state.window_end(id))});
        try_build(id, t, out);
        return;
    }

    adjust_resources(m_state, id, t, -m_config.attack.attack_cost);
    const bool hit = unit_draw(bot.rng) < m_config.attack.success_probability;
    out.push_back({t, EventType::attack, id, asset, 1,
                   "target=" + victim + ";result=" + (hit ? "hit" : "miss")});
    if (!hit)
    {
        return;
    }

    const DestructionEvent event{t, victim, id, asset, 1};
    const auto outcome = on_destruction(m_state, event, m_config.balancing);
    if (!outcome.accepted())
    {
        throw std::logic_error("bot produced an invalid destruction: " +
                               outcome.rejection->message);
    }
    out.push_back({t, EventType::destruction, victim, asset, 1, "by=" + id});
    if (outcome.window)
    {
        out.push_back({t, EventType::ceasefire_imposed, id, asset, outcome.imposed_duration,
                       "until=" + std::to_string(outcome.window->end_time)});
    }
}

void Match::check_end(Tick t, std::vector<MatchEvent>& out)
{
    std::vector<PlayerKey> eliminated;
    std::vector<PlayerKey> alive;
    for (const auto& [id, inst] : m_state.players())
    {
        if (inst.holdings.empty())
        {
            if (!m_survival[id])
            {
                m_survival[id] = t;
            }
            eliminated.push_back(id);
        }
        else
        {
            alive.push_back(id);
        }
    }

    std::string detail;
    if (!eliminated.empty())
    {
        detail = "reason=elimination;eliminated=";
        for (std::size_t i = 0; i < eliminated.size(); ++i)
        {
            detail += (i ? "," : "") + eliminated[i];
        }
        if (alive.size() == 1)
        {
            m_winner = alive.front();
        }
        else if (alive.size() > 1)
        {
            std::int64_t best = -1;
            bool tie = false;
            for (const auto& id : alive)
            {
                const auto score = holdings_value(*m_config.model, m_state.player(id).holdings);
                if (score > best)
                {
                    best = score;
                    m_winner = id;
                    tie = false;
                }
                else if (score == best)
                {
                    tie = true;
                }
            }
            if (tie)
            {
                m_winner.reset();
            }
        }
    }
    else if (t >= m_config.max_ticks)
    {
        detail = "reason=timeout";
    }
    else
    {
        return;
    }

    m_finished = true;
    out.push_back({t, EventType::match_end, m_winner.value_or(""), {}, 0, detail});
}

MatchResult Match::result() const
{
    MatchResult r;
    r.winner = m_winner;
    r.end_tick = m_state.now();
    r.survival_tick = m_survival;
    r.holdings_value = m_series;
    for (const auto& [id, inst] : m_state.players())
    {
        r.final_score[id] = holdings_value(*m_config.model, inst.holdings);
        r.final_holdings[id] = inst.holdings;
    }
    r.events = m_events;
    return r;
}

MatchResult run_match(const MatchConfig& config)
{
    Match match(config);
    while (!match.finished())
    {
        match.step();
    }
    return match.result();
}

ArmOutcome summarize(const MatchConfig& config, const MatchResult& result)
{
    const PlayerKey focus = config.resolved_focus();
    ArmOutcome out;
    out.winner = result.winner;
    out.end_tick = result.end_tick;
    out.survival_tick = result.survival_tick;
    out.final_score = result.final_score;
    out.focus_won = result.winner && *result.winner == focus;
    auto it = result.survival_tick.find(focus);
    out.focus_survival = (it != result.survival_tick.end() && it->second) ? *it->second
                                                                          : config.max_ticks;
    std::int64_t best_other = std::numeric_limits<std::int64_t>::min();
    for (const auto& [id, score] : result.final_score)
    {
        if (id != focus)
        {
            best_other = std::max(best_other, score);
        }
    }
    const auto own = result.final_score.count(focus) ? result.final_score.at(focus) : 0;
    out.focus_margin = best_other == std::numeric_limits<std::int64_t>::min() ? own
                                                                              : own - best_other;
    return out;
}

namespace
{

ArmStats arm_stats(const std::vector<PairResult>& pairs, bool on)
{
    ArmStats s;
    if (pairs.empty())
    {
        return s;
    }
    double survival = 0.0;
    double wins = 0.0;
    double margin = 0.0;
    for (const auto& p : pairs)
    {
        const ArmOutcome& arm = on ? *p.on : *p.off;
        survival += static_cast<double>(arm.focus_survival);
        wins += arm.focus_won ? 1.0 : 0.0;
        margin += static_cast<double>(arm.focus_margin);
    }
    const double n = static_cast<double>(pairs.size());
    s.mean_survival = survival / n;
    s.win_rate = wins / n;
    s.mean_margin = margin / n;
    return s;
}

} // namespace

ExperimentReport run_experiment(const MatchConfig& config, std::size_t n_pairs,
                                std::uint64_t base_seed, Arms arms, const MatchObserver& observer,
                                unsigned threads)
{
    if (n_pairs < 1)
    {
        throw std::invalid_argument("run_experiment: n_pairs must be >= 1");
    }
    checked(config);

    ExperimentReport report;
    report.focus_player = config.resolved_focus();
    report.base_seed = base_seed;
    report.pairs.resize(n_pairs);

    const bool run_on = arms != Arms::off_only;
    const bool run_off = arms != Arms::on_only;

    struct PairRun
    {
        std::optional<MatchResult> on;
        std::optional<MatchResult> off;
    };
    auto run_pair = [&](std::size_t i) {
        PairRun run;
        MatchConfig arm = config;
        arm.seed = derive_seed(base_seed, i);
        if (run_on)
        {
            arm.balancing.enabled = true;
            run.on = run_match(arm);
        }
        if (run_off)
        {
            arm.balancing.enabled = false;
            run.off = run_match(arm);
        }
        return run;
    };

    const std::size_t batch = std::max(1u, threads);
    for (std::size_t start = 0; start < n_pairs; start += batch)
    {
        const std::size_t end = std::min(n_pairs, start + batch);
        std::vector<PairRun> runs;
        if (batch == 1)
        {
            runs.push_back(run_pair(start));
        }
        else
        {
            std::vector<std::future<PairRun>> futures;
            for (std::size_t i = start; i < end; ++i)
            {
                futures.push_back(std::async(std::launch::async, run_pair, i));
            }
            for (auto& f : futures)
            {
                runs.push_back(f.get());
            }
        }
        // Aggregation and observer calls stay in pair order.
        for (std::size_t i = start; i < end; ++i)
        {
            PairRun& run = runs[i - start];
            PairResult& pr = report.pairs[i];
            pr.index = i;
            pr.seed = derive_seed(base_seed, i);
            if (run.on)
            {
                pr.on = summarize(config, *run.on);
                if (observer)
                {
                    observer(i, true, *run.on);
                }
            }
            if (run.off)
            {
                pr.off = summarize(config, *run.off);
                if (observer)
                {
                    observer(i, false, *run.off);
                }
            }
        }
    }

    ExperimentSummary& s = report.summary;
    s.n_pairs = n_pairs;
    if (run_on)
    {
        s.on = arm_stats(report.pairs, true);
    }
    if (run_off)
    {
        s.off = arm_stats(report.pairs, false);
    }
    if (run_on && run_off)
    {
        s.delta = ArmStats{s.on->mean_survival - s.off->mean_survival,
                           s.on->win_rate - s.off->win_rate,
                           s.on->mean_margin - s.off->mean_margin};
        for (const auto& p : report.pairs)
        {
            if (p.on->focus_survival >= p.off->focus_survival)
            {
                ++s.pairs_on_ge_off;
            }
            if (p.on->focus_survival > p.off->focus_survival)
            {
                ++s.pairs_on_gt_off;
            }
        }
    }
    return report;
}

} // namespace pdg

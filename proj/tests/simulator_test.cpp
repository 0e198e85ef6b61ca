#include <gtest/gtest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "pdg/simulator.hpp"

using namespace pdg;
using pdg::testing::audit_log;
using pdg::testing::battle_model;

namespace
{

MatchConfig bundled_config(std::uint64_t seed = 0)
{
    return match_config(bundled_battle(), battle_model(), seed);
}

MatchConfig builders_only(std::int64_t resources)
{
    MatchConfig c = bundled_config();
    c.players = {
        {{"ai", Controller::ai}, {BotKind::builder}, Holdings{{"Base", 1}}, resources, std::nullopt},
        {{"human", Controller::human_proxy}, {BotKind::builder}, Holdings{{"Base", 1}}, resources,
         std::nullopt},
    };
    c.income_per_tick = 1;
    return c;
}

std::size_t first_of(const std::vector<MatchEvent>& events, EventType type)
{
    const auto it = std::find_if(events.begin(), events.end(),
                                 [&](const MatchEvent& e) { return e.type == type; });
    return static_cast<std::size_t>(it - events.begin());
}

} // namespace

TEST(Seeds, MixingIsStableAndSpreads)
{
    EXPECT_EQ(mix_seed(0), 0xe220a8397b1dcdafULL);
    EXPECT_NE(derive_seed(42, 0), derive_seed(42, 1));
    EXPECT_NE(player_stream_seed(7, "ai"), player_stream_seed(7, "human"));
    EXPECT_EQ(derive_seed(42, 3), derive_seed(42, 3));
}

TEST(CostModel, UnitTimesOnePlusIncomingValues)
{
    const auto& model = *battle_model();
    const CostModel cost;
    EXPECT_EQ(cost.cost(model, "Base"), 10);
    EXPECT_EQ(cost.cost(model, "Bank"), 20);
    EXPECT_EQ(cost.cost(model, "NWeapons"), 30);
    // MissileGS -> Missile (1) and Armory -> Missile (2).
    EXPECT_EQ(cost.cost(model, "Missile"), 40);
    CostModel custom;
    custom.overrides["Missile"] = 5;
    EXPECT_EQ(custom.cost(model, "Missile"), 5);
}

TEST(HoldingsValue, WeightsByOnePlusAggregate)
{
    const auto& model = *battle_model();
    EXPECT_EQ(holdings_value(model, Holdings{{"Base", 1}, {"Bank", 2}, {"Missile", 3}}),
              56 + 2 * 38 + 3);
    EXPECT_EQ(holdings_value(model, Holdings{}), 0);
}

TEST(Match, BuilderBuildsBankFromBase)
{
    Match match(builders_only(100));
    const auto events = match.step();
    std::vector<MatchEvent> human;
    std::copy_if(events.begin(), events.end(), std::back_inserter(human),
                 [](const MatchEvent& e) { return e.player == "human"; });
    ASSERT_EQ(human.size(), 1u);
    EXPECT_EQ(human[0].type, EventType::build);
    EXPECT_EQ(human[0].asset, "Bank");
    EXPECT_EQ(human[0].detail, "cost=20");
    EXPECT_EQ(match.state().player("human").resources, 100 + 1 - 20);
}

TEST(Match, UnaffordableTickOnlyAccruesIncome)
{
    Match match(builders_only(0));
    const MatchState before = match.state();
    EXPECT_TRUE(match.step().empty());
    EXPECT_EQ(match.tick(), 1);
    for (const auto& [id, p] : match.state().players())
    {
        EXPECT_EQ(p.holdings, before.player(id).holdings);
        EXPECT_EQ(p.resources, 1);
    }
}

TEST(Match, IncomeEventsWhenRequested)
{
    auto config = builders_only(0);
    config.log_income = true;
    Match match(config);
    const auto events = match.step();
    ASSERT_EQ(events.size(), 2u);
    EXPECT_EQ(events[0].type, EventType::income);
    EXPECT_EQ(events[0].count, 1);
}

TEST(Match, BlockedAttacksInsideWindow)
{
    const auto result = run_match(bundled_config(5));
    const auto imposed = first_of(result.events, EventType::ceasefire_imposed);
    ASSERT_LT(imposed, result.events.size());
    const MatchEvent window = result.events[imposed];
    const Tick until = std::stoll(window.detail.substr(6));
    EXPECT_EQ(until, window.tick + window.count);

    bool saw_blocked = false;
    for (std::size_t i = imposed + 1; i < result.events.size(); ++i)
    {
        const auto& e = result.events[i];
        if (e.tick >= until)
        {
            break;
        }
        if (e.player == window.player)
        {
            EXPECT_NE(e.type, EventType::attack) << "attack at " << e.tick;
            saw_blocked = saw_blocked || e.type == EventType::attack_blocked;
        }
    }
    EXPECT_TRUE(saw_blocked);
    EXPECT_EQ(audit_log(bundled_config(5), result.events), "");
}

TEST(Match, AttackBlockedEventChangesNoHoldings)
{
    Match match(bundled_config(5));
    while (!match.finished())
    {
        const MatchState before = match.state();
        const auto events = match.step();
        for (const auto& e : events)
        {
            if (e.type != EventType::attack_blocked)
            {
                continue;
            }
            // The blocked attacker may fall back to a build, but the
            // intended victim is never touched.
            const auto victim = e.detail.substr(7, e.detail.find(';') - 7);
            EXPECT_EQ(match.state().player(victim).holdings.count(e.asset),
                      before.player(victim).holdings.count(e.asset));
            return;
        }
    }
    FAIL() << "no attack_blocked event";
}

TEST(Match, SteppingFinishedMatchThrows)
{
    auto config = bundled_config();
    config.max_ticks = 1;
    Match match(config);
    match.step();
    ASSERT_TRUE(match.finished());
    EXPECT_THROW(match.step(), std::logic_error);
}

TEST(RunMatch, SingleTickBoundary)
{
    auto config = bundled_config();
    config.max_ticks = 1;
    const auto result = run_match(config);
    EXPECT_LE(result.end_tick, 1);
    EXPECT_FALSE(result.winner);
    EXPECT_EQ(result.events.back().type, EventType::match_end);
    EXPECT_EQ(result.events.back().detail, "reason=timeout");
}

TEST(RunMatch, EmptyStartingPlayerLosesImmediately)
{
    auto config = bundled_config();
    config.players[1].holdings = Holdings{};
    const auto result = run_match(config);
    EXPECT_EQ(result.end_tick, 0);
    ASSERT_TRUE(result.winner);
    EXPECT_EQ(*result.winner, config.players[0].player.id);
}

TEST(RunMatch, InvalidConfigRejected)
{
    auto config = bundled_config();
    config.max_ticks = 0;
    EXPECT_THROW(run_match(config), InvalidConfigError);
    config = bundled_config();
    config.balancing.protected_players = {"ghost"};
    EXPECT_THROW(run_match(config), InvalidConfigError);
    config = bundled_config();
    config.players.pop_back();
    EXPECT_THROW(run_match(config), InvalidConfigError);
}

TEST(RunMatch, DeterministicForSameSeed)
{
    const auto a = run_match(bundled_config(99));
    const auto b = run_match(bundled_config(99));
    EXPECT_EQ(a.events, b.events);
    EXPECT_EQ(a.final_score, b.final_score);
    EXPECT_EQ(a.holdings_value, b.holdings_value);
    const auto c = run_match(bundled_config(100));
    EXPECT_NE(a.events, c.events);
}

TEST(RunMatch, RusherBeatsBuilderWithoutBalancing)
{
    // Pinned baseline for the bundled configuration.
    auto config = bundled_config(1);
    config.balancing.enabled = false;
    const auto result = run_match(config);
    ASSERT_TRUE(result.winner);
    EXPECT_EQ(*result.winner, "ai");
}

TEST(RunMatch, OnOffLogsAgreeUntilFirstWindow)
{
    for (std::uint64_t seed = 0; seed < 20; ++seed)
    {
        auto on = bundled_config(seed);
        auto off = on;
        off.balancing.enabled = false;
        const auto a = run_match(on).events;
        const auto b = run_match(off).events;
        const auto cut = first_of(a, EventType::ceasefire_imposed);
        ASSERT_LE(cut, b.size()) << seed;
        EXPECT_TRUE(std::equal(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(cut),
                               b.begin()))
            << seed;
    }
}

TEST(RunMatch, ScoreSeriesSampled)
{
    auto config = bundled_config(3);
    config.max_ticks = 300;
    config.balancing.enabled = true;
    const auto result = run_match(config);
    for (const auto& [id, series] : result.holdings_value)
    {
        ASSERT_FALSE(series.empty());
        EXPECT_EQ(series.front().tick, 0);
        for (std::size_t i = 1; i + 1 < series.size(); ++i)
        {
            EXPECT_EQ(series[i].tick % config.sample_interval, 0);
        }
        EXPECT_EQ(series.back().tick, result.end_tick);
        EXPECT_EQ(series.back().value, result.final_score.at(id));
    }
}

TEST(RunExperiment, AllZeroPolicyGivesZeroDeltas)
{
    auto config = bundled_config();
    std::map<AssetId, Seconds> zeros;
    for (const auto& id : battle_model()->graph->ids())
    {
        zeros[id] = 0;
    }
    config.balancing.policy = CeasefirePolicy(zeros, battle_model()->totals);
    const auto report = run_experiment(config, 1, 11);
    ASSERT_TRUE(report.summary.delta);
    EXPECT_EQ(*report.summary.delta, ArmStats{});
    EXPECT_EQ(report.pairs[0].on, report.pairs[0].off);
}

TEST(RunExperiment, NoProtectedPlayersGivesZeroDeltas)
{
    auto config = bundled_config();
    config.balancing.protected_players.clear();
    const auto report = run_experiment(config, 5, 11);
    ASSERT_TRUE(report.summary.delta);
    EXPECT_EQ(*report.summary.delta, ArmStats{});
    EXPECT_EQ(report.summary.pairs_on_ge_off, 5u);
    EXPECT_EQ(report.summary.pairs_on_gt_off, 0u);
}

TEST(RunExperiment, PairSeedsAndArms)
{
    const auto config = bundled_config();
    const auto report = run_experiment(config, 3, 42, Arms::on_only);
    ASSERT_EQ(report.pairs.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i)
    {
        EXPECT_EQ(report.pairs[i].index, i);
        EXPECT_EQ(report.pairs[i].seed, derive_seed(42, i));
        EXPECT_TRUE(report.pairs[i].on);
        EXPECT_FALSE(report.pairs[i].off);
    }
    EXPECT_TRUE(report.summary.on);
    EXPECT_FALSE(report.summary.off);
    EXPECT_FALSE(report.summary.delta);
    EXPECT_EQ(report.focus_player, "human");
}

TEST(RunExperiment, ThreadCountDoesNotChangeReport)
{
    const auto config = bundled_config();
    std::vector<std::string> serial_order;
    const auto serial = run_experiment(config, 6, 8, Arms::both,
                                       [&](std::size_t i, bool on, const MatchResult&) {
                                           serial_order.push_back(std::to_string(i) +
                                                                  (on ? "on" : "off"));
                                       });
    std::vector<std::string> threaded_order;
    const auto threaded = run_experiment(config, 6, 8, Arms::both,
                                         [&](std::size_t i, bool on, const MatchResult&) {
                                             threaded_order.push_back(std::to_string(i) +
                                                                      (on ? "on" : "off"));
                                         },
                                         4);
    EXPECT_EQ(serial, threaded);
    EXPECT_EQ(serial_order, threaded_order);
}

TEST(Summarize, FocusSurvivalIsMaxTicksWhenAlive)
{
    auto config = bundled_config(2);
    config.max_ticks = 50;
    const auto result = run_match(config);
    const auto outcome = summarize(config, result);
    if (!result.survival_tick.at("human"))
    {
        EXPECT_EQ(outcome.focus_survival, 50);
    }
    EXPECT_EQ(outcome.focus_margin,
              result.final_score.at("human") - result.final_score.at("ai"));
}

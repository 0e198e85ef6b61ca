#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "pdg/runtime.hpp"

using namespace pdg;
using pdg::testing::battle_model;

namespace
{

BalancingConfig human_protected(bool enabled = true)
{
    return {enabled, {"human"}, battle_model()->policy};
}

MatchState two_players(Holdings human = Holdings{{"Base", 1}, {"Bank", 1}, {"Diplomat", 1}},
                       Holdings ai = Holdings{{"Base", 1}, {"Bank", 1}, {"Barrack", 1}})
{
    return MatchState(battle_model()->graph,
                      {{{"human", Controller::human_proxy}, std::move(human), 0},
                       {{"ai", Controller::ai}, std::move(ai), 0}});
}

} // namespace

TEST(MergeWindow, MaxRule)
{
    EXPECT_EQ(merge_window(300, 100, 250), 350);
    EXPECT_EQ(merge_window(300, 100, 50), 300);
    EXPECT_EQ(merge_window(0, 100, 900), 1000);
}

TEST(OnDestruction, HumanBaseAtHundredBlocksAiUntilThousand)
{
    auto state = two_players();
    const auto outcome =
        on_destruction(state, {100, "human", "ai", "Base", 1}, human_protected());
    ASSERT_TRUE(outcome.accepted());
    ASSERT_TRUE(outcome.window);
    EXPECT_EQ(*outcome.window, (CeasefireWindow{"ai", 1000}));
    EXPECT_EQ(outcome.imposed_duration, 900);
    EXPECT_EQ(state.window_end("ai"), 1000);
    EXPECT_EQ(state.player("human").holdings.count("Base"), 0);

    EXPECT_FALSE(is_attack_allowed(state, "ai", 100));
    EXPECT_FALSE(is_attack_allowed(state, "ai", 999));
    EXPECT_TRUE(is_attack_allowed(state, "ai", 1000));
    EXPECT_TRUE(is_attack_allowed(state, "human", 500));
}

TEST(OnDestruction, AiLossDoesNotRestrictHuman)
{
    auto state = two_players();
    const auto outcome =
        on_destruction(state, {40, "ai", "human", "Barrack", 1}, human_protected());
    ASSERT_TRUE(outcome.accepted());
    EXPECT_FALSE(outcome.window);
    EXPECT_FALSE(state.window_end("human"));
    EXPECT_TRUE(is_attack_allowed(state, "human", 41));
}

TEST(OnDestruction, ZeroDurationAssetImposesNothing)
{
    auto state = two_players();
    const auto outcome =
        on_destruction(state, {50, "human", "ai", "Diplomat", 1}, human_protected());
    ASSERT_TRUE(outcome.accepted());
    EXPECT_FALSE(outcome.window);
    EXPECT_EQ(outcome.imposed_duration, 0);
    EXPECT_FALSE(state.window_end("ai"));
}

TEST(OnDestruction, BalancingDisabledNeverRestricts)
{
    auto state = two_players();
    ASSERT_TRUE(
        on_destruction(state, {100, "human", "ai", "Base", 1}, human_protected(false)).accepted());
    EXPECT_TRUE(is_attack_allowed(state, "ai", 100));
    EXPECT_FALSE(state.window_end("ai"));
}

TEST(OnDestruction, ShorterLossDoesNotShortenWindow)
{
    auto state = two_players();
    on_destruction(state, {100, "human", "ai", "Base", 1}, human_protected());
    const auto outcome =
        on_destruction(state, {200, "human", "ai", "Bank", 1}, human_protected());
    ASSERT_TRUE(outcome.accepted());
    EXPECT_FALSE(outcome.window);
    EXPECT_EQ(state.window_end("ai"), 1000);
}

TEST(OnDestruction, MultiCountImposesOneWindow)
{
    auto state = two_players(Holdings{{"Base", 3}});
    const auto outcome =
        on_destruction(state, {10, "human", "ai", "Base", 3}, human_protected());
    ASSERT_TRUE(outcome.accepted());
    EXPECT_EQ(state.window_end("ai"), 910);
    EXPECT_EQ(state.player("human").holdings.count("Base"), 0);
}

TEST(OnDestruction, DependentsSurviveTheirPrerequisite)
{
    auto state = two_players();
    on_destruction(state, {5, "human", "ai", "Bank", 1}, human_protected());
    EXPECT_EQ(state.player("human").holdings.count("Diplomat"), 1);
}

TEST(OnDestruction, InvalidEventsLeaveStateUnchanged)
{
    auto state = two_players();
    on_destruction(state, {10, "human", "ai", "Diplomat", 1}, human_protected());
    const MatchState before = state;
    const auto expect_reject = [&](const DestructionEvent& e, RejectReason why) {
        const auto outcome = on_destruction(state, e, human_protected());
        ASSERT_FALSE(outcome.accepted());
        EXPECT_EQ(outcome.rejection->reason, why) << outcome.rejection->message;
        EXPECT_TRUE(state == before);
    };
    expect_reject({20, "ghost", "ai", "Base", 1}, RejectReason::unknown_player);
    expect_reject({20, "human", "ghost", "Base", 1}, RejectReason::unknown_player);
    expect_reject({20, "human", "ai", "Castle", 1}, RejectReason::unknown_asset);
    expect_reject({20, "human", "ai", "Base", 0}, RejectReason::invalid_count);
    expect_reject({20, "human", "human", "Base", 1}, RejectReason::self_attack);
    expect_reject({20, "human", "ai", "Base", 2}, RejectReason::insufficient_holdings);
    expect_reject({20, "human", "ai", "Missile", 1}, RejectReason::insufficient_holdings);
    expect_reject({5, "human", "ai", "Base", 1}, RejectReason::time_regression);
}

TEST(IsAttackAllowed, DefaultPermissiveAndUnknownPlayer)
{
    const auto state = two_players();
    EXPECT_TRUE(is_attack_allowed(state, "ai", 0));
    EXPECT_THROW(is_attack_allowed(state, "ghost", 0), UnknownPlayerError);
}

TEST(ApplyCreation, BankFromBase)
{
    auto state = two_players(Holdings{{"Base", 1}});
    ASSERT_TRUE(apply_creation(state, "human", "Bank", 1).accepted());
    EXPECT_EQ(state.player("human").holdings, (Holdings{{"Base", 1}, {"Bank", 1}}));
}

TEST(ApplyCreation, MissingPrerequisitesAreListed)
{
    auto state = two_players(Holdings{{"Diplomat", 1}});
    const auto outcome = apply_creation(state, "human", "University", 1);
    ASSERT_FALSE(outcome.accepted());
    EXPECT_EQ(outcome.rejection->reason, RejectReason::prerequisites_unmet);
    EXPECT_EQ(outcome.rejection->missing, (std::vector<Shortfall>{{"Bank", 1, 0}}));
}

TEST(ApplyCreation, AllowedInsideOwnWindow)
{
    auto state = two_players();
    on_destruction(state, {100, "human", "ai", "Base", 1}, human_protected());
    ASSERT_FALSE(is_attack_allowed(state, "ai", 150));
    ASSERT_TRUE(apply_creation(state, "ai", "Soldiers", 150).accepted());
    EXPECT_EQ(state.player("ai").holdings.count("Soldiers"), 1);
}

TEST(ApplyCreation, ChargesResources)
{
    auto state = two_players();
    EXPECT_FALSE(adjust_resources(state, "ai", 1, 25));
    const auto poor = apply_creation(state, "ai", "Soldiers", 2, 30);
    ASSERT_FALSE(poor.accepted());
    EXPECT_EQ(poor.rejection->reason, RejectReason::insufficient_resources);
    ASSERT_TRUE(apply_creation(state, "ai", "Soldiers", 2, 20).accepted());
    EXPECT_EQ(state.player("ai").resources, 5);
    EXPECT_TRUE(adjust_resources(state, "ai", 3, -6));
    EXPECT_EQ(state.player("ai").resources, 5);
}

TEST(Ledger, TracksInitialCreatedDestroyed)
{
    auto state = two_players(Holdings{{"Base", 1}});
    apply_creation(state, "human", "Bank", 1);
    apply_creation(state, "human", "Base", 2);
    on_destruction(state, {3, "human", "ai", "Base", 1}, human_protected());
    const auto& ledger = state.ledger("human");
    EXPECT_EQ(ledger.initial, (Holdings{{"Base", 1}}));
    EXPECT_EQ(ledger.created, (Holdings{{"Bank", 1}, {"Base", 1}}));
    EXPECT_EQ(ledger.destroyed, (Holdings{{"Base", 1}}));
}

TEST(Replay, StopsAtFirstRejection)
{
    auto state = two_players(Holdings{{"Base", 1}});
    const std::vector<MatchAction> actions = {
        CreationAction{1, "human", "Bank", 0},
        DestructionEvent{2, "human", "ai", "Base", 1},
        CreationAction{3, "human", "Missile", 0},
        CreationAction{4, "human", "Base", 0},
    };
    const auto result = replay(state, actions, human_protected());
    EXPECT_EQ(result.applied, 2u);
    EXPECT_EQ(result.rejected_at, 2u);
    ASSERT_TRUE(result.rejection);
    EXPECT_EQ(result.rejection->reason, RejectReason::prerequisites_unmet);
    EXPECT_EQ(state.player("human").holdings.count("Base"), 0);
}

#include <gtest/gtest.h>

#include <sstream>

#include <json.hpp>

#include "fixtures.hpp"
#include "pdg/analysis.hpp"

using namespace pdg;

namespace
{

std::vector<std::vector<std::string>> csv_rows(const std::string& text)
{
    std::vector<std::vector<std::string>> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
    {
        std::vector<std::string> cells;
        std::istringstream cs(line);
        std::string cell;
        while (std::getline(cs, cell, ','))
        {
            cells.push_back(cell);
        }
        out.push_back(cells);
    }
    return out;
}

} // namespace

TEST(Analyze, BundledTables)
{
    const auto bundle = analyze(bundled_battle());
    ASSERT_EQ(bundle.rows.size(), 14u);
    EXPECT_EQ(bundle.rows[0], (SignificanceRow{"Base", 55, 900, DurationSource::explicit_entry}));
    EXPECT_EQ(bundle.rows[1], (SignificanceRow{"Bank", 37, 550, DurationSource::explicit_entry}));
    EXPECT_EQ(bundle.rows[2],
              (SignificanceRow{"University", 9, 400, DurationSource::explicit_entry}));
    EXPECT_EQ(bundle.rows[3], (SignificanceRow{"Armory", 8, 380, DurationSource::explicit_entry}));
    EXPECT_EQ(bundle.rows[4], (SignificanceRow{"Barrack", 3, 250, DurationSource::explicit_entry}));
    EXPECT_FALSE(bundle.experiment);
}

TEST(Analyze, LeafOnlyScenario)
{
    ScenarioFile s;
    s.assets = {{"Solo", "Solo"}};
    const auto bundle = analyze(s);
    ASSERT_EQ(bundle.rows.size(), 1u);
    EXPECT_EQ(bundle.rows[0].aggregate_value, 0);
    EXPECT_EQ(bundle.rows[0].ceasefire_seconds, 0);
}

TEST(Analyze, InterpolatedRowsAreMarked)
{
    ScenarioFile s = bundled_battle();
    std::erase_if(s.ceasefire, [](const CeasefireEntry& c) { return c.asset == "Bank"; });
    s.simulation.reset();
    const auto bundle = analyze(s);
    EXPECT_EQ(bundle.rows[1].asset, "Bank");
    EXPECT_EQ(bundle.rows[1].source, DurationSource::interpolated);
    // Between University (9, 400) and Base (55, 900).
    EXPECT_EQ(bundle.rows[1].ceasefire_seconds, 400 + 500 * 28 / 46);
    EXPECT_NE(rows_to_csv(bundle.rows).find("Bank,37,704,interpolated"), std::string::npos);
}

TEST(Report, CsvAndJsonCarryIdenticalValues)
{
    const auto bundle = analyze(bundled_battle());
    const auto rows = csv_rows(rows_to_csv(bundle.rows));
    ASSERT_EQ(rows.size(), 15u);
    EXPECT_EQ(rows[0],
              (std::vector<std::string>{"asset", "aggregate_value", "ceasefire_seconds", "source"}));

    const auto doc = nlohmann::json::parse(bundle_to_json(bundle));
    const auto& sig = doc.at("significance");
    ASSERT_EQ(sig.size(), 14u);
    for (std::size_t i = 0; i < 14; ++i)
    {
        EXPECT_EQ(rows[i + 1][0], sig[i].at("asset").get<std::string>());
        EXPECT_EQ(std::stoll(rows[i + 1][1]), sig[i].at("aggregate_value").get<std::int64_t>());
        EXPECT_EQ(std::stoll(rows[i + 1][2]), sig[i].at("ceasefire_seconds").get<std::int64_t>());
        EXPECT_EQ(rows[i + 1][3], sig[i].at("source").get<std::string>());
    }
}

TEST(Report, BundleRoundTrip)
{
    ReportBundle bundle = analyze(bundled_battle());
    auto config = match_config(bundled_battle(), pdg::testing::battle_model());
    config.max_ticks = 200;
    bundle.experiment = run_experiment(config, 2, 5);
    bundle.event_logs.push_back({"pair_0000_on", run_match(config).events});
    EXPECT_EQ(bundle_from_json(bundle_to_json(bundle)), bundle);
}

TEST(Report, EventLogRoundTrip)
{
    auto config = match_config(bundled_battle(), pdg::testing::battle_model(), 4);
    config.max_ticks = 400;
    config.log_income = true;
    const auto events = run_match(config).events;
    EXPECT_EQ(events_from_json(events_to_json(events)), events);
    EXPECT_THROW(events_from_json("[{\"tick\": 1}]"), std::runtime_error);
    EXPECT_THROW(bundle_from_json("{"), std::runtime_error);
}

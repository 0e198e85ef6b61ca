#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "pdg/cli.hpp"
#include "pdg/scenario.hpp"

using namespace pdg;
namespace fs = std::filesystem;

namespace
{

struct Run
{
    int code = 0;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    args.insert(args.begin(), "pdg");
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli_main(args, out, err);
    return {code, out.str(), err.str()};
}

class TempDir
{
public:
    TempDir()
    {
        static int counter = 0;
        m_path = fs::temp_directory_path() /
                 ("pdg_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(m_path);
    }
    ~TempDir() { fs::remove_all(m_path); }
    const fs::path& path() const { return m_path; }

    fs::path write(const std::string& name, const std::string& text) const
    {
        const fs::path p = m_path / name;
        std::ofstream(p, std::ios::binary) << text;
        return p;
    }

private:
    fs::path m_path;
};

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

} // namespace

TEST(Cli, AnalyzeBuiltinCsv)
{
    const auto r = run({"analyze", "builtin:battle"});
    EXPECT_EQ(r.code, kExitOk);
    EXPECT_EQ(r.out.rfind("asset,aggregate_value,ceasefire_seconds,source\nBase,55,900,explicit\n", 0),
              0u);
}

TEST(Cli, AnalyzeJsonToFile)
{
    TempDir tmp;
    const auto path = tmp.path() / "tables.json";
    const auto r = run({"analyze", "--scenario", "builtin:battle", "--format", "json", "--out",
                        path.string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto doc = nlohmann::json::parse(slurp(path));
    EXPECT_EQ(doc.at("significance")[0].at("aggregate_value"), 55);
}

TEST(Cli, ValidateOutcomes)
{
    EXPECT_EQ(run({"validate", "builtin:battle"}).code, kExitOk);

    TempDir tmp;
    const auto cyclic = tmp.write("cyclic.json", R"({
        "assets": [{"id": "A"}, {"id": "B"}],
        "edges": [{"prerequisite": "A", "product": "B"}, {"prerequisite": "B", "product": "A"}],
        "dependency_values": [], "ceasefire": []
    })");
    const auto r = run({"validate", cyclic.string()});
    EXPECT_EQ(r.code, kExitValidation);
    EXPECT_NE(r.err.find("A -> B -> A"), std::string::npos) << r.err;

    const auto empty = tmp.write("empty.json", "");
    const auto e = run({"validate", empty.string()});
    EXPECT_EQ(e.code, kExitValidation);
    EXPECT_NE(e.err.find("no assets defined"), std::string::npos);

    EXPECT_EQ(run({"analyze", cyclic.string()}).code, kExitValidation);
    EXPECT_EQ(run({"simulate", cyclic.string()}).code, kExitValidation);
}

TEST(Cli, UsageErrors)
{
    EXPECT_EQ(run({}).code, kExitUsage);
    EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
    EXPECT_EQ(run({"analyze", "builtin:battle", "--format", "xml"}).code, kExitUsage);
    EXPECT_EQ(run({"simulate", "builtin:battle", "--matches", "0"}).code, kExitUsage);
    EXPECT_EQ(run({"simulate", "builtin:battle", "--balancing", "maybe"}).code, kExitUsage);
    EXPECT_EQ(run({"validate"}).code, kExitUsage);
    EXPECT_EQ(run({"validate", "--bogus", "builtin:battle"}).code, kExitUsage);
    EXPECT_EQ(run({"--help"}).code, kExitOk);
}

TEST(Cli, IoErrors)
{
    EXPECT_EQ(run({"validate", "/nonexistent/file.json"}).code, kExitIo);
    EXPECT_EQ(run({"validate", "builtin:chess"}).code, kExitIo);
    TempDir tmp;
    const auto blocker = tmp.write("file", "x");
    EXPECT_EQ(run({"analyze", "builtin:battle", "--out", (blocker / "sub" / "t.csv").string()}).code,
              kExitIo);
}

TEST(Cli, SimulateWritesReportAndLogs)
{
    TempDir tmp;
    const auto dir = tmp.path() / "run";
    const auto r = run({"simulate", "builtin:battle", "--matches", "2", "--seed", "3",
                        "--max-ticks", "300", "--out", dir.string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_TRUE(fs::exists(dir / "report.json"));
    for (const char* name : {"pair_0000_on.json", "pair_0000_off.json", "pair_0001_on.json",
                             "pair_0001_off.json"})
    {
        EXPECT_TRUE(fs::exists(dir / "logs" / name)) << name;
    }
    const auto doc = nlohmann::json::parse(slurp(dir / "report.json"));
    EXPECT_EQ(doc.at("summary").at("n_pairs"), 2);
    EXPECT_EQ(doc.at("base_seed"), 3);
    EXPECT_NE(r.out.find("pairs: 2"), std::string::npos);
}

TEST(Cli, SimulateStdoutIsRepeatable)
{
    const std::vector<std::string> args = {"simulate", "builtin:battle", "--matches", "3",
                                           "--seed", "42", "--balancing", "on", "--max-ticks",
                                           "500"};
    const auto a = run(args);
    const auto b = run(args);
    ASSERT_EQ(a.code, kExitOk);
    EXPECT_EQ(a.out, b.out);
    const auto doc = nlohmann::json::parse(a.out);
    EXPECT_TRUE(doc.at("summary").at("off").is_null());
}

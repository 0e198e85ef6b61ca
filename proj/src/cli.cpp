#include "pdg/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pdg/analysis.hpp"
#include "pdg/scenario.hpp"
#include "pdg/simulator.hpp"

namespace pdg
{

namespace
{

struct IoError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct Options
{
    std::string positional;
    std::string scenario;
    std::string format = "csv";
    std::string out;
    std::size_t matches = 10;
    std::uint64_t seed = 0;
    std::string balancing = "both";
    unsigned threads = 1;
    Tick max_ticks = 0;
};

std::string scenario_source(const Options& o)
{
    if (!o.scenario.empty() && !o.positional.empty() && o.scenario != o.positional)
    {
        throw CLI::ValidationError("scenario given twice ('" + o.positional + "' and '" +
                                   o.scenario + "')");
    }
    std::string s = o.scenario.empty() ? o.positional : o.scenario;
    if (s.empty())
    {
        throw CLI::RequiredError("a scenario path or builtin:battle is required");
    }
    return s;
}

ParseResult load(const std::string& source)
{
    try
    {
        return parse_scenario(load_scenario_text(source));
    }
    catch (const std::runtime_error& e)
    {
        throw IoError(e.what());
    }
}

void write_file(const std::filesystem::path& path, const std::string& text)
{
    if (path.has_parent_path())
    {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec)
        {
            throw IoError("cannot create directory '" + path.parent_path().string() +
                          "': " + ec.message());
        }
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f << text;
    f.close();
    if (!f)
    {
        throw IoError("cannot write '" + path.string() + "'");
    }
}

int report_errors(const ParseResult& parsed, std::ostream& err)
{
    for (const auto& e : parsed.errors)
    {
        err << "error: " << e << '\n';
    }
    return kExitValidation;
}

int run_validate(const Options& o, std::ostream& out, std::ostream& err)
{
    const ParseResult parsed = load(scenario_source(o));
    for (const auto& w : parsed.warnings)
    {
        err << "warning: " << w << '\n';
    }
    if (!parsed.ok())
    {
        return report_errors(parsed, err);
    }
    out << "ok: " << parsed.scenario->assets.size() << " assets, "
        << parsed.scenario->edges.size() << " edges, "
        << parsed.scenario->dependency_values.size() << " dependency values, "
        << parsed.scenario->ceasefire.size() << " cease-fire entries\n";
    return kExitOk;
}

int run_analyze(const Options& o, std::ostream& out, std::ostream& err)
{
    const ParseResult parsed = load(scenario_source(o));
    if (!parsed.ok())
    {
        return report_errors(parsed, err);
    }
    const ReportBundle bundle = analyze(*parsed.scenario);
    const std::string text =
        o.format == "json" ? bundle_to_json(bundle) : rows_to_csv(bundle.rows);
    if (o.out.empty())
    {
        out << text;
    }
    else
    {
        write_file(o.out, text);
    }
    return kExitOk;
}

int run_simulate(const Options& o, std::ostream& out, std::ostream& err)
{
    const ParseResult parsed = load(scenario_source(o));
    if (!parsed.ok())
    {
        return report_errors(parsed, err);
    }
    const auto model = build_model(*parsed.scenario);
    MatchConfig config = match_config(*parsed.scenario, model);
    if (o.max_ticks > 0)
    {
        config.max_ticks = o.max_ticks;
    }
    if (auto problems = config.problems(); !problems.empty())
    {
        for (const auto& p : problems)
        {
            err << "error: " << p << '\n';
        }
        return kExitValidation;
    }

    const Arms arms = o.balancing == "on"    ? Arms::on_only
                      : o.balancing == "off" ? Arms::off_only
                                             : Arms::both;

    const std::filesystem::path dir = o.out;
    MatchObserver observer;
    if (!o.out.empty())
    {
        observer = [&](std::size_t pair, bool on, const MatchResult& result) {
            std::ostringstream name;
            name << "pair_" << std::setw(4) << std::setfill('0') << pair << '_'
                 << (on ? "on" : "off") << ".json";
            write_file(dir / "logs" / name.str(), events_to_json(result.events));
        };
    }
    const ExperimentReport report =
        run_experiment(config, o.matches, o.seed, arms, observer, o.threads);
    const std::string text = experiment_to_json(report);

    if (o.out.empty())
    {
        out << text;
        return kExitOk;
    }
    write_file(dir / "report.json", text);

    const auto& s = report.summary;
    out << "pairs: " << s.n_pairs << ", focus: " << report.focus_player << '\n';
    auto line = [&](const char* label, const std::optional<ArmStats>& a) {
        if (a)
        {
            out << label << " mean_survival=" << a->mean_survival << " win_rate=" << a->win_rate
                << " mean_margin=" << a->mean_margin << '\n';
        }
    };
    line("on:   ", s.on);
    line("off:  ", s.off);
    line("delta:", s.delta);
    if (s.delta)
    {
        out << "pairs with survival(on) >= survival(off): " << s.pairs_on_ge_off << '/'
            << s.n_pairs << '\n';
    }
    out << "wrote " << (dir / "report.json").string() << '\n';
    return kExitOk;
}

} // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Parallel dependency graph balancing: scenario validation, analysis and "
                 "simulation",
                 "pdg"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for all subcommands");

    Options o;
    auto add_scenario = [&](CLI::App* sub) {
        sub->add_option("source", o.positional, "Scenario JSON path or builtin:battle");
        sub->add_option("--scenario", o.scenario, "Scenario JSON path or builtin:battle");
    };

    CLI::App* validate_cmd = app.add_subcommand("validate", "Check a scenario; exit 0 iff clean");
    add_scenario(validate_cmd);

    CLI::App* analyze_cmd =
        app.add_subcommand("analyze", "Print aggregate values and effective cease-fire table");
    add_scenario(analyze_cmd);
    analyze_cmd->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    analyze_cmd->add_option("--out", o.out, "Write to PATH instead of stdout");

    CLI::App* simulate_cmd =
        app.add_subcommand("simulate", "Run matched-seed matches with balancing on/off");
    add_scenario(simulate_cmd);
    simulate_cmd->add_option("--matches", o.matches, "Number of seed pairs")
        ->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--seed", o.seed, "Base seed");
    simulate_cmd->add_option("--balancing", o.balancing, "Arms to run")
        ->check(CLI::IsMember({"on", "off", "both"}));
    simulate_cmd->add_option("--out", o.out, "Directory for report.json and logs/");
    simulate_cmd->add_option("--threads", o.threads, "Concurrent match pairs")
        ->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--max-ticks", o.max_ticks, "Override the scenario's match length")
        ->check(CLI::PositiveNumber);

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args)
    {
        argv.push_back(a.c_str());
    }

    try
    {
        app.parse(static_cast<int>(argv.size()), argv.data());
        if (*validate_cmd)
        {
            return run_validate(o, out, err);
        }
        if (*analyze_cmd)
        {
            return run_analyze(o, out, err);
        }
        return run_simulate(o, out, err);
    }
    catch (const CLI::CallForHelp&)
    {
        out << app.help();
        return kExitOk;
    }
    catch (const CLI::CallForAllHelp&)
    {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    }
    catch (const CLI::ParseError& e)
    {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }
    catch (const IoError& e)
    {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    }
    catch (const ScenarioError& e)
    {
        for (const auto& msg : e.errors())
        {
            err << "error: " << msg << '\n';
        }
        return kExitValidation;
    }
}

} // namespace pdg

#include "pdg/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace pdg
{

using nlohmann::json;

const char* to_string(BotKind kind) noexcept
{
    switch (kind)
    {
    case BotKind::builder: return "builder";
    case BotKind::rusher: return "rusher";
    case BotKind::balanced: return "balanced";
    }
    return "unknown";
}

const char* to_string(TargetRule rule) noexcept
{
    switch (rule)
    {
    case TargetRule::highest_value: return "highest_value";
    case TargetRule::random: return "random";
    }
    return "unknown";
}

const char* to_string(Controller controller) noexcept
{
    switch (controller)
    {
    case Controller::human_proxy: return "human_proxy";
    case Controller::ai: return "ai";
    }
    return "unknown";
}

const char* to_string(Interpolation interpolation) noexcept
{
    switch (interpolation)
    {
    case Interpolation::none: return "none";
    case Interpolation::piecewise_linear: return "piecewise_linear";
    }
    return "unknown";
}

ScenarioError::ScenarioError(std::vector<std::string> errors)
    : std::runtime_error("invalid scenario: " +
                         (errors.empty() ? std::string("unknown error") : errors.front()))
    , m_errors(std::move(errors))
{}

namespace
{

/// Typed field access that records problems instead of throwing.
class Reader
{
public:
    explicit Reader(std::vector<std::string>& errors)
        : m_errors(errors)
    {}

    void fail(const std::string& path, const std::string& what) { m_errors.push_back(path + ": " + what); }

    bool object(const json& j, const std::string& path)
    {
        if (!j.is_object())
        {
            fail(path, "expected an object");
            return false;
        }
        return true;
    }

    bool array(const json& j, const std::string& path)
    {
        if (!j.is_array())
        {
            fail(path, "expected an array");
            return false;
        }
        return true;
    }

    void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys)
    {
        for (const auto& [key, value] : obj.items())
        {
            bool known = false;
            for (const char* k : keys)
            {
                known = known || key == k;
            }
            if (!known)
            {
                fail(path, "unknown key '" + key + "'");
            }
        }
    }

    std::optional<std::string> string(const json& obj, const std::string& path, const char* key,
                                      bool required = true)
    {
        if (!obj.contains(key))
        {
            if (required)
            {
                fail(path, std::string("missing '") + key + "'");
            }
            return std::nullopt;
        }
        const json& v = obj.at(key);
        if (!v.is_string())
        {
            fail(path + "." + key, "expected a string");
            return std::nullopt;
        }
        return v.get<std::string>();
    }

    std::optional<std::int64_t> integer(const json& obj, const std::string& path, const char* key,
                                        bool required = true)
    {
        if (!obj.contains(key))
        {
            if (required)
            {
                fail(path, std::string("missing '") + key + "'");
            }
            return std::nullopt;
        }
        return integer_value(obj.at(key), path + "." + key);
    }

    std::optional<std::int64_t> integer_value(const json& v, const std::string& path)
    {
        if (!v.is_number_integer())
        {
            fail(path, "expected an integer");
            return std::nullopt;
        }
        return v.get<std::int64_t>();
    }

    std::optional<double> number(const json& obj, const std::string& path, const char* key)
    {
        if (!obj.contains(key))
        {
            return std::nullopt;
        }
        const json& v = obj.at(key);
        if (!v.is_number())
        {
            fail(path + "." + key, "expected a number");
            return std::nullopt;
        }
        return v.get<double>();
    }

    std::optional<bool> boolean(const json& obj, const std::string& path, const char* key)
    {
        if (!obj.contains(key))
        {
            return std::nullopt;
        }
        const json& v = obj.at(key);
        if (!v.is_boolean())
        {
            fail(path + "." + key, "expected true or false");
            return std::nullopt;
        }
        return v.get<bool>();
    }

    std::map<AssetId, std::int64_t> int_map(const json& obj, const std::string& path,
                                            const char* key)
    {
        std::map<AssetId, std::int64_t> out;
        if (!obj.contains(key))
        {
            return out;
        }
        const json& v = obj.at(key);
        if (!object(v, path + "." + key))
        {
            return out;
        }
        for (const auto& [k, n] : v.items())
        {
            if (auto value = integer_value(n, path + "." + key + "." + k))
            {
                out[k] = *value;
            }
        }
        return out;
    }

private:
    std::vector<std::string>& m_errors;
};

std::string line_col(std::string_view text, std::size_t byte)
{
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    {
        if (text[i] == '\n')
        {
            ++line;
            col = 1;
        }
        else
        {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

template <typename Enum>
std::optional<Enum> parse_enum(Reader& r, const json& obj, const std::string& path,
                               const char* key, std::initializer_list<Enum> options)
{
    auto name = r.string(obj, path, key, false);
    if (!name)
    {
        return std::nullopt;
    }
    for (Enum e : options)
    {
        if (*name == to_string(e))
        {
            return e;
        }
    }
    std::string allowed;
    for (Enum e : options)
    {
        allowed += (allowed.empty() ? "" : ", ") + std::string(to_string(e));
    }
    r.fail(path + "." + key, "'" + *name + "' is not one of: " + allowed);
    return std::nullopt;
}

BotPolicy parse_bot(Reader& r, const json& j, const std::string& path)
{
    BotPolicy bot;
    if (!r.object(j, path))
    {
        return bot;
    }
    r.only_keys(j, path, {"kind", "attack_threshold", "target", "aggression"});
    if (auto k = parse_enum(r, j, path, "kind",
                            {BotKind::builder, BotKind::rusher, BotKind::balanced}))
    {
        bot.kind = *k;
    }
    if (j.contains("attack_threshold") && !j.at("attack_threshold").is_null())
    {
        bot.attack_threshold = r.integer(j, path, "attack_threshold");
    }
    if (auto t = parse_enum(r, j, path, "target", {TargetRule::highest_value, TargetRule::random}))
    {
        bot.target = *t;
    }
    if (auto a = r.number(j, path, "aggression"))
    {
        bot.aggression = *a;
    }
    return bot;
}

SimulationSpec parse_simulation(Reader& r, const json& j)
{
    SimulationSpec sim;
    const std::string path = "simulation";
    if (!r.object(j, path))
    {
        return sim;
    }
    r.only_keys(j, path,
                {"max_ticks", "income_per_tick", "cost_unit", "cost_overrides", "attack_cost",
                 "success_probability", "sample_interval", "log_income", "players",
                 "protected_players"});
    if (auto v = r.integer(j, path, "max_ticks", false)) sim.max_ticks = *v;
    if (auto v = r.integer(j, path, "income_per_tick", false)) sim.income_per_tick = *v;
    if (auto v = r.integer(j, path, "cost_unit", false)) sim.cost_unit = *v;
    sim.cost_overrides = r.int_map(j, path, "cost_overrides");
    if (auto v = r.integer(j, path, "attack_cost", false)) sim.attack_cost = *v;
    if (auto v = r.number(j, path, "success_probability")) sim.success_probability = *v;
    if (auto v = r.integer(j, path, "sample_interval", false)) sim.sample_interval = *v;
    if (auto v = r.boolean(j, path, "log_income")) sim.log_income = *v;

    if (j.contains("players") && r.array(j.at("players"), path + ".players"))
    {
        const json& players = j.at("players");
        for (std::size_t i = 0; i < players.size(); ++i)
        {
            const std::string ppath = path + ".players[" + std::to_string(i) + "]";
            const json& pj = players[i];
            if (!r.object(pj, ppath))
            {
                continue;
            }
            r.only_keys(pj, ppath, {"id", "controller", "bot", "holdings", "resources", "income"});
            PlayerSpec p;
            p.id = r.string(pj, ppath, "id").value_or("");
            if (auto c = parse_enum(r, pj, ppath, "controller",
                                    {Controller::human_proxy, Controller::ai}))
            {
                p.controller = *c;
            }
            if (pj.contains("bot"))
            {
                p.bot = parse_bot(r, pj.at("bot"), ppath + ".bot");
            }
            p.holdings = r.int_map(pj, ppath, "holdings");
            if (auto v = r.integer(pj, ppath, "resources", false)) p.resources = *v;
            if (pj.contains("income") && !pj.at("income").is_null())
            {
                p.income = r.integer(pj, ppath, "income");
            }
            sim.players.push_back(std::move(p));
        }
    }
    if (j.contains("protected_players") && r.array(j.at("protected_players"), path + ".protected_players"))
    {
        const json& prot = j.at("protected_players");
        for (std::size_t i = 0; i < prot.size(); ++i)
        {
            if (!prot[i].is_string())
            {
                r.fail(path + ".protected_players[" + std::to_string(i) + "]", "expected a string");
                continue;
            }
            sim.protected_players.push_back(prot[i].get<std::string>());
        }
    }
    return sim;
}

std::vector<std::string> prefixed(const std::string& prefix, const ValidationReport& report,
                                  bool warnings = false)
{
    std::vector<std::string> out;
    for (const auto& d : warnings ? report.warnings() : report.errors())
    {
        out.push_back(prefix + ": " + d.message);
    }
    return out;
}

/// Semantic checks in dependency order; graph errors stop the value and
/// policy checks that depend on reachability.
void check_semantics(const ScenarioFile& s, ParseResult& result)
{
    const CreationalGraph graph(s.assets, s.edges);
    const ValidationReport graph_report = validate(graph);
    for (auto& e : prefixed("graph", graph_report))
    {
        result.errors.push_back(std::move(e));
    }
    for (auto& w : prefixed("graph", graph_report, true))
    {
        result.warnings.push_back(std::move(w));
    }
    if (!graph_report.ok())
    {
        return;
    }

    std::set<std::pair<AssetId, AssetId>> seen_pairs;
    for (std::size_t i = 0; i < s.dependency_values.size(); ++i)
    {
        const auto& entry = s.dependency_values[i];
        const std::string path = "dependency_values[" + std::to_string(i) + "]";
        for (auto& e : prefixed(path, check_matrix_entries(graph, {entry})))
        {
            result.errors.push_back(std::move(e));
        }
        if (!seen_pairs.emplace(entry.ancestor, entry.descendant).second)
        {
            result.errors.push_back(path + ": duplicate dependency value " + entry.ancestor +
                                    "->" + entry.descendant);
        }
    }
    if (!result.errors.empty())
    {
        return;
    }

    const DependencyValueMatrix matrix(graph, s.dependency_values);
    std::map<AssetId, Seconds> durations;
    for (std::size_t i = 0; i < s.ceasefire.size(); ++i)
    {
        const auto& entry = s.ceasefire[i];
        const std::string path = "ceasefire[" + std::to_string(i) + "]";
        if (!graph.contains(entry.asset))
        {
            result.errors.push_back(path + ": unknown asset '" + entry.asset + "'");
            continue;
        }
        if (!durations.emplace(entry.asset, entry.seconds).second)
        {
            result.errors.push_back(path + ": duplicate cease-fire entry for '" + entry.asset + "'");
        }
    }
    if (!result.errors.empty())
    {
        return;
    }
    const CeasefirePolicy policy(durations, aggregate_table(graph, matrix), s.interpolation);
    for (auto& e : prefixed("ceasefire", validate_policy(policy, graph, matrix)))
    {
        result.errors.push_back(std::move(e));
    }
    if (!result.errors.empty() || !s.simulation)
    {
        return;
    }

    auto model = GameModel::make(graph, matrix, policy);
    for (const auto& p : s.simulation->players)
    {
        for (const auto& [asset, n] : p.holdings)
        {
            if (n < 0)
            {
                result.errors.push_back("simulation: negative starting count of '" + asset +
                                        "' for '" + p.id + "'");
            }
        }
    }
    for (const auto& problem : match_config(s, model).problems())
    {
        result.errors.push_back("simulation: " + problem);
    }
}

} // namespace

ParseResult parse_scenario(std::string_view text)
{
    ParseResult result;
    json doc;
    try
    {
        // A blank document is treated as an empty object so that it reports
        // the missing asset list rather than a syntax error.
        const bool blank = text.find_first_not_of(" \t\r\n") == std::string_view::npos;
        doc = blank ? json::object() : json::parse(text.begin(), text.end());
    }
    catch (const json::parse_error& e)
    {
        result.errors.push_back("syntax error at " + line_col(text, e.byte == 0 ? 0 : e.byte - 1) +
                                ": " + e.what());
        return result;
    }

    Reader r(result.errors);
    if (!r.object(doc, "document"))
    {
        return result;
    }
    r.only_keys(doc, "document",
                {"assets", "edges", "dependency_values", "ceasefire", "ceasefire_interpolation",
                 "simulation"});

    ScenarioFile s;
    if (!doc.contains("assets") || !doc.at("assets").is_array() || doc.at("assets").empty())
    {
        result.errors.emplace_back("assets: no assets defined");
    }
    else
    {
        const json& assets = doc.at("assets");
        for (std::size_t i = 0; i < assets.size(); ++i)
        {
            const std::string path = "assets[" + std::to_string(i) + "]";
            if (!r.object(assets[i], path))
            {
                continue;
            }
            r.only_keys(assets[i], path, {"id", "display_name"});
            AssetType a;
            a.id = r.string(assets[i], path, "id").value_or("");
            a.display_name = r.string(assets[i], path, "display_name", false).value_or(a.id);
            s.assets.push_back(std::move(a));
        }
    }

    if (doc.contains("edges") && r.array(doc.at("edges"), "edges"))
    {
        const json& edges = doc.at("edges");
        for (std::size_t i = 0; i < edges.size(); ++i)
        {
            const std::string path = "edges[" + std::to_string(i) + "]";
            if (!r.object(edges[i], path))
            {
                continue;
            }
            r.only_keys(edges[i], path, {"prerequisite", "product", "required_count"});
            CreationalEdge e;
            e.prerequisite = r.string(edges[i], path, "prerequisite").value_or("");
            e.product = r.string(edges[i], path, "product").value_or("");
            e.required_count = r.integer(edges[i], path, "required_count", false).value_or(1);
            s.edges.push_back(std::move(e));
        }
    }

    if (doc.contains("dependency_values") &&
        r.array(doc.at("dependency_values"), "dependency_values"))
    {
        const json& values = doc.at("dependency_values");
        for (std::size_t i = 0; i < values.size(); ++i)
        {
            const std::string path = "dependency_values[" + std::to_string(i) + "]";
            if (!r.object(values[i], path))
            {
                continue;
            }
            r.only_keys(values[i], path, {"ancestor", "descendant", "value"});
            DependencyValueEntry v;
            v.ancestor = r.string(values[i], path, "ancestor").value_or("");
            v.descendant = r.string(values[i], path, "descendant").value_or("");
            v.value = r.integer(values[i], path, "value").value_or(0);
            s.dependency_values.push_back(std::move(v));
        }
    }

    if (doc.contains("ceasefire") && r.array(doc.at("ceasefire"), "ceasefire"))
    {
        const json& entries = doc.at("ceasefire");
        for (std::size_t i = 0; i < entries.size(); ++i)
        {
            const std::string path = "ceasefire[" + std::to_string(i) + "]";
            if (!r.object(entries[i], path))
            {
                continue;
            }
            r.only_keys(entries[i], path, {"asset", "seconds"});
            CeasefireEntry c;
            c.asset = r.string(entries[i], path, "asset").value_or("");
            c.seconds = r.integer(entries[i], path, "seconds").value_or(0);
            if (c.seconds < 0)
            {
                r.fail(path + ".seconds", "must be >= 0");
            }
            s.ceasefire.push_back(std::move(c));
        }
    }

    if (auto interp = parse_enum(r, doc, "document", "ceasefire_interpolation",
                                 {Interpolation::piecewise_linear, Interpolation::none}))
    {
        s.interpolation = *interp;
    }

    if (doc.contains("simulation"))
    {
        s.simulation = parse_simulation(r, doc.at("simulation"));
    }

    if (!result.errors.empty())
    {
        return result;
    }
    check_semantics(s, result);
    if (result.errors.empty())
    {
        result.scenario = std::move(s);
    }
    return result;
}

std::string serialize_scenario(const ScenarioFile& s)
{
    json doc = json::object();
    json assets = json::array();
    for (const auto& a : s.assets)
    {
        assets.push_back({{"id", a.id}, {"display_name", a.display_name}});
    }
    doc["assets"] = std::move(assets);

    json edges = json::array();
    for (const auto& e : s.edges)
    {
        edges.push_back({{"prerequisite", e.prerequisite},
                         {"product", e.product},
                         {"required_count", e.required_count}});
    }
    doc["edges"] = std::move(edges);

    json values = json::array();
    for (const auto& v : s.dependency_values)
    {
        values.push_back({{"ancestor", v.ancestor}, {"descendant", v.descendant}, {"value", v.value}});
    }
    doc["dependency_values"] = std::move(values);

    json ceasefire = json::array();
    for (const auto& c : s.ceasefire)
    {
        ceasefire.push_back({{"asset", c.asset}, {"seconds", c.seconds}});
    }
    doc["ceasefire"] = std::move(ceasefire);
    doc["ceasefire_interpolation"] = to_string(s.interpolation);

    if (s.simulation)
    {
        const SimulationSpec& sim = *s.simulation;
        json sj = json::object();
        sj["max_ticks"] = sim.max_ticks;
        sj["income_per_tick"] = sim.income_per_tick;
        sj["cost_unit"] = sim.cost_unit;
        sj["cost_overrides"] = sim.cost_overrides;
        sj["attack_cost"] = sim.attack_cost;
        sj["success_probability"] = sim.success_probability;
        sj["sample_interval"] = sim.sample_interval;
        sj["log_income"] = sim.log_income;
        json players = json::array();
        for (const auto& p : sim.players)
        {
            json bot = {{"kind", to_string(p.bot.kind)},
                        {"target", to_string(p.bot.target)},
                        {"aggression", p.bot.aggression}};
            bot["attack_threshold"] =
                p.bot.attack_threshold ? json(*p.bot.attack_threshold) : json(nullptr);
            json pj = {{"id", p.id},
                       {"controller", to_string(p.controller)},
                       {"bot", std::move(bot)},
                       {"holdings", p.holdings},
                       {"resources", p.resources}};
            pj["income"] = p.income ? json(*p.income) : json(nullptr);
            players.push_back(std::move(pj));
        }
        sj["players"] = std::move(players);
        sj["protected_players"] = sim.protected_players;
        doc["simulation"] = std::move(sj);
    }
    return doc.dump(2) + "\n";
}

std::shared_ptr<const GameModel> build_model(const ScenarioFile& s)
{
    CreationalGraph graph(s.assets, s.edges);
    ValidationReport report = validate(graph);
    if (!report.ok())
    {
        throw ScenarioError(prefixed("graph", report));
    }
    const ValidationReport matrix_report = check_matrix_entries(graph, s.dependency_values);
    if (!matrix_report.ok())
    {
        throw ScenarioError(prefixed("dependency_values", matrix_report));
    }
    DependencyValueMatrix matrix(graph, s.dependency_values);
    std::map<AssetId, Seconds> durations;
    for (const auto& c : s.ceasefire)
    {
        durations[c.asset] = c.seconds;
    }
    CeasefirePolicy policy(std::move(durations), aggregate_table(graph, matrix), s.interpolation);
    const ValidationReport policy_report = validate_policy(policy, graph, matrix);
    if (!policy_report.ok())
    {
        throw ScenarioError(prefixed("ceasefire", policy_report));
    }
    return GameModel::make(std::move(graph), std::move(matrix), std::move(policy));
}

MatchConfig match_config(const ScenarioFile& scenario, std::shared_ptr<const GameModel> model,
                         std::uint64_t seed)
{
    const SimulationSpec sim = scenario.simulation.value_or(SimulationSpec{});
    MatchConfig config;
    config.model = model;
    config.max_ticks = sim.max_ticks;
    config.income_per_tick = sim.income_per_tick;
    config.cost.unit = sim.cost_unit;
    config.cost.overrides = sim.cost_overrides;
    config.attack.attack_cost = sim.attack_cost;
    config.attack.success_probability = sim.success_probability;
    config.sample_interval = sim.sample_interval;
    config.log_income = sim.log_income;
    config.seed = seed;

    std::vector<PlayerSpec> players = sim.players;
    std::vector<PlayerKey> protected_players = sim.protected_players;
    if (players.empty())
    {
        const auto roots = model->graph->roots();
        std::map<AssetId, std::int64_t> start;
        if (!roots.empty())
        {
            start[roots.front()] = 1;
        }
        BotPolicy rusher;
        rusher.kind = BotKind::rusher;
        players.push_back({"ai", Controller::ai, rusher, start, 0, std::nullopt});
        players.push_back({"human", Controller::human_proxy, BotPolicy{}, start, 0, std::nullopt});
        if (protected_players.empty())
        {
            protected_players.push_back("human");
        }
    }
    for (const auto& p : players)
    {
        PlayerSetup setup;
        setup.player = {p.id, p.controller};
        setup.bot = p.bot;
        for (const auto& [asset, n] : p.holdings)
        {
            if (n > 0)
            {
                setup.holdings.add(asset, n);
            }
        }
        setup.resources = p.resources;
        setup.income = p.income;
        config.players.push_back(std::move(setup));
    }
    config.balancing.enabled = true;
    config.balancing.protected_players.insert(protected_players.begin(), protected_players.end());
    config.balancing.policy = model->policy;
    return config;
}

const ScenarioFile& bundled_battle()
{
    static const ScenarioFile scenario = [] {
        ParseResult parsed = parse_scenario(bundled_battle_text());
        if (!parsed.ok())
        {
            throw ScenarioError(parsed.errors);
        }
        return std::move(*parsed.scenario);
    }();
    return scenario;
}

std::string load_scenario_text(const std::string& source)
{
    if (source.starts_with(kBuiltinPrefix))
    {
        const std::string name = source.substr(kBuiltinPrefix.size());
        if (name == "battle")
        {
            return std::string(bundled_battle_text());
        }
        throw std::runtime_error("unknown builtin scenario '" + name + "' (available: battle)");
    }
    std::ifstream in(source, std::ios::binary);
    if (!in)
    {
        throw std::runtime_error("cannot open scenario file '" + source + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad())
    {
        throw std::runtime_error("error reading scenario file '" + source + "'");
    }
    return buffer.str();
}

} // namespace pdg

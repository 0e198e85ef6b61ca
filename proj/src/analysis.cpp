#include "pdg/analysis.hpp"

#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace pdg
{

using nlohmann::json;

const char* to_string(DurationSource source) noexcept
{
    return source == DurationSource::explicit_entry ? "explicit" : "interpolated";
}

ReportBundle analyze(const ScenarioFile& scenario)
{
    const auto model = build_model(scenario);
    ReportBundle bundle;
    for (const auto& ranked : significance_ranking(*model->graph, model->matrix))
    {
        bundle.rows.push_back({ranked.asset, ranked.total, model->policy.duration(ranked.asset),
                               model->policy.source(ranked.asset)});
    }
    return bundle;
}

std::string rows_to_csv(const std::vector<SignificanceRow>& rows)
{
    std::ostringstream os;
    os << "asset,aggregate_value,ceasefire_seconds,source\n";
    for (const auto& r : rows)
    {
        os << r.asset << ',' << r.aggregate_value << ',' << r.ceasefire_seconds << ','
           << to_string(r.source) << '\n';
    }
    return os.str();
}

namespace
{

json optional_key(const std::optional<PlayerKey>& key)
{
    return key ? json(*key) : json(nullptr);
}

std::optional<PlayerKey> read_optional_key(const json& j)
{
    if (j.is_null())
    {
        return std::nullopt;
    }
    return j.get<std::string>();
}

json event_json(const MatchEvent& e)
{
    return {{"tick", e.tick},     {"type", to_string(e.type)}, {"player", e.player},
            {"asset", e.asset},   {"count", e.count},          {"detail", e.detail}};
}

MatchEvent event_from(const json& j)
{
    MatchEvent e;
    e.tick = j.at("tick").get<Tick>();
    const auto name = j.at("type").get<std::string>();
    const auto type = event_type_from_string(name);
    if (!type)
    {
        throw std::runtime_error("unknown event type '" + name + "'");
    }
    e.type = *type;
    e.player = j.at("player").get<std::string>();
    e.asset = j.at("asset").get<std::string>();
    e.count = j.at("count").get<std::int64_t>();
    e.detail = j.at("detail").get<std::string>();
    return e;
}

json events_json(const std::vector<MatchEvent>& events)
{
    json out = json::array();
    for (const auto& e : events)
    {
        out.push_back(event_json(e));
    }
    return out;
}

std::vector<MatchEvent> events_from(const json& j)
{
    std::vector<MatchEvent> out;
    for (const auto& e : j)
    {
        out.push_back(event_from(e));
    }
    return out;
}

json survival_json(const std::map<PlayerKey, std::optional<Tick>>& survival)
{
    json out = json::object();
    for (const auto& [id, t] : survival)
    {
        out[id] = t ? json(*t) : json(nullptr);
    }
    return out;
}

json arm_json(const ArmOutcome& a)
{
    return {{"winner", optional_key(a.winner)},
            {"end_tick", a.end_tick},
            {"focus_survival", a.focus_survival},
            {"focus_won", a.focus_won},
            {"focus_margin", a.focus_margin},
            {"survival_tick", survival_json(a.survival_tick)},
            {"final_score", a.final_score}};
}

ArmOutcome arm_from(const json& j)
{
    ArmOutcome a;
    a.winner = read_optional_key(j.at("winner"));
    a.end_tick = j.at("end_tick").get<Tick>();
    a.focus_survival = j.at("focus_survival").get<Tick>();
    a.focus_won = j.at("focus_won").get<bool>();
    a.focus_margin = j.at("focus_margin").get<std::int64_t>();
    for (const auto& [id, t] : j.at("survival_tick").items())
    {
        a.survival_tick[id] = t.is_null() ? std::nullopt : std::optional<Tick>(t.get<Tick>());
    }
    a.final_score = j.at("final_score").get<std::map<PlayerKey, std::int64_t>>();
    return a;
}

json stats_json(const std::optional<ArmStats>& s)
{
    if (!s)
    {
        return nullptr;
    }
    return {{"mean_survival", s->mean_survival},
            {"win_rate", s->win_rate},
            {"mean_margin", s->mean_margin}};
}

std::optional<ArmStats> stats_from(const json& j)
{
    if (j.is_null())
    {
        return std::nullopt;
    }
    return ArmStats{j.at("mean_survival").get<double>(), j.at("win_rate").get<double>(),
                    j.at("mean_margin").get<double>()};
}

json experiment_json(const ExperimentReport& r)
{
    json pairs = json::array();
    for (const auto& p : r.pairs)
    {
        pairs.push_back({{"index", p.index},
                         {"seed", p.seed},
                         {"on", p.on ? arm_json(*p.on) : json(nullptr)},
                         {"off", p.off ? arm_json(*p.off) : json(nullptr)}});
    }
    const auto& s = r.summary;
    json summary = {{"n_pairs", s.n_pairs},
                    {"on", stats_json(s.on)},
                    {"off", stats_json(s.off)},
                    {"delta", stats_json(s.delta)},
                    {"pairs_on_ge_off", s.pairs_on_ge_off},
                    {"pairs_on_gt_off", s.pairs_on_gt_off}};
    return {{"focus_player", r.focus_player},
            {"base_seed", r.base_seed},
            {"summary", std::move(summary)},
            {"pairs", std::move(pairs)}};
}

ExperimentReport experiment_from(const json& j)
{
    ExperimentReport r;
    r.focus_player = j.at("focus_player").get<std::string>();
    r.base_seed = j.at("base_seed").get<std::uint64_t>();
    for (const auto& p : j.at("pairs"))
    {
        PairResult pr;
        pr.index = p.at("index").get<std::size_t>();
        pr.seed = p.at("seed").get<std::uint64_t>();
        if (!p.at("on").is_null())
        {
            pr.on = arm_from(p.at("on"));
        }
        if (!p.at("off").is_null())
        {
            pr.off = arm_from(p.at("off"));
        }
        r.pairs.push_back(std::move(pr));
    }
    const json& s = j.at("summary");
    r.summary.n_pairs = s.at("n_pairs").get<std::size_t>();
    r.summary.on = stats_from(s.at("on"));
    r.summary.off = stats_from(s.at("off"));
    r.summary.delta = stats_from(s.at("delta"));
    r.summary.pairs_on_ge_off = s.at("pairs_on_ge_off").get<std::size_t>();
    r.summary.pairs_on_gt_off = s.at("pairs_on_gt_off").get<std::size_t>();
    return r;
}

} // namespace

std::string events_to_json(const std::vector<MatchEvent>& events)
{
    return events_json(events).dump(2) + "\n";
}

std::vector<MatchEvent> events_from_json(const std::string& text)
{
    try
    {
        return events_from(json::parse(text));
    }
    catch (const json::exception& e)
    {
        throw std::runtime_error(std::string("malformed event log: ") + e.what());
    }
}

std::string experiment_to_json(const ExperimentReport& report)
{
    return experiment_json(report).dump(2) + "\n";
}

std::string bundle_to_json(const ReportBundle& bundle)
{
    json rows = json::array();
    for (const auto& r : bundle.rows)
    {
        rows.push_back({{"asset", r.asset},
                        {"aggregate_value", r.aggregate_value},
                        {"ceasefire_seconds", r.ceasefire_seconds},
                        {"source", to_string(r.source)}});
    }
    json logs = json::array();
    for (const auto& log : bundle.event_logs)
    {
        logs.push_back({{"name", log.name}, {"events", events_json(log.events)}});
    }
    json doc = {{"significance", std::move(rows)},
                {"experiment",
                 bundle.experiment ? experiment_json(*bundle.experiment) : json(nullptr)},
                {"event_logs", std::move(logs)}};
    return doc.dump(2) + "\n";
}

ReportBundle bundle_from_json(const std::string& text)
{
    try
    {
        const json doc = json::parse(text);
        ReportBundle bundle;
        for (const auto& r : doc.at("significance"))
        {
            const auto source = r.at("source").get<std::string>();
            if (source != "explicit" && source != "interpolated")
            {
                throw std::runtime_error("unknown duration source '" + source + "'");
            }
            bundle.rows.push_back({r.at("asset").get<std::string>(),
                                   r.at("aggregate_value").get<std::int64_t>(),
                                   r.at("ceasefire_seconds").get<Seconds>(),
                                   source == "explicit" ? DurationSource::explicit_entry
                                                        : DurationSource::interpolated});
        }
        if (!doc.at("experiment").is_null())
        {
            bundle.experiment = experiment_from(doc.at("experiment"));
        }
        for (const auto& log : doc.at("event_logs"))
        {
            bundle.event_logs.push_back(
                {log.at("name").get<std::string>(), events_from(log.at("events"))});
        }
        return bundle;
    }
    catch (const json::exception& e)
    {
        throw std::runtime_error(std::string("malformed report bundle: ") + e.what());
    }
}

} // namespace pdg

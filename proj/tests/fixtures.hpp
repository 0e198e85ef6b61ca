#pragma once

#include <memory>

#include "pdg/scenario.hpp"
#include "pdg/simulator.hpp"

namespace pdg::testing
{

inline std::shared_ptr<const GameModel> battle_model()
{
    static const auto model = build_model(bundled_battle());
    return model;
}

inline const CreationalGraph& battle_graph()
{
    return *battle_model()->graph;
}

inline CreationalGraph make_graph(std::vector<std::string> ids,
                                  std::vector<CreationalEdge> edges)
{
    std::vector<AssetType> assets;
    for (auto& id : ids)
    {
        assets.push_back({id, id});
    }
    return CreationalGraph(std::move(assets), std::move(edges));
}

} // namespace pdg::testing

/*
 * planar_io.hpp
 *
 * JSON form of planar arc diagrams:
 *
 *   {"outer": 0, "inputs": [6, 4, 0],
 *    "arcs": [[{"disc": 0, "pos": 0}, {"disc": 1, "pos": 3}], ...],
 *    "loops": 0, "basepoints": [0, 0, 0, 0]}
 *
 * "disc" is either "outer" or an input index; basepoints list the outer
 * disc first.  Keys are written in this order so that writing a parsed
 * document reproduces it byte for byte.
 */
#ifndef KHMORSE_PLANAR_IO_HPP
#define KHMORSE_PLANAR_IO_HPP

#include <string>

#include <json.hpp>

#include "planar.hpp"

namespace khmorse
{

using ojson = nlohmann::ordered_json;

inline ojson to_json(const PlanarArcDiagram& D)
{
    auto ref = [](Endpoint e) {
        ojson j;
        if (e.disc == outer_disc)
            j["disc"] = "outer";
        else
            j["disc"] = e.disc;
        j["pos"] = e.pos;
        return j;
    };
    ojson arcs = ojson::array();
    for (auto& [a, b] : D.arcs())
        arcs.push_back(ojson::array({ref(a), ref(b)}));
    ojson j;
    j["outer"] = D.outer();
    j["inputs"] = D.inputs();
    j["arcs"] = std::move(arcs);
    j["loops"] = D.loops();
    j["basepoints"] = D.basepoints();
    return j;
}

inline PlanarArcDiagram diagram_from_json(const ojson& j)
{
    try
    {
        auto ref = [](const ojson& r) {
            Endpoint e;
            const ojson& d = r.at("disc");
            if (d.is_string())
            {
                if (d.get<std::string>() != "outer")
                    throw ParseError("disc must be \"outer\" or an input index", "bad_diagram");
                e.disc = outer_disc;
            }
            else
                e.disc = d.get<int>();
            e.pos = r.at("pos").get<int>();
            return e;
        };
        std::vector<PlanarArcDiagram::Arc> arcs;
        for (auto& a : j.at("arcs"))
        {
            if (!a.is_array() || a.size() != 2)
                throw ParseError("each arc must list two endpoints", "bad_diagram");
            arcs.push_back({ref(a[0]), ref(a[1])});
        }
        std::vector<int> bps;
        if (j.contains("basepoints"))
            bps = j.at("basepoints").get<std::vector<int>>();
        return PlanarArcDiagram(j.at("outer").get<int>(), j.at("inputs").get<std::vector<int>>(), std::move(arcs),
                                j.value("loops", 0), std::move(bps));
    }
    catch (const nlohmann::json::exception& e)
    {
        throw ParseError(std::string("diagram JSON: ") + e.what(), "bad_diagram");
    }
    catch (const InvariantViolation& e)
    {
        throw ParseError(std::string("diagram JSON: ") + e.what(), e.code());
    }
}

inline PlanarArcDiagram parse_diagram(const std::string& text)
{
    ojson j;
    try
    {
        j = ojson::parse(text);
    }
    catch (const nlohmann::json::exception& e)
    {
        throw ParseError(std::string("diagram JSON: ") + e.what(), "bad_json");
    }
    return diagram_from_json(j);
}

} // namespace khmorse

#endif

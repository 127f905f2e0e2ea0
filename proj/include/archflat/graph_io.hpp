#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "periodic_graph.hpp"

namespace archflat {

using nlohmann::json;

inline json graph_to_json(const PeriodicGraph& g)
{
    json j;
    j["name"] = g.name();
    j["vertices"] = g.n_vertices();
    j["edges"] = json::array();
    for (const auto& e : g.edges()) {
        j["edges"].push_back(
            {{"tail", e.tail}, {"head", e.head}, {"offset", {e.offset.b1, e.offset.b2}}, {"class", e.weight_class}});
    }
    // signed: k for the tail end of edge k, -k-1 for its head end
    j["cyclic_order"] = json::array();
    for (const auto& row : g.cyclic_order()) {
        json r = json::array();
        for (const auto& h : row) r.push_back(h.reversed ? -static_cast<long long>(h.edge) - 1 : static_cast<long long>(h.edge));
        j["cyclic_order"].push_back(r);
    }
    if (g.embedding()) {
        const auto& em = *g.embedding();
        j["embedding"] = {{"positions", em.positions}, {"basis", em.basis}};
    }
    return j;
}

inline PeriodicGraph graph_from_json(const json& j)
{
    try {
        const auto n = j.at("vertices").get<long long>();
        if (n <= 0) throw ConfigError("'vertices' must be positive");
        std::vector<EdgeClass> edges;
        for (const auto& e : j.at("edges")) {
            const auto tail = e.at("tail").get<long long>();
            const auto head = e.at("head").get<long long>();
            if (tail < 0 || head < 0 || tail >= n || head >= n)
                throw ConfigError("edge endpoint out of range [0, " + std::to_string(n) + ")");
            const auto& off = e.at("offset");
            if (!off.is_array() || off.size() != 2) throw ConfigError("edge offset must be [b1, b2]");
            edges.push_back({static_cast<std::size_t>(tail), static_cast<std::size_t>(head),
                             {off[0].get<int>(), off[1].get<int>()}, e.at("class").get<std::string>()});
        }
        std::vector<std::vector<HalfEdge>> cyc;
        if (j.contains("cyclic_order")) {
            for (const auto& row : j.at("cyclic_order")) {
                auto& out = cyc.emplace_back();
                for (const auto& k : row) {
                    const auto v = k.get<long long>();
                    if (v >= static_cast<long long>(edges.size()) || -v - 1 >= static_cast<long long>(edges.size()))
                        throw ConfigError("cyclic order references unknown edge " + std::to_string(v));
                    out.push_back(v >= 0 ? HalfEdge{static_cast<std::size_t>(v), false}
                                         : HalfEdge{static_cast<std::size_t>(-v - 1), true});
                }
            }
        }
        std::optional<Embedding> emb;
        if (j.contains("embedding") && !j.at("embedding").is_null()) {
            Embedding em;
            em.positions = j.at("embedding").at("positions").get<std::vector<std::array<double, 2>>>();
            em.basis = j.at("embedding").at("basis").get<std::array<std::array<double, 2>, 2>>();
            emb = std::move(em);
        }
        return PeriodicGraph(j.value("name", std::string("graph")), static_cast<std::size_t>(n), std::move(edges),
                             std::move(cyc), std::move(emb));
    } catch (const json::exception& ex) {
        throw ConfigError(std::string("malformed graph file: ") + ex.what());
    }
}

inline json weights_to_json(const WeightAssignment& w)
{
    json j = json::object();
    for (const auto& [k, v] : w.values()) j[k] = v;
    return j;
}

inline WeightAssignment weights_from_json(const json& j)
{
    if (!j.is_object()) throw ConfigError("weight file must be an object mapping class labels to numbers");
    std::map<std::string, double, NaturalLess> m;
    for (const auto& [k, v] : j.items()) {
        if (!v.is_number()) throw ConfigError("weight of class '" + k + "' is not a number");
        m[k] = v.get<double>();
    }
    return WeightAssignment(std::move(m));
}

namespace detail {

inline json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& ex) {
        throw ConfigError("cannot parse '" + path + "': " + ex.what());
    }
}

inline void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << text;
}

}  // namespace detail

inline PeriodicGraph load_graph(const std::string& path) { return graph_from_json(detail::read_json_file(path)); }

inline void save_graph(const PeriodicGraph& g, const std::string& path)
{
    detail::write_text_file(path, graph_to_json(g).dump(2) + "\n");
}

inline WeightAssignment load_weights(const std::string& path) { return weights_from_json(detail::read_json_file(path)); }

inline void save_weights(const WeightAssignment& w, const std::string& path)
{
    detail::write_text_file(path, weights_to_json(w).dump(2) + "\n");
}

}  // namespace archflat

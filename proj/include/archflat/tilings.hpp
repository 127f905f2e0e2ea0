#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "periodic_graph.hpp"

namespace archflat {

namespace detail {

struct TilingEdge {
    std::size_t tail;
    std::size_t head;
    LatticeOffset offset;
    const char* label;
};

// Cyclic orders are counterclockwise; entry e >= 0 is edge e leaving the
// vertex at its tail, entry ~e (= -e-1) is edge e arriving at its head.
struct TilingData {
    const char* name;
    std::size_t n_vertices;
    std::vector<TilingEdge> edges;
    std::vector<std::vector<int>> cyclic;
    std::vector<std::array<double, 2>> positions;
    double basis[2][2];
};

inline const std::vector<TilingData>& tiling_table()
{
    static const std::vector<TilingData> table{
        TilingData{"kagome", 3,
            {{0, 1, {0, 0}, "g3"}, {0, 1, {1, 0}, "g6"}, {0, 2, {0, 1}, "g1"}, {0, 2, {1, 0}, "g4"}, {1, 2, {0, 0}, "g2"}, {1, 2, {0, 1}, "g5"}},
            {{1, 2, 0, 3}, {-1, 5, -2, 4}, {-5, -4, -6, -3}},
            {{0.5, 0.866025403784439}, {-0.5, 0.866025403784439}, {-1.0, 0.0}},
            {{2.0, 0.0}, {1.0, 1.732050807568877}}},
        TilingData{"super_kagome", 6,
            {{0, 1, {0, 0}, "g4"}, {0, 2, {0, 0}, "g6"}, {0, 4, {0, 1}, "g9"}, {1, 2, {0, 0}, "g5"}, {1, 5, {1, 0}, "g8"}, {2, 3, {0, 0}, "g7"}, {3, 4, {0, 0}, "g3"}, {3, 5, {0, 0}, "g2"}, {4, 5, {0, 0}, "g1"}},
            {{0, 2, 1}, {4, -1, 3}, {-4, -2, 5}, {-6, 7, 6}, {-7, 8, -3}, {-9, -8, -5}},
            {{-0.5, 1.866025403784438}, {0.5, 1.866025403784438}, {0.0, 1.0}, {0.0, 0.0}, {0.5, -0.866025403784439}, {-0.5, -0.866025403784439}},
            {{1.866025403784438, 3.232050807568877}, {-1.866025403784438, 3.232050807568877}}},
        TilingData{"square", 1,
            {{0, 0, {0, 1}, "g1"}, {0, 0, {1, 0}, "g2"}},
            {{1, 0, -2, -1}},
            {{0.0, 0.0}},
            {{1.0, 0.0}, {0.0, 1.0}}},
        TilingData{"triangular", 1,
            {{0, 0, {0, 1}, "g1"}, {0, 0, {1, -1}, "g2"}, {0, 0, {1, 0}, "g3"}},
            {{2, 0, -2, -3, -1, 1}},
            {{0.0, 0.0}},
            {{1.0, 0.0}, {0.5, 0.866025403784439}}},
        TilingData{"hexagonal", 2,
            {{0, 1, {0, -1}, "g1"}, {0, 1, {0, 0}, "g2"}, {0, 1, {1, -1}, "g3"}},
            {{1, 0, 2}, {-1, -3, -2}},
            {{0.0, 0.0}, {0.0, 1.0}},
            {{1.732050807568877, 0.0}, {0.866025403784439, 1.5}}},
        TilingData{"33434", 4,
            {{0, 1, {0, 0}, "g1"}, {0, 1, {1, 0}, "g2"}, {0, 2, {0, 1}, "g3"}, {0, 3, {0, 0}, "g4"}, {0, 3, {0, 1}, "g5"}, {1, 2, {0, 0}, "g6"}, {1, 2, {0, 1}, "g7"}, {1, 3, {-1, 0}, "g8"}, {2, 3, {-1, 0}, "g9"}, {2, 3, {0, 0}, "g10"}},
            {{4, 2, 0, 3, 1}, {-1, 6, -2, 7, 5}, {9, -6, 8, -7, -3}, {-8, -4, -10, -5, -9}},
            {{0.353553390593274, 0.612372435695795}, {-0.612372435695795, 0.353553390593274}, {-0.353553390593274, -0.612372435695794}, {0.612372435695794, -0.353553390593274}},
            {{1.931851652578136, 0.0}, {0.0, 1.931851652578136}}},
        TilingData{"3344", 2,
            {{0, 0, {1, 0}, "g1"}, {0, 1, {0, -1}, "g2"}, {0, 1, {0, 0}, "g3"}, {0, 1, {1, -1}, "g4"}, {1, 1, {1, 0}, "g5"}},
            {{0, 2, -1, 1, 3}, {4, -2, -4, -5, -3}},
            {{0.0, 0.0}, {0.0, 1.0}},
            {{1.0, 0.0}, {0.5, 1.866025403784438}}},
        TilingData{"488", 4,
            {{0, 1, {0, 0}, "g1"}, {0, 2, {1, 0}, "g2"}, {0, 3, {0, 0}, "g3"}, {1, 2, {0, 0}, "g4"}, {1, 3, {0, 1}, "g5"}, {2, 3, {0, 0}, "g6"}},
            {{1, 0, 2}, {4, 3, -1}, {-4, -2, 5}, {-3, -6, -5}},
            {{0.707106781186548, 0.0}, {0.0, 0.707106781186548}, {-0.707106781186548, 0.0}, {0.0, -0.707106781186548}},
            {{2.414213562373095, 0.0}, {0.0, 2.414213562373095}}},
        TilingData{"3464", 6,
            {{0, 1, {0, 0}, "g1"}, {0, 2, {1, -1}, "g2"}, {0, 4, {1, 0}, "g3"}, {0, 5, {0, 0}, "g4"}, {1, 2, {0, 0}, "g5"}, {1, 3, {1, 0}, "g6"}, {1, 5, {0, 1}, "g7"}, {2, 3, {0, 0}, "g8"}, {2, 4, {0, 1}, "g9"}, {3, 4, {0, 0}, "g10"}, {3, 5, {-1, 1}, "g11"}, {4, 5, {0, 0}, "g12"}},
            {{2, 0, 3, 1}, {5, 6, 4, -1}, {-5, 8, -2, 7}, {-8, 10, -6, 9}, {11, -10, -3, -9}, {-4, -12, -7, -11}},
            {{1.0, 0.0}, {0.5, 0.866025403784439}, {-0.5, 0.866025403784439}, {-1.0, 0.0}, {-0.5, -0.866025403784438}, {0.5, -0.866025403784439}},
            {{2.366025403784438, 1.366025403784438}, {0.0, 2.732050807568877}}},
        TilingData{"4612", 12,
            {{0, 1, {0, 0}, "g1"}, {0, 5, {1, 0}, "g2"}, {0, 11, {0, 0}, "g3"}, {1, 2, {0, 0}, "g4"}, {1, 8, {0, 1}, "g5"}, {2, 3, {0, 0}, "g6"}, {2, 7, {0, 1}, "g7"}, {3, 4, {0, 0}, "g8"}, {3, 10, {-1, 1}, "g9"}, {4, 5, {0, 0}, "g10"}, {4, 9, {-1, 1}, "g11"}, {5, 6, {0, 0}, "g12"}, {6, 7, {0, 0}, "g13"}, {6, 11, {-1, 0}, "g14"}, {7, 8, {0, 0}, "g15"}, {8, 9, {0, 0}, "g16"}, {9, 10, {0, 0}, "g17"}, {10, 11, {0, 0}, "g18"}},
            {{1, 0, 2}, {4, 3, -1}, {6, 5, -4}, {-6, 8, 7}, {-8, 10, 9}, {-10, -2, 11}, {-12, 13, 12}, {-13, -7, 14}, {15, -15, -5}, {16, -16, -11}, {17, -17, -9}, {-14, -3, -18}},
            {{1.866025403784439, 0.5}, {1.366025403784439, 1.366025403784439}, {0.5, 1.866025403784439}, {-0.5, 1.866025403784439}, {-1.366025403784439, 1.366025403784439}, {-1.866025403784439, 0.500000000000001}, {-1.866025403784439, -0.5}, {-1.366025403784439, -1.366025403784439}, {-0.5, -1.866025403784439}, {0.499999999999999, -1.866025403784439}, {1.366025403784438, -1.366025403784439}, {1.866025403784439, -0.5}},
            {{4.732050807568877, 0.0}, {2.366025403784438, 4.098076211353315}}},
        TilingData{"3336", 6,
            {{0, 1, {0, 0}, "g1"}, {0, 2, {1, -1}, "g2"}, {0, 3, {1, 0}, "g3"}, {0, 4, {1, 0}, "g4"}, {0, 5, {0, 0}, "g5"}, {1, 2, {0, 0}, "g6"}, {1, 3, {1, 0}, "g7"}, {1, 4, {0, 1}, "g8"}, {1, 5, {0, 1}, "g9"}, {2, 3, {0, 0}, "g10"}, {2, 4, {0, 1}, "g11"}, {2, 5, {-1, 1}, "g12"}, {3, 4, {0, 0}, "g13"}, {3, 5, {-1, 1}, "g14"}, {4, 5, {0, 0}, "g15"}},
            {{3, 2, 0, 4, 1}, {6, 8, 7, 5, -1}, {-6, 10, -2, 11, 9}, {-10, 13, -7, -3, 12}, {14, -13, -4, -11, -8}, {-12, -5, -15, -9, -14}},
            {{1.0, 0.0}, {0.5, 0.866025403784439}, {-0.5, 0.866025403784439}, {-1.0, 0.0}, {-0.5, -0.866025403784438}, {0.5, -0.866025403784439}},
            {{2.5, 0.866025403784439}, {0.5, 2.598076211353316}}},
    };
    return table;
}

}  // namespace detail

/// Names accepted by builtin().
inline std::vector<std::string> builtin_names()
{
    std::vector<std::string> out;
    for (const auto& t : detail::tiling_table()) out.emplace_back(t.name);
    return out;
}

/// One of the eleven Archimedean tilings, unit edge length.
///
/// Kagome uses vertices v1..v3 and classes g1..g6, Super-Kagome v1..v6 and
/// g1..g9 (g1..g6 on triangles, g7..g9 joining them). The other tilings carry
/// one class per edge of the fundamental domain.
inline PeriodicGraph builtin(std::string_view name)
{
    for (const auto& t : detail::tiling_table()) {
        if (name != t.name) continue;
        std::vector<EdgeClass> edges;
        for (const auto& e : t.edges) edges.push_back({e.tail, e.head, e.offset, e.label});
        std::vector<std::vector<HalfEdge>> cyc;
        for (const auto& row : t.cyclic) {
            auto& out = cyc.emplace_back();
            for (int k : row) {
                if (k >= 0)
                    out.push_back({static_cast<std::size_t>(k), false});
                else
                    out.push_back({static_cast<std::size_t>(~k), true});
            }
        }
        return PeriodicGraph(t.name, t.n_vertices, std::move(edges), std::move(cyc), Embedding{t.positions, {{{t.basis[0][0], t.basis[0][1]}, {t.basis[1][0], t.basis[1][1]}}}});
    }
    throw ConfigError("unknown tiling '" + std::string(name) + "'");
}

}  // namespace archflat

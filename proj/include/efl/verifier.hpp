#pragma once

// Independent checking: proper-coloring verification, a brute-force chromatic
// number oracle for small instances, and renaming-invariant signatures.
// Nothing here shares logic with the coloring engine; every check works from
// the instance and the coloring alone.

#include "efl/builder.hpp"
#include "efl/core.hpp"

namespace efl {

enum class ViolationKind { SameColorInClique, MissingVertex, ColorOutOfRange };

inline std::string_view violation_name(ViolationKind k) {
    switch (k) {
        case ViolationKind::SameColorInClique: return "same-color-in-clique";
        case ViolationKind::MissingVertex: return "missing-vertex";
        case ViolationKind::ColorOutOfRange: return "color-out-of-range";
    }
    return "?";
}

struct Violation {
    ViolationKind kind;
    int clique = 0;                 // smallest containing clique for vertex issues
    std::vector<VertexId> vertices; // the pair for clashes, the single vertex otherwise

    bool operator==(const Violation&) const = default;
};

inline std::string to_line(const Violation& v) {
    std::string s = "VIOLATION ";
    s += violation_name(v.kind);
    s += " clique=" + std::to_string(v.clique) + " vertices=";
    for (std::size_t k = 0; k < v.vertices.size(); ++k) {
        if (k) s += ',';
        s += v.vertices[k].token;
    }
    return s;
}

inline void write_violations(const std::vector<Violation>& vs, std::ostream& out) {
    for (const auto& v : vs) out << to_line(v) << '\n';
}

// Empty iff the coloring is total on the instance, uses colors in 1..n, and
// no clique holds two distinct vertices of equal color.  Tokens in the
// coloring that do not occur in the instance are ignored.
inline std::vector<Violation> verify_coloring(const EflInstance& inst, const Coloring& col) {
    std::vector<Violation> out;

    auto first_clique_of = [&](const VertexId& v) {
        for (std::size_t c = 0; c < inst.cliques.size(); ++c)
            if (std::find(inst.cliques[c].begin(), inst.cliques[c].end(), v) !=
                inst.cliques[c].end())
                return static_cast<int>(c) + 1;
        return 0;
    };

    for (const auto& v : vertices_of(inst)) {
        auto it = col.assignment.find(v);
        if (it == col.assignment.end())
            out.push_back({ViolationKind::MissingVertex, first_clique_of(v), {v}});
        else if (it->second < 1 || it->second > inst.n)
            out.push_back({ViolationKind::ColorOutOfRange, first_clique_of(v), {v}});
    }

    for (std::size_t c = 0; c < inst.cliques.size(); ++c) {
        auto members = inst.cliques[c];
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        for (std::size_t a = 0; a < members.size(); ++a) {
            auto ia = col.assignment.find(members[a]);
            if (ia == col.assignment.end()) continue;
            for (std::size_t b = a + 1; b < members.size(); ++b) {
                auto ib = col.assignment.find(members[b]);
                if (ib == col.assignment.end()) continue;
                if (ia->second == ib->second)
                    out.push_back({ViolationKind::SameColorInClique, static_cast<int>(c) + 1,
                                   {members[a], members[b]}});
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Chromatic number oracle

struct ChromaticResult {
    bool cap_exceeded = false;
    int value = 0;  // chi when computed, the cap when exceeded

    bool operator==(const ChromaticResult&) const = default;
};

namespace detail {

// Backtracking k-colorability over an adjacency matrix.  `order` lists the
// vertices still to color; assigned colors live in `color` (0 = none).
inline bool k_colorable(const std::vector<std::vector<char>>& adj, std::vector<int>& color,
                        const std::vector<int>& order, std::size_t pos, int k) {
    if (pos == order.size()) return true;
    const int v = order[pos];
    std::vector<char> banned(static_cast<std::size_t>(k) + 1, 0);
    for (std::size_t u = 0; u < adj.size(); ++u)
        if (adj[v][u] && color[u] > 0 && color[u] <= k) banned[color[u]] = 1;
    int fresh_tried = 0;
    for (int c = 1; c <= k; ++c) {
        if (banned[c]) continue;
        // Unused colors are interchangeable: trying one of them is enough.
        bool fresh = std::find(color.begin(), color.end(), c) == color.end();
        if (fresh && ++fresh_tried > 1) continue;
        color[v] = c;
        if (k_colorable(adj, color, order, pos + 1, k)) return true;
        color[v] = 0;
    }
    return false;
}

}  // namespace detail

// Exact chromatic number of the clique-union graph, by plain backtracking
// seeded with one fully colored clique.  Instances above the vertex cap get
// an explicit cap-exceeded result, never an estimate.
inline ChromaticResult chromatic_number(const EflInstance& inst, int vertex_cap = 20) {
    const auto verts = vertices_of(inst);
    const int total = static_cast<int>(verts.size());
    if (total > vertex_cap) return {true, vertex_cap};
    if (total == 0) return {false, 0};

    std::map<VertexId, int> id;
    for (int i = 0; i < total; ++i) id[verts[static_cast<std::size_t>(i)]] = i;

    std::vector<std::vector<char>> adj(static_cast<std::size_t>(total),
                                       std::vector<char>(static_cast<std::size_t>(total), 0));
    std::vector<int> degree(static_cast<std::size_t>(total), 0);
    for (const auto& clique : inst.cliques) {
        auto members = clique;
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        for (const auto& v : members) ++degree[static_cast<std::size_t>(id[v])];
        for (std::size_t a = 0; a < members.size(); ++a)
            for (std::size_t b = a + 1; b < members.size(); ++b) {
                adj[static_cast<std::size_t>(id[members[a]])][static_cast<std::size_t>(id[members[b]])] = 1;
                adj[static_cast<std::size_t>(id[members[b]])][static_cast<std::size_t>(id[members[a]])] = 1;
            }
    }

    // Seed: the first largest clique gets colors 1..size, which is sound
    // because any proper coloring can be permuted to match.
    std::size_t seed_clique = 0;
    std::size_t seed_size = 0;
    for (std::size_t c = 0; c < inst.cliques.size(); ++c) {
        auto members = inst.cliques[c];
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        if (members.size() > seed_size) { seed_size = members.size(); seed_clique = c; }
    }

    std::vector<int> seed_colors(static_cast<std::size_t>(total), 0);
    int next = 0;
    if (!inst.cliques.empty()) {
        auto members = inst.cliques[seed_clique];
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        for (const auto& v : members) seed_colors[static_cast<std::size_t>(id[v])] = ++next;
    }

    std::vector<int> order;  // uncolored vertices, clique degree descending, token ties
    for (int i = 0; i < total; ++i)
        if (seed_colors[static_cast<std::size_t>(i)] == 0) order.push_back(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return degree[static_cast<std::size_t>(a)] > degree[static_cast<std::size_t>(b)];
    });

    const int lower = static_cast<int>(seed_size);  // a clique this large needs that many colors
    for (int k = std::max(lower, 1); k <= total; ++k) {
        std::vector<int> color = seed_colors;
        if (detail::k_colorable(adj, color, order, 0, k)) return {false, k};
    }
    return {false, total};
}

inline std::string chromatic_line(const ChromaticResult& r) {
    if (r.cap_exceeded) return "CHI CAP-EXCEEDED " + std::to_string(r.value);
    return "CHI " + std::to_string(r.value);
}

// ---------------------------------------------------------------------------
// Canonical signature: order plus the sorted label multiset.  Instances that
// differ only in vertex names get equal signatures.

inline std::string canonical_signature(const EflInstance& inst) {
    const LabelSystem sys = system_of(inst);
    std::string s = "SIG n=" + std::to_string(sys.n);
    for (const auto& label : sys.labels) s += ' ' + label.to_string();
    return s;
}

}  // namespace efl

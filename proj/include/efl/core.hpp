#pragma once

// Instance model for EFL clique systems: n complete graphs ("cliques") on n
// vertices each, any two of them sharing at most one vertex.  Vertex identity
// is the string token; a vertex shared by several cliques appears in each of
// them under the same token.  Clique indices are 1-based everywhere, including
// the text format and the CLI.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace efl {

namespace detail {

inline constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;
inline constexpr std::uint64_t kFnvPrime = 1099511628211ull;

inline std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = kFnvOffset) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= kFnvPrime;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return s;
}

}  // namespace detail

// Vertex identifier: nonempty, visible ASCII, no whitespace.  All tie-breaking
// in this library is by the lexicographic order of tokens.
struct VertexId {
    std::string token;

    VertexId() = default;
    VertexId(std::string t) : token(std::move(t)) {}
    VertexId(const char* t) : token(t) {}

    auto operator<=>(const VertexId&) const = default;
};

inline bool valid_token(const std::string& t) {
    if (t.empty()) return false;
    for (unsigned char c : t)
        if (c < 0x21 || c > 0x7e) return false;
    return true;
}

// Unordered clique-index pair, stored with first < second.
using CliquePair = std::pair<int, int>;

inline CliquePair ordered_pair(int i, int j) {
    return i < j ? CliquePair{i, j} : CliquePair{j, i};
}

// The set of clique indices containing one shared vertex.  Strictly
// increasing, at least two entries when it labels a common vertex.
struct LabelSet {
    std::vector<int> indices;

    LabelSet() = default;
    explicit LabelSet(std::vector<int> idx) : indices(std::move(idx)) {}
    LabelSet(std::initializer_list<int> idx) : indices(idx) {}

    int size() const { return static_cast<int>(indices.size()); }

    bool contains(int i) const {
        return std::binary_search(indices.begin(), indices.end(), i);
    }

    // Strictly increasing, length >= 2, every index in 1..n.
    bool well_formed(int n) const {
        if (indices.size() < 2) return false;
        for (std::size_t k = 0; k < indices.size(); ++k) {
            if (indices[k] < 1 || indices[k] > n) return false;
            if (k > 0 && indices[k] <= indices[k - 1]) return false;
        }
        return true;
    }

    // All index pairs {i,j} inside the label, lexicographically ordered.
    std::vector<CliquePair> pairs() const {
        std::vector<CliquePair> out;
        for (std::size_t a = 0; a < indices.size(); ++a)
            for (std::size_t b = a + 1; b < indices.size(); ++b)
                out.emplace_back(indices[a], indices[b]);
        return out;
    }

    std::string to_string() const {
        std::string s = "{";
        for (std::size_t k = 0; k < indices.size(); ++k) {
            if (k) s += ',';
            s += std::to_string(indices[k]);
        }
        s += '}';
        return s;
    }

    auto operator<=>(const LabelSet&) const = default;
};

inline int intersection_size(const LabelSet& a, const LabelSet& b) {
    int count = 0;
    auto ia = a.indices.begin(), ib = b.indices.begin();
    while (ia != a.indices.end() && ib != b.indices.end()) {
        if (*ia < *ib) ++ia;
        else if (*ib < *ia) ++ib;
        else { ++count; ++ia; ++ib; }
    }
    return count;
}

// A candidate instance: n cliques listed in index order.  Construction does
// not enforce the invariants; validate() reports every violation as data.
struct EflInstance {
    int n = 0;
    std::vector<std::vector<VertexId>> cliques;  // cliques[i-1] is clique i

    bool operator==(const EflInstance&) const = default;
};

// All distinct vertex tokens, sorted.
inline std::vector<VertexId> vertices_of(const EflInstance& inst) {
    std::vector<VertexId> all;
    for (const auto& c : inst.cliques) all.insert(all.end(), c.begin(), c.end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return all;
}

// ---------------------------------------------------------------------------
// Validation

enum class Rule {
    BadOrder,          // n < 1
    CliqueCount,       // number of cliques != n
    CliqueSize,        // clique has != n tokens
    DuplicateVertex,   // token repeated inside one clique
    BadToken,          // token not a valid identifier
    PairIntersection,  // two cliques share >= 2 vertices
    VertexBound,       // more than n^2 distinct vertices
};

inline std::string_view rule_name(Rule r) {
    switch (r) {
        case Rule::BadOrder: return "bad-order";
        case Rule::CliqueCount: return "clique-count";
        case Rule::CliqueSize: return "clique-size";
        case Rule::DuplicateVertex: return "duplicate-vertex";
        case Rule::BadToken: return "bad-token";
        case Rule::PairIntersection: return "pair-intersection";
        case Rule::VertexBound: return "vertex-bound";
    }
    return "?";
}

struct ValidationIssue {
    Rule rule;
    std::vector<int> cliques;      // offending clique indices
    std::vector<VertexId> vertices;  // offending vertices, if any
    std::string message;
};

// Empty result iff the instance satisfies every structural invariant.
inline std::vector<ValidationIssue> validate(const EflInstance& inst) {
    std::vector<ValidationIssue> issues;
    auto add = [&](Rule r, std::vector<int> cl, std::vector<VertexId> vs, std::string msg) {
        issues.push_back({r, std::move(cl), std::move(vs), std::move(msg)});
    };

    if (inst.n < 1) {
        add(Rule::BadOrder, {}, {}, "order n must be positive, got " + std::to_string(inst.n));
        return issues;
    }
    if (static_cast<int>(inst.cliques.size()) != inst.n)
        add(Rule::CliqueCount, {}, {},
            "expected " + std::to_string(inst.n) + " cliques, got " +
                std::to_string(inst.cliques.size()));

    std::vector<std::vector<VertexId>> sorted(inst.cliques.size());
    for (std::size_t c = 0; c < inst.cliques.size(); ++c) {
        const int idx = static_cast<int>(c) + 1;
        const auto& clique = inst.cliques[c];
        for (const auto& v : clique)
            if (!valid_token(v.token))
                add(Rule::BadToken, {idx}, {v},
                    "clique " + std::to_string(idx) + " holds an invalid token");
        if (static_cast<int>(clique.size()) != inst.n)
            add(Rule::CliqueSize, {idx}, {},
                "clique " + std::to_string(idx) + " has " + std::to_string(clique.size()) +
                    " vertices, expected " + std::to_string(inst.n));
        auto s = clique;
        std::sort(s.begin(), s.end());
        for (std::size_t k = 1; k < s.size(); ++k)
            if (s[k] == s[k - 1] && (k == 1 || s[k] != s[k - 2]))
                add(Rule::DuplicateVertex, {idx}, {s[k]},
                    "clique " + std::to_string(idx) + " repeats vertex " + s[k].token);
        s.erase(std::unique(s.begin(), s.end()), s.end());
        sorted[c] = std::move(s);
    }

    std::vector<VertexId> shared;
    for (std::size_t a = 0; a < sorted.size(); ++a) {
        for (std::size_t b = a + 1; b < sorted.size(); ++b) {
            shared.clear();
            std::set_intersection(sorted[a].begin(), sorted[a].end(), sorted[b].begin(),
                                  sorted[b].end(), std::back_inserter(shared));
            if (shared.size() > 1) {
                std::string msg = "cliques " + std::to_string(a + 1) + " and " +
                                  std::to_string(b + 1) + " share " +
                                  std::to_string(shared.size()) + " vertices:";
                for (const auto& v : shared) msg += " " + v.token;
                add(Rule::PairIntersection, {static_cast<int>(a) + 1, static_cast<int>(b) + 1},
                    shared, std::move(msg));
            }
        }
    }

    const auto total = vertices_of(inst).size();
    if (total > static_cast<std::size_t>(inst.n) * static_cast<std::size_t>(inst.n))
        add(Rule::VertexBound, {}, {},
            std::to_string(total) + " distinct vertices exceed n^2 = " +
                std::to_string(inst.n * inst.n));
    return issues;
}

// ---------------------------------------------------------------------------
// Clique degrees and labels

// Number of cliques containing v.  Unknown vertices are a lookup failure.
inline int clique_degree(const EflInstance& inst, const VertexId& v) {
    int deg = 0;
    for (const auto& clique : inst.cliques)
        if (std::find(clique.begin(), clique.end(), v) != clique.end()) ++deg;
    if (deg == 0) throw std::out_of_range("unknown vertex: " + v.token);
    return deg;
}

// Map from every vertex of clique degree >= 2 to the set of cliques holding it.
inline std::map<VertexId, LabelSet> common_vertex_labels(const EflInstance& inst) {
    std::map<VertexId, std::vector<int>> memberships;
    for (std::size_t c = 0; c < inst.cliques.size(); ++c)
        for (const auto& v : inst.cliques[c])
            memberships[v].push_back(static_cast<int>(c) + 1);
    std::map<VertexId, LabelSet> labels;
    for (auto& [v, idx] : memberships)
        if (idx.size() >= 2) labels.emplace(v, LabelSet{std::move(idx)});
    return labels;
}

// ---------------------------------------------------------------------------
// Derived sets consumed by the coloring engine

struct DerivedSets {
    int n = 0;
    std::vector<CliquePair> empty_pairs;                  // pairs with disjoint cliques
    std::map<int, std::vector<VertexId>> by_degree;       // degree -> vertices, sorted
    std::map<int, std::vector<LabelSet>> labels_by_size;  // size -> label sets, sorted
};

inline DerivedSets derived_sets(const EflInstance& inst) {
    DerivedSets out;
    out.n = inst.n;

    std::map<VertexId, std::vector<int>> memberships;
    for (std::size_t c = 0; c < inst.cliques.size(); ++c)
        for (const auto& v : inst.cliques[c])
            memberships[v].push_back(static_cast<int>(c) + 1);

    std::vector<CliquePair> covered;
    for (const auto& [v, idx] : memberships) {
        out.by_degree[static_cast<int>(idx.size())].push_back(v);
        if (idx.size() >= 2) {
            LabelSet label{idx};
            for (auto pr : label.pairs()) covered.push_back(pr);
            out.labels_by_size[label.size()].push_back(std::move(label));
        }
    }
    for (auto& [size, labels] : out.labels_by_size) std::sort(labels.begin(), labels.end());
    std::sort(covered.begin(), covered.end());

    for (int i = 1; i <= inst.n; ++i)
        for (int j = i + 1; j <= inst.n; ++j)
            if (!std::binary_search(covered.begin(), covered.end(), CliquePair{i, j}))
                out.empty_pairs.emplace_back(i, j);
    return out;
}

// ---------------------------------------------------------------------------
// Coloring value (assignments are 1-based colors)

struct Coloring {
    std::map<VertexId, int> assignment;

    bool operator==(const Coloring&) const = default;
};

// ---------------------------------------------------------------------------
// Text format
//
//   EFL 1
//   n <n>
//   clique <i>: <tok> <tok> ... <tok>     (exactly n tokens, i ascending from 1)

struct ParseError : std::runtime_error {
    int line;
    ParseError(int line_no, const std::string& what)
        : std::runtime_error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
};

namespace detail {

// Splits on single spaces; empty fields (leading, trailing, doubled spaces)
// are format errors.
inline std::vector<std::string> split_fields(const std::string& line, int line_no) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(' ', start);
        std::string field = line.substr(start, pos == std::string::npos ? pos : pos - start);
        if (field.empty()) throw ParseError(line_no, "malformed spacing");
        out.push_back(std::move(field));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

inline int parse_int(const std::string& s, int line_no, const char* what) {
    if (s.empty() || s.size() > 9) throw ParseError(line_no, std::string("bad ") + what);
    for (char c : s)
        if (c < '0' || c > '9') throw ParseError(line_no, std::string("bad ") + what);
    return std::stoi(s);
}

inline bool next_line(std::istream& in, std::string& line, int& line_no) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    ++line_no;
    return true;
}

inline void expect_eof(std::istream& in, int line_no) {
    std::string extra;
    if (std::getline(in, extra)) throw ParseError(line_no + 1, "trailing garbage");
}

}  // namespace detail

inline EflInstance parse_instance(std::istream& in) {
    std::string line;
    int line_no = 0;
    if (!detail::next_line(in, line, line_no) || line != "EFL 1")
        throw ParseError(1, "expected header 'EFL 1'");
    if (!detail::next_line(in, line, line_no)) throw ParseError(2, "expected 'n <n>'");
    auto fields = detail::split_fields(line, line_no);
    if (fields.size() != 2 || fields[0] != "n") throw ParseError(line_no, "expected 'n <n>'");
    EflInstance inst;
    inst.n = detail::parse_int(fields[1], line_no, "order");
    if (inst.n < 1) throw ParseError(line_no, "order must be positive");

    for (int i = 1; i <= inst.n; ++i) {
        if (!detail::next_line(in, line, line_no))
            throw ParseError(line_no + 1, "expected clique " + std::to_string(i));
        fields = detail::split_fields(line, line_no);
        if (fields.size() < 2 || fields[0] != "clique")
            throw ParseError(line_no, "expected 'clique <i>: ...'");
        std::string idx = fields[1];
        if (idx.empty() || idx.back() != ':') throw ParseError(line_no, "missing ':'");
        idx.pop_back();
        if (detail::parse_int(idx, line_no, "clique index") != i)
            throw ParseError(line_no, "clique index out of order, expected " + std::to_string(i));
        if (static_cast<int>(fields.size()) - 2 != inst.n)
            throw ParseError(line_no, "expected " + std::to_string(inst.n) + " tokens, got " +
                                          std::to_string(fields.size() - 2));
        std::vector<VertexId> clique;
        for (std::size_t k = 2; k < fields.size(); ++k) {
            if (!valid_token(fields[k])) throw ParseError(line_no, "invalid token " + fields[k]);
            clique.emplace_back(fields[k]);
        }
        inst.cliques.push_back(std::move(clique));
    }
    detail::expect_eof(in, line_no);
    return inst;
}

inline void write_instance(const EflInstance& inst, std::ostream& out) {
    out << "EFL 1\n" << "n " << inst.n << "\n";
    for (std::size_t c = 0; c < inst.cliques.size(); ++c) {
        out << "clique " << c + 1 << ":";
        for (const auto& v : inst.cliques[c]) out << ' ' << v.token;
        out << '\n';
    }
}

inline EflInstance parse_instance(const std::string& text) {
    std::istringstream in(text);
    return parse_instance(in);
}

inline std::string instance_text(const EflInstance& inst) {
    std::ostringstream out;
    write_instance(inst, out);
    return out.str();
}

}  // namespace efl

#pragma once

// Instance construction: the canonical minimum instance built by repeated
// vertex merging, realization of arbitrary instances from label systems, and
// the random / exhaustive instance families used by the hunt.

#include <random>

#include "efl/core.hpp"

namespace efl {

// A collection of distinct label sets (sizes >= 2) describing which clique
// groups share a vertex.  Determines an instance up to renaming: each label
// becomes one shared vertex, cliques are padded to size n with private ones.
struct LabelSystem {
    int n = 0;
    std::vector<LabelSet> labels;  // kept sorted and distinct in canonical form

    bool operator==(const LabelSystem&) const = default;
};

enum class SystemRule {
    BadOrder,          // n < 1
    LabelTooSmall,     // fewer than 2 indices
    BadIndex,          // index outside 1..n or not strictly increasing
    DuplicateLabel,    // same label listed twice
    OverlappingLabels, // two labels share >= 2 indices
    OverCapacity,      // an index appears in more than n labels
};

struct SystemIssue {
    SystemRule rule;
    LabelSet first;   // offending label(s); second empty unless two are involved
    LabelSet second;
    int index = 0;    // offending clique index for capacity issues
    std::string message;
};

inline std::vector<SystemIssue> check_label_system(const LabelSystem& sys) {
    std::vector<SystemIssue> issues;
    if (sys.n < 1) {
        issues.push_back({SystemRule::BadOrder, {}, {}, 0,
                          "order n must be positive, got " + std::to_string(sys.n)});
        return issues;
    }
    for (const auto& label : sys.labels) {
        if (label.size() < 2)
            issues.push_back({SystemRule::LabelTooSmall, label, {}, 0,
                              "label " + label.to_string() + " needs at least 2 indices"});
        else if (!label.well_formed(sys.n))
            issues.push_back({SystemRule::BadIndex, label, {}, 0,
                              "label " + label.to_string() + " has indices outside 1.." +
                                  std::to_string(sys.n) + " or out of order"});
    }
    for (std::size_t a = 0; a < sys.labels.size(); ++a) {
        for (std::size_t b = a + 1; b < sys.labels.size(); ++b) {
            if (sys.labels[a] == sys.labels[b]) {
                issues.push_back({SystemRule::DuplicateLabel, sys.labels[a], sys.labels[b], 0,
                                  "label " + sys.labels[a].to_string() + " listed twice"});
            } else if (intersection_size(sys.labels[a], sys.labels[b]) > 1) {
                issues.push_back({SystemRule::OverlappingLabels, sys.labels[a], sys.labels[b], 0,
                                  "labels " + sys.labels[a].to_string() + " and " +
                                      sys.labels[b].to_string() + " share 2 or more indices"});
            }
        }
    }
    for (int i = 1; i <= sys.n; ++i) {
        int uses = 0;
        for (const auto& label : sys.labels)
            if (label.contains(i)) ++uses;
        if (uses > sys.n)
            issues.push_back({SystemRule::OverCapacity, {}, {}, i,
                              "clique " + std::to_string(i) + " appears in " +
                                  std::to_string(uses) + " labels, capacity is " +
                                  std::to_string(sys.n)});
    }
    return issues;
}

struct InvalidLabelSystem : std::invalid_argument {
    std::vector<SystemIssue> issues;
    explicit InvalidLabelSystem(std::vector<SystemIssue> is)
        : std::invalid_argument(is.empty() ? "invalid label system" : is.front().message),
          issues(std::move(is)) {}
};

// Sorted, deduplicated copy.
inline LabelSystem canonical(LabelSystem sys) {
    std::sort(sys.labels.begin(), sys.labels.end());
    sys.labels.erase(std::unique(sys.labels.begin(), sys.labels.end()), sys.labels.end());
    return sys;
}

// ---------------------------------------------------------------------------
// The canonical minimum instance: every pair of cliques shares exactly one
// vertex b_i_j, and each clique keeps one private vertex a_i_i.

inline EflInstance build_hn(int n) {
    if (n < 1) throw std::invalid_argument("order must be positive");
    EflInstance inst;
    inst.n = n;
    inst.cliques.resize(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        auto& clique = inst.cliques[static_cast<std::size_t>(i - 1)];
        clique.emplace_back("a_" + std::to_string(i) + "_" + std::to_string(i));
        for (int j = 1; j <= n; ++j) {
            if (j == i) continue;
            auto [lo, hi] = ordered_pair(i, j);
            clique.emplace_back("b_" + std::to_string(lo) + "_" + std::to_string(hi));
        }
        std::sort(clique.begin(), clique.end());
    }
    return inst;
}

// ---------------------------------------------------------------------------
// Realization: label system -> instance.  Each label x yields one shared
// vertex u_<x>; cliques are padded to size n with fresh vertices p_<i>_<k>.

inline EflInstance realize(const LabelSystem& sys) {
    auto issues = check_label_system(sys);
    if (!issues.empty()) throw InvalidLabelSystem(std::move(issues));

    const LabelSystem canon = canonical(sys);
    EflInstance inst;
    inst.n = canon.n;
    inst.cliques.resize(static_cast<std::size_t>(canon.n));
    for (const auto& label : canon.labels) {
        std::string token = "u";
        for (int i : label.indices) token += "_" + std::to_string(i);
        for (int i : label.indices)
            inst.cliques[static_cast<std::size_t>(i - 1)].emplace_back(token);
    }
    for (int i = 1; i <= canon.n; ++i) {
        auto& clique = inst.cliques[static_cast<std::size_t>(i - 1)];
        int k = 0;
        while (static_cast<int>(clique.size()) < canon.n)
            clique.emplace_back("p_" + std::to_string(i) + "_" + std::to_string(++k));
        std::sort(clique.begin(), clique.end());
    }
    return inst;
}

// Inverse of realize up to vertex renaming: collects the label sets of all
// vertices of clique degree >= 2.
inline LabelSystem system_of(const EflInstance& inst) {
    LabelSystem sys;
    sys.n = inst.n;
    for (const auto& [v, label] : common_vertex_labels(inst)) sys.labels.push_back(label);
    return canonical(std::move(sys));
}

// ---------------------------------------------------------------------------
// Random systems.  Deterministic function of (n, p, q, seed): p activates
// index pairs, q greedily merges an active pair into the first compatible
// existing label.  Engine output is mapped to [0,1) directly so the sequence
// depends only on the mt19937_64 stream, not on library distributions.

namespace detail {

inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// True when growing `target` (at position t) by the extra index of `pr`
// keeps the whole collection valid.
inline bool can_grow(const std::vector<LabelSet>& labels, std::size_t t, const LabelSet& grown,
                     int added_index, int n) {
    if (grown.size() > n) return false;
    for (std::size_t k = 0; k < labels.size(); ++k) {
        if (k == t) continue;
        if (intersection_size(grown, labels[k]) > 1) return false;
    }
    int uses = 1;  // the grown label itself
    for (std::size_t k = 0; k < labels.size(); ++k)
        if (k != t && labels[k].contains(added_index)) ++uses;
    return uses <= n;
}

}  // namespace detail

inline LabelSystem random_system(int n, double p, double q, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("order must be positive");
    std::mt19937_64 rng(seed);
    std::vector<CliquePair> active;
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            if (detail::uniform01(rng) < p) active.emplace_back(i, j);

    std::vector<LabelSet> labels;
    for (auto [i, j] : active) {
        const LabelSet pr{i, j};
        bool covered = false;
        for (const auto& l : labels)
            if (intersection_size(l, pr) == 2) { covered = true; break; }
        if (covered) continue;

        bool merged = false;
        if (q > 0.0) {
            for (std::size_t t = 0; t < labels.size(); ++t) {
                if (intersection_size(labels[t], pr) != 1) continue;
                int added = labels[t].contains(i) ? j : i;
                LabelSet grown = labels[t];
                grown.indices.insert(
                    std::lower_bound(grown.indices.begin(), grown.indices.end(), added), added);
                if (!detail::can_grow(labels, t, grown, added, n)) continue;
                if (detail::uniform01(rng) < q) {
                    labels[t] = std::move(grown);
                    merged = true;
                }
                break;  // only the first viable host is ever offered the merge
            }
        }
        if (!merged) labels.push_back(pr);
    }
    LabelSystem sys{n, std::move(labels)};
    return canonical(std::move(sys));
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration.  Yields every valid system of order n exactly once,
// in lexicographic order of the sorted label lists.  The default cap keeps
// the stream at desk scale; larger n is opt-in.

inline constexpr int kEnumerationCap = 4;

namespace detail {

inline std::vector<LabelSet> candidate_labels(int n) {
    // All subsets of 1..n with >= 2 elements, in lexicographic label order.
    std::vector<LabelSet> out;
    std::vector<int> subset;
    // Generate by DFS so the output is sorted: extend with every larger index.
    auto rec = [&](auto&& self, int next) -> void {
        if (subset.size() >= 2) out.push_back(LabelSet{subset});
        for (int i = next; i <= n; ++i) {
            subset.push_back(i);
            self(self, i + 1);
            subset.pop_back();
        }
    };
    rec(rec, 1);
    std::sort(out.begin(), out.end());
    return out;
}

inline bool compatible(const std::vector<LabelSet>& chosen, const LabelSet& next, int n) {
    for (const auto& l : chosen)
        if (intersection_size(l, next) > 1) return false;
    for (int i : next.indices) {
        int uses = 1;
        for (const auto& l : chosen)
            if (l.contains(i)) ++uses;
        if (uses > n) return false;
    }
    return true;
}

}  // namespace detail

template <class Yield>
void enumerate_systems(int n, Yield&& yield, int n_cap = kEnumerationCap) {
    if (n < 1) throw std::invalid_argument("order must be positive");
    if (n > n_cap)
        throw std::invalid_argument("enumeration order " + std::to_string(n) +
                                    " exceeds cap " + std::to_string(n_cap));
    const auto candidates = detail::candidate_labels(n);
    std::vector<LabelSet> chosen;
    auto rec = [&](auto&& self, std::size_t next) -> void {
        yield(LabelSystem{n, chosen});
        for (std::size_t k = next; k < candidates.size(); ++k) {
            if (!detail::compatible(chosen, candidates[k], n)) continue;
            chosen.push_back(candidates[k]);
            self(self, k + 1);
            chosen.pop_back();
        }
    };
    rec(rec, 0);
}

inline std::vector<LabelSystem> all_systems(int n, int n_cap = kEnumerationCap) {
    std::vector<LabelSystem> out;
    enumerate_systems(n, [&](const LabelSystem& s) { out.push_back(s); }, n_cap);
    return out;
}

// ---------------------------------------------------------------------------
// Text format: "SYS <n>" then one "label: i j ..." line per label.

inline void write_system(const LabelSystem& sys, std::ostream& out) {
    out << "SYS " << sys.n << '\n';
    for (const auto& label : sys.labels) {
        out << "label:";
        for (int i : label.indices) out << ' ' << i;
        out << '\n';
    }
}

inline LabelSystem parse_system(std::istream& in) {
    std::string line;
    int line_no = 0;
    if (!detail::next_line(in, line, line_no)) throw ParseError(1, "expected 'SYS <n>'");
    auto fields = detail::split_fields(line, line_no);
    if (fields.size() != 2 || fields[0] != "SYS") throw ParseError(line_no, "expected 'SYS <n>'");
    LabelSystem sys;
    sys.n = detail::parse_int(fields[1], line_no, "order");
    if (sys.n < 1) throw ParseError(line_no, "order must be positive");
    while (detail::next_line(in, line, line_no)) {
        fields = detail::split_fields(line, line_no);
        if (fields.size() < 3 || fields[0] != "label:")
            throw ParseError(line_no, "expected 'label: i j ...'");
        std::vector<int> idx;
        for (std::size_t k = 1; k < fields.size(); ++k)
            idx.push_back(detail::parse_int(fields[k], line_no, "index"));
        for (std::size_t k = 1; k < idx.size(); ++k)
            if (idx[k] <= idx[k - 1]) throw ParseError(line_no, "indices must increase");
        if (idx.front() < 1 || idx.back() > sys.n) throw ParseError(line_no, "index out of range");
        sys.labels.push_back(LabelSet{std::move(idx)});
    }
    return sys;
}

}  // namespace efl

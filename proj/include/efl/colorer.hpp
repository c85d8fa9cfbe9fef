#pragma once

// The coloring engine: a direct n-coloring of the canonical instance from the
// cyclic symmetric latin square, and the color-matrix modification procedure
// that adapts the square to an arbitrary instance.  Every run ends in a
// verified coloring or a structured failure witness; an audit trace records
// each matrix edit so runs can be replayed bit-exactly.

#include "efl/builder.hpp"
#include "efl/core.hpp"
#include "efl/latin.hpp"
#include "efl/verifier.hpp"

namespace efl {

// ---------------------------------------------------------------------------
// Trace

enum class StepKind { S1Select, S2Repair, S3Pick, S4Swap, S5Select2, S6Repair2, Extend };

inline std::string_view step_name(StepKind s) {
    switch (s) {
        case StepKind::S1Select: return "S1-select";
        case StepKind::S2Repair: return "S2-repair";
        case StepKind::S3Pick: return "S3-pick";
        case StepKind::S4Swap: return "S4-swap";
        case StepKind::S5Select2: return "S5-select2";
        case StepKind::S6Repair2: return "S6-repair2";
        case StepKind::Extend: return "extend";
    }
    return "?";
}

inline std::optional<StepKind> step_from_name(std::string_view name) {
    for (StepKind s : {StepKind::S1Select, StepKind::S2Repair, StepKind::S3Pick, StepKind::S4Swap,
                       StepKind::S5Select2, StepKind::S6Repair2, StepKind::Extend})
        if (step_name(s) == name) return s;
    return std::nullopt;
}

// One audit record per worklist move or matrix edit.  Selection bookkeeping is
// folded into the move events so the trace length stays within the structural
// bound checked by the tests.
struct TraceEvent {
    int seq = 0;
    StepKind step;
    std::string detail;      // semicolon-separated fields, no spaces
    std::uint64_t digest = 0;  // matrix digest after the event

    bool operator==(const TraceEvent&) const = default;
};

inline void write_trace(const std::vector<TraceEvent>& trace, std::ostream& out) {
    for (const auto& e : trace)
        out << e.seq << ' ' << step_name(e.step) << ' ' << e.detail << ' '
            << detail::hex64(e.digest) << '\n';
}

inline std::vector<TraceEvent> parse_trace(std::istream& in) {
    std::vector<TraceEvent> trace;
    std::string line;
    int line_no = 0;
    while (detail::next_line(in, line, line_no)) {
        if (line.rfind("OUTCOME", 0) == 0) break;  // witness files append an outcome line
        auto fields = detail::split_fields(line, line_no);
        if (fields.size() != 4) throw ParseError(line_no, "expected '<seq> <step> <detail> <digest>'");
        TraceEvent e;
        e.seq = detail::parse_int(fields[0], line_no, "sequence number");
        auto step = step_from_name(fields[1]);
        if (!step) throw ParseError(line_no, "unknown step " + fields[1]);
        e.step = *step;
        e.detail = fields[2];
        if (fields[3].size() != 16) throw ParseError(line_no, "bad digest");
        e.digest = 0;
        for (char c : fields[3]) {
            int d = c >= '0' && c <= '9' ? c - '0' : c >= 'a' && c <= 'f' ? c - 'a' + 10 : -1;
            if (d < 0) throw ParseError(line_no, "bad digest");
            e.digest = e.digest << 4 | static_cast<std::uint64_t>(d);
        }
        trace.push_back(std::move(e));
    }
    return trace;
}

// ---------------------------------------------------------------------------
// Outcomes

// A label whose matrix cells disagree; lists every pair with its cell value.
struct LabelInconsistency {
    LabelSet label;
    std::vector<std::pair<CliquePair, int>> cell_values;

    bool operator==(const LabelInconsistency&) const = default;
};

enum class OutcomeKind { Success, Stuck, Improper };

struct ColoringOutcome {
    OutcomeKind kind = OutcomeKind::Success;
    Coloring coloring;  // total on success, best effort on improper, empty when stuck
    StepKind stuck_step = StepKind::Extend;
    std::string stuck_context;
    std::vector<Violation> violations;               // improper: independent re-check
    std::vector<LabelInconsistency> inconsistencies; // improper: disagreeing label cells
    std::vector<TraceEvent> trace;
    ColorMatrix matrix;  // final state (the modified matrix, or the state when stuck)

    bool success() const { return kind == OutcomeKind::Success; }
};

// ---------------------------------------------------------------------------
// Direct coloring of the canonical instance: vertex b_i_j reads cell (i,j) of
// the cyclic square, the private vertex a_i_i reads the diagonal.  Row i is a
// permutation, so every clique sees n distinct colors.

inline Coloring color_hn(int n) {
    const SymmetricLatinSquare sq = cyclic_symmetric_latin(n);
    Coloring col;
    for (int i = 1; i <= n; ++i) {
        col.assignment[VertexId("a_" + std::to_string(i) + "_" + std::to_string(i))] = sq.at(i, i);
        for (int j = i + 1; j <= n; ++j)
            col.assignment[VertexId("b_" + std::to_string(i) + "_" + std::to_string(j))] =
                sq.at(i, j);
    }
    return col;
}

// ---------------------------------------------------------------------------
// Repair of one duplicated cell (i,j).  First branch: smallest color absent
// from row i and column j.  Second branch: smallest color occurring exactly
// once in row i or exactly once in column j.  Absence of both is a value, not
// an error; the caller maps it to a stuck outcome.

struct Step2Result {
    ColorMatrix matrix;
    int color = 0;
    bool fresh_branch = false;            // first branch taken
    bool literal_guard_diverges = false;  // row/column colors overlap in fewer than n
                                          // values even though their union covers all n
};

inline std::optional<Step2Result> step2_repair(const ColorMatrix& m, int i, int j) {
    if (i == j) throw std::invalid_argument("diagonal cells are never repaired");
    if (m.at(i, j) == 0) throw std::invalid_argument("cell is blanked");
    if (auto fresh = fresh_color(m, i, j))
        return Step2Result{replace_pair(m, i, j, *fresh), *fresh, true, false};

    // Union covers every color; note when the row/column intersection is still
    // small, since a guard reading based on it would pick the dead branch.
    std::vector<char> in_row(static_cast<std::size_t>(m.order) + 1, 0);
    std::vector<char> in_col(static_cast<std::size_t>(m.order) + 1, 0);
    for (int k = 1; k <= m.order; ++k) {
        in_row[m.at(i, k)] = 1;
        in_col[m.at(k, j)] = 1;
    }
    int both = 0;
    for (int x = 1; x <= m.order; ++x)
        if (in_row[x] && in_col[x]) ++both;
    const bool diverges = both < m.order;

    for (int x = 1; x <= m.order; ++x)
        if (occupancy(m, Line::Row, i, x) == 1 || occupancy(m, Line::Column, j, x) == 1)
            return Step2Result{replace_pair(m, i, j, x), x, false, diverges};
    return std::nullopt;
}

// Aligns the target cell's color to the anchor cell's color by a global swap
// that leaves protected cells untouched.  Equal colors are an identity.
inline ColorMatrix step4_align(const ColorMatrix& m, CliquePair anchor, CliquePair target,
                               const std::vector<CliquePair>& protected_pairs) {
    const int y = m.at(anchor.first, anchor.second);
    const int x = m.at(target.first, target.second);
    if (x == 0 || y == 0) throw std::invalid_argument("align needs nonzero cells");
    if (x == y) return m;
    return swap_colors(m, x, y, protected_pairs);
}

// ---------------------------------------------------------------------------
// Extension to a total coloring

// Labels whose matrix cells disagree, in vertex order.
inline std::vector<LabelInconsistency> label_inconsistencies(
    const ColorMatrix& m, const std::map<VertexId, LabelSet>& labels) {
    std::vector<LabelInconsistency> out;
    for (const auto& [v, label] : labels) {
        LabelInconsistency row{label, {}};
        bool consistent = true;
        for (auto pr : label.pairs()) {
            int value = m.at(pr.first, pr.second);
            if (!row.cell_values.empty() && value != row.cell_values.front().second)
                consistent = false;
            row.cell_values.emplace_back(pr, value);
        }
        if (!consistent) out.push_back(std::move(row));
    }
    return out;
}

namespace detail {

// Total assignment: every common vertex reads the cell of its first index
// pair; each clique's private vertices take the unused colors in increasing
// order, vertices in token order.
inline Coloring extend_first_pair(const EflInstance& inst, const ColorMatrix& m,
                                  const std::map<VertexId, LabelSet>& labels) {
    Coloring col;
    for (const auto& [v, label] : labels)
        col.assignment[v] = m.at(label.indices[0], label.indices[1]);
    for (std::size_t c = 0; c < inst.cliques.size(); ++c) {
        auto members = inst.cliques[c];
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        std::vector<char> used(static_cast<std::size_t>(inst.n) + 1, 0);
        for (const auto& v : members) {
            auto it = col.assignment.find(v);
            if (it != col.assignment.end() && it->second >= 1 && it->second <= inst.n)
                used[it->second] = 1;
        }
        int next = 1;
        for (const auto& v : members) {
            if (labels.count(v)) continue;
            while (next <= inst.n && used[next]) ++next;
            if (next <= inst.n) {
                used[next] = 1;
                col.assignment[v] = next;
            }
        }
    }
    return col;
}

}  // namespace detail

// Requires every label's cells to agree; use label_inconsistencies for the
// structured report before calling.
inline Coloring extend_coloring(const EflInstance& inst, const ColorMatrix& m,
                                const std::map<VertexId, LabelSet>& labels) {
    auto incons = label_inconsistencies(m, labels);
    if (!incons.empty())
        throw std::invalid_argument("label " + incons.front().label.to_string() +
                                    " has disagreeing matrix cells");
    return detail::extend_first_pair(inst, m, labels);
}

// ---------------------------------------------------------------------------
// The full procedure

namespace detail {

inline std::string cell_str(CliquePair pr) {
    return "(" + std::to_string(pr.first) + "," + std::to_string(pr.second) + ")";
}

inline std::string pairs_str(const std::vector<CliquePair>& prs) {
    std::string s;
    for (auto pr : prs) s += cell_str(pr);
    return s;
}

}  // namespace detail

inline ColoringOutcome run_procedure(const EflInstance& inst) {
    {
        auto issues = validate(inst);
        if (!issues.empty()) throw std::invalid_argument("invalid instance: " + issues.front().message);
    }
    const auto labels = common_vertex_labels(inst);
    const auto sets = derived_sets(inst);
    ColorMatrix m = blank_for_instance(cyclic_symmetric_latin(inst.n), sets);

    ColoringOutcome out;
    out.matrix = m;
    int seq = 0;
    auto emit = [&](StepKind step, std::string detail_str) {
        out.trace.push_back({++seq, step, std::move(detail_str), matrix_digest(m)});
    };
    auto stuck = [&](StepKind step, std::string context) {
        out.kind = OutcomeKind::Stuck;
        out.stuck_step = step;
        out.stuck_context = std::move(context);
        out.matrix = m;
        return out;
    };

    // Worklist of high-degree labels: size descending, then lexicographic.
    std::vector<LabelSet> high;
    for (const auto& [size, ls] : sets.labels_by_size)
        if (size >= 3) high.insert(high.end(), ls.begin(), ls.end());
    std::sort(high.begin(), high.end(), [](const LabelSet& a, const LabelSet& b) {
        if (a.size() != b.size()) return a.size() > b.size();
        return a < b;
    });

    for (const LabelSet& u : high) {
        // The label's cells, classified against the current matrix: class 1
        // when the cell's color repeats in its row or column, else class 2.
        struct Member {
            CliquePair cell;
            int cls;
        };
        std::vector<Member> pending;
        for (auto pr : u.pairs()) {
            int c = m.at(pr.first, pr.second);
            bool dup = occupancy(m, Line::Row, pr.first, c) > 1 ||
                       occupancy(m, Line::Column, pr.second, c) > 1;
            pending.push_back({pr, dup ? 1 : 2});
        }

        auto take_preferred = [&]() {
            auto it = std::find_if(pending.begin(), pending.end(),
                                   [](const Member& m_) { return m_.cls == 1; });
            if (it == pending.end()) it = pending.begin();
            Member picked = *it;
            pending.erase(it);
            return picked;
        };

        const Member anchor = take_preferred();
        std::vector<CliquePair> done{anchor.cell};

        // One repair pass when every remaining cell is duplicated.
        bool any_clean = std::any_of(pending.begin(), pending.end(),
                                     [](const Member& m_) { return m_.cls == 2; });
        if (!pending.empty() && !any_clean) {
            Member& target = pending.front();  // lexicographically smallest
            auto repaired = step2_repair(m, target.cell.first, target.cell.second);
            if (!repaired)
                return stuck(StepKind::S2Repair,
                             "u=" + u.to_string() + ";cell=" + detail::cell_str(target.cell));
            m = repaired->matrix;
            std::string d = "u=" + u.to_string() + ";cell=" + detail::cell_str(target.cell) +
                            ";x=" + std::to_string(repaired->color) +
                            ";branch=" + (repaired->fresh_branch ? "fresh" : "once");
            if (repaired->literal_guard_diverges) d += ";literal-guard-diverges";
            emit(StepKind::S2Repair, std::move(d));
            target.cls = 2;
        }

        // Align every remaining cell to the anchor, duplicated cells first.
        while (!pending.empty()) {
            const Member target = take_preferred();
            const int y = m.at(anchor.cell.first, anchor.cell.second);
            const int x = m.at(target.cell.first, target.cell.second);
            std::string d = "u=" + u.to_string() + ";cell=" + detail::cell_str(target.cell) +
                            ";class=T" + std::to_string(target.cls);
            if (x == y) {
                emit(StepKind::S4Swap, d + ";equal;c=" + std::to_string(x));
            } else {
                m = swap_colors(m, x, y, done);
                emit(StepKind::S4Swap, d + ";x=" + std::to_string(x) + ";y=" + std::to_string(y) +
                                           ";protected=" + detail::pairs_str(done));
            }
            done.push_back(target.cell);
        }
    }

    // Degree-2 sweep: cells already unique in both their lines pass; the rest
    // take the smallest color absent from both lines.
    if (auto it = sets.labels_by_size.find(2); it != sets.labels_by_size.end()) {
        for (const LabelSet& u : it->second) {
            const int i = u.indices[0], j = u.indices[1];
            const int c = m.at(i, j);
            if (occupancy(m, Line::Row, i, c) == 1 && occupancy(m, Line::Column, j, c) == 1) {
                emit(StepKind::S6Repair2, "cell=" + detail::cell_str({i, j}) + ";ok");
                continue;
            }
            auto fresh = fresh_color(m, i, j);
            if (!fresh)
                return stuck(StepKind::S6Repair2, "u=" + u.to_string() + ";cell=" +
                                                      detail::cell_str({i, j}));
            m = replace_pair(m, i, j, *fresh);
            emit(StepKind::S6Repair2,
                 "cell=" + detail::cell_str({i, j}) + ";x=" + std::to_string(*fresh));
        }
    }

    out.matrix = m;
    out.inconsistencies = label_inconsistencies(m, labels);
    out.coloring = detail::extend_first_pair(inst, m, labels);
    std::string d = "vertices=" + std::to_string(out.coloring.assignment.size());
    if (!out.inconsistencies.empty())
        d += ";inconsistent=" + std::to_string(out.inconsistencies.size());
    emit(StepKind::Extend, std::move(d));

    out.violations = verify_coloring(inst, out.coloring);
    out.kind = out.violations.empty() && out.inconsistencies.empty() ? OutcomeKind::Success
                                                                     : OutcomeKind::Improper;
    return out;
}

// ---------------------------------------------------------------------------
// Trace replay: applies the recorded edits to a fresh blanked matrix and
// checks every digest on the way.

namespace detail {

inline std::optional<std::string> detail_field(const std::string& detail_str, const std::string& key) {
    std::size_t start = 0;
    while (start <= detail_str.size()) {
        std::size_t end = detail_str.find(';', start);
        if (end == std::string::npos) end = detail_str.size();
        std::string field = detail_str.substr(start, end - start);
        if (field == key) return std::string{};
        if (field.rfind(key + "=", 0) == 0) return field.substr(key.size() + 1);
        start = end + 1;
    }
    return std::nullopt;
}

inline CliquePair parse_cell(const std::string& s) {
    // "(i,j)"
    auto comma = s.find(',');
    if (s.size() < 5 || s.front() != '(' || s.back() != ')' || comma == std::string::npos)
        throw std::invalid_argument("bad cell " + s);
    return {std::stoi(s.substr(1, comma - 1)), std::stoi(s.substr(comma + 1, s.size() - comma - 2))};
}

inline std::vector<CliquePair> parse_cells(const std::string& s) {
    std::vector<CliquePair> out;
    std::size_t start = 0;
    while (start < s.size()) {
        std::size_t end = s.find(')', start);
        if (s[start] != '(' || end == std::string::npos) throw std::invalid_argument("bad cell list");
        out.push_back(parse_cell(s.substr(start, end - start + 1)));
        start = end + 1;
    }
    return out;
}

}  // namespace detail

inline ColorMatrix replay_trace(const EflInstance& inst, const std::vector<TraceEvent>& trace) {
    ColorMatrix m = blank_for_instance(cyclic_symmetric_latin(inst.n), derived_sets(inst));
    for (const auto& e : trace) {
        switch (e.step) {
            case StepKind::S2Repair: {
                auto cell = detail::parse_cell(*detail::detail_field(e.detail, "cell"));
                int x = std::stoi(*detail::detail_field(e.detail, "x"));
                m = replace_pair(m, cell.first, cell.second, x);
                break;
            }
            case StepKind::S4Swap: {
                if (detail::detail_field(e.detail, "equal")) break;
                int x = std::stoi(*detail::detail_field(e.detail, "x"));
                int y = std::stoi(*detail::detail_field(e.detail, "y"));
                auto prot = detail::parse_cells(*detail::detail_field(e.detail, "protected"));
                m = swap_colors(m, x, y, prot);
                break;
            }
            case StepKind::S6Repair2: {
                if (detail::detail_field(e.detail, "ok")) break;
                auto cell = detail::parse_cell(*detail::detail_field(e.detail, "cell"));
                int x = std::stoi(*detail::detail_field(e.detail, "x"));
                m = replace_pair(m, cell.first, cell.second, x);
                break;
            }
            default: break;
        }
        if (matrix_digest(m) != e.digest)
            throw std::runtime_error("trace digest mismatch at event " + std::to_string(e.seq));
    }
    return m;
}

// ---------------------------------------------------------------------------
// Coloring text format: "COLORING <n>" then one "<token> <color>" line per
// vertex, sorted by token.

inline void write_coloring(const Coloring& col, int n, std::ostream& out) {
    out << "COLORING " << n << '\n';
    for (const auto& [v, c] : col.assignment) out << v.token << ' ' << c << '\n';
}

inline std::pair<Coloring, int> parse_coloring(std::istream& in) {
    std::string line;
    int line_no = 0;
    if (!detail::next_line(in, line, line_no)) throw ParseError(1, "expected 'COLORING <n>'");
    auto fields = detail::split_fields(line, line_no);
    if (fields.size() != 2 || fields[0] != "COLORING")
        throw ParseError(line_no, "expected 'COLORING <n>'");
    const int n = detail::parse_int(fields[1], line_no, "order");
    Coloring col;
    while (detail::next_line(in, line, line_no)) {
        fields = detail::split_fields(line, line_no);
        if (fields.size() != 2) throw ParseError(line_no, "expected '<vertex> <color>'");
        if (!valid_token(fields[0])) throw ParseError(line_no, "invalid token " + fields[0]);
        VertexId v{fields[0]};
        if (col.assignment.count(v)) throw ParseError(line_no, "vertex colored twice: " + fields[0]);
        col.assignment[v] = detail::parse_int(fields[1], line_no, "color");
    }
    return {std::move(col), n};
}

}  // namespace efl

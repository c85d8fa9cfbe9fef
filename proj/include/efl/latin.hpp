#pragma once

// Symmetric latin squares and the color-matrix algebra built on them:
// blanking, pair replacement, global color swaps with protected cells, and
// row/column occupancy queries.  Matrices are immutable values; every
// modifying operation returns a new matrix.

#include <cassert>
#include <optional>
#include <string>

#include "efl/core.hpp"

namespace efl {

// n x n array over {1..n}; every row and column a permutation, equal to its
// transpose.  Construct via cyclic_symmetric_latin or the validating factory.
struct SymmetricLatinSquare {
    int order = 0;
    std::vector<int> cells;  // row-major

    int at(int i, int j) const { return cells[static_cast<std::size_t>(i - 1) * order + (j - 1)]; }

    static SymmetricLatinSquare from_cells(int n, std::vector<int> cells);

    bool operator==(const SymmetricLatinSquare&) const = default;
};

inline bool is_latin(int n, const std::vector<int>& cells) {
    if (n < 1 || cells.size() != static_cast<std::size_t>(n) * n) return false;
    std::vector<char> seen;
    for (int i = 0; i < n; ++i) {
        seen.assign(static_cast<std::size_t>(n) + 1, 0);
        for (int j = 0; j < n; ++j) {
            int v = cells[static_cast<std::size_t>(i) * n + j];
            if (v < 1 || v > n || seen[v]) return false;
            seen[v] = 1;
        }
        seen.assign(static_cast<std::size_t>(n) + 1, 0);
        for (int j = 0; j < n; ++j) {
            int v = cells[static_cast<std::size_t>(j) * n + i];
            if (v < 1 || v > n || seen[v]) return false;
            seen[v] = 1;
        }
    }
    return true;
}

inline bool is_symmetric(int n, const std::vector<int>& cells) {
    if (n < 1 || cells.size() != static_cast<std::size_t>(n) * n) return false;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (cells[static_cast<std::size_t>(i) * n + j] != cells[static_cast<std::size_t>(j) * n + i])
                return false;
    return true;
}

inline SymmetricLatinSquare SymmetricLatinSquare::from_cells(int n, std::vector<int> cells) {
    if (!is_latin(n, cells)) throw std::invalid_argument("not a latin square");
    if (!is_symmetric(n, cells)) throw std::invalid_argument("latin square not symmetric");
    return {n, std::move(cells)};
}

// The cyclic square ((i + j - 2) mod n) + 1.  Rows and columns are shifted
// copies of 1..n, and i + j is symmetric in i and j.
inline SymmetricLatinSquare cyclic_symmetric_latin(int n) {
    if (n < 1) throw std::invalid_argument("order must be positive");
    SymmetricLatinSquare sq;
    sq.order = n;
    sq.cells.resize(static_cast<std::size_t>(n) * n);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
            sq.cells[static_cast<std::size_t>(i - 1) * n + (j - 1)] = (i + j - 2) % n + 1;
    return sq;
}

// Symmetric n x n array over {0,1..n}; 0 marks a blanked cell.  Rows and
// columns carry no latin guarantee once modification begins.
struct ColorMatrix {
    int order = 0;
    std::vector<int> cells;

    int at(int i, int j) const { return cells[static_cast<std::size_t>(i - 1) * order + (j - 1)]; }

    static ColorMatrix from_cells(int n, std::vector<int> cells) {
        if (n < 1 || cells.size() != static_cast<std::size_t>(n) * n)
            throw std::invalid_argument("bad matrix shape");
        for (int v : cells)
            if (v < 0 || v > n) throw std::invalid_argument("cell value out of range");
        if (!is_symmetric(n, cells)) throw std::invalid_argument("matrix not symmetric");
        return {n, std::move(cells)};
    }

    bool operator==(const ColorMatrix&) const = default;

private:
    friend ColorMatrix blank_for_instance(const SymmetricLatinSquare&, const DerivedSets&);
    friend ColorMatrix replace_pair(const ColorMatrix&, int, int, int);
    friend ColorMatrix swap_colors(const ColorMatrix&, int, int, const std::vector<CliquePair>&);

    void set_sym(int i, int j, int v) {
        cells[static_cast<std::size_t>(i - 1) * order + (j - 1)] = v;
        cells[static_cast<std::size_t>(j - 1) * order + (i - 1)] = v;
    }
};

// Blanks the diagonal and every cell whose clique pair is disjoint; all other
// cells keep the square's value.
inline ColorMatrix blank_for_instance(const SymmetricLatinSquare& square, const DerivedSets& sets) {
    if (square.order != sets.n) throw std::invalid_argument("square order does not match instance");
    ColorMatrix m{square.order, square.cells};
    for (int i = 1; i <= m.order; ++i) m.set_sym(i, i, 0);
    for (auto [i, j] : sets.empty_pairs) m.set_sym(i, j, 0);
    assert(is_symmetric(m.order, m.cells));
    return m;
}

enum class Line { Row, Column };

// Number of cells holding color x in one row or column; zeros never count.
inline int occupancy(const ColorMatrix& m, Line line, int index, int x) {
    if (index < 1 || index > m.order) throw std::out_of_range("line index out of range");
    if (x < 1 || x > m.order) throw std::out_of_range("color out of range");
    int count = 0;
    for (int k = 1; k <= m.order; ++k) {
        int v = line == Line::Row ? m.at(index, k) : m.at(k, index);
        if (v == x) ++count;
    }
    return count;
}

// New matrix with cells (i,j) and (j,i) set to x.  The diagonal is never
// recolored.
inline ColorMatrix replace_pair(const ColorMatrix& m, int i, int j, int x) {
    if (i == j) throw std::invalid_argument("diagonal cells cannot be recolored");
    if (i < 1 || i > m.order || j < 1 || j > m.order) throw std::out_of_range("cell out of range");
    if (x < 1 || x > m.order) throw std::out_of_range("color out of range");
    ColorMatrix out = m;
    out.set_sym(i, j, x);
    assert(is_symmetric(out.order, out.cells));
    return out;
}

// Every cell holding x becomes y; every cell holding y becomes x, except
// cells whose unordered index pair is protected; zeros are untouched.
// Symmetric partners always change together.
inline ColorMatrix swap_colors(const ColorMatrix& m, int x, int y,
                               const std::vector<CliquePair>& protected_pairs) {
    if (x == y) throw std::invalid_argument("swap colors must differ");
    if (x < 1 || x > m.order || y < 1 || y > m.order) throw std::out_of_range("color out of range");
    auto is_protected = [&](int i, int j) {
        CliquePair pr = ordered_pair(i, j);
        return std::find(protected_pairs.begin(), protected_pairs.end(), pr) !=
               protected_pairs.end();
    };
    ColorMatrix out = m;
    for (int i = 1; i <= m.order; ++i) {
        for (int j = i; j <= m.order; ++j) {
            int v = m.at(i, j);
            if (v == x) out.set_sym(i, j, y);
            else if (v == y && !(i != j && is_protected(i, j))) out.set_sym(i, j, x);
        }
    }
    assert(is_symmetric(out.order, out.cells));
    return out;
}

// Smallest color absent from both row i and column j, counting nonzero cells
// only; std::nullopt when every color appears.
inline std::optional<int> fresh_color(const ColorMatrix& m, int i, int j) {
    if (i == j) throw std::invalid_argument("fresh_color needs two distinct lines");
    if (i < 1 || i > m.order || j < 1 || j > m.order) throw std::out_of_range("cell out of range");
    std::vector<char> used(static_cast<std::size_t>(m.order) + 1, 0);
    for (int k = 1; k <= m.order; ++k) {
        used[m.at(i, k)] = 1;
        used[m.at(k, j)] = 1;
    }
    for (int x = 1; x <= m.order; ++x)
        if (!used[x]) return x;
    return std::nullopt;
}

inline std::uint64_t matrix_digest(const ColorMatrix& m) {
    std::string repr = std::to_string(m.order);
    for (int v : m.cells) {
        repr += ',';
        repr += std::to_string(v);
    }
    return detail::fnv1a(repr);
}

// ---------------------------------------------------------------------------
// Text formats: "LATIN <n>" / "CMAT <n>" header, then n rows of n integers.

namespace detail {

inline std::pair<int, std::vector<int>> parse_grid(std::istream& in, const char* magic,
                                                   int min_value) {
    std::string line;
    int line_no = 0;
    if (!next_line(in, line, line_no)) throw ParseError(1, std::string("expected ") + magic);
    auto fields = split_fields(line, line_no);
    if (fields.size() != 2 || fields[0] != magic)
        throw ParseError(line_no, std::string("expected '") + magic + " <n>'");
    int n = parse_int(fields[1], line_no, "order");
    if (n < 1) throw ParseError(line_no, "order must be positive");
    std::vector<int> cells;
    cells.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        if (!next_line(in, line, line_no)) throw ParseError(line_no + 1, "expected matrix row");
        fields = split_fields(line, line_no);
        if (static_cast<int>(fields.size()) != n)
            throw ParseError(line_no, "expected " + std::to_string(n) + " entries");
        for (const auto& f : fields) {
            int v = parse_int(f, line_no, "entry");
            if (v < min_value || v > n) throw ParseError(line_no, "entry out of range");
            cells.push_back(v);
        }
    }
    expect_eof(in, line_no);
    return {n, std::move(cells)};
}

inline void write_grid(std::ostream& out, const char* magic, int n, const std::vector<int>& cells) {
    out << magic << ' ' << n << '\n';
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j) out << ' ';
            out << cells[static_cast<std::size_t>(i) * n + j];
        }
        out << '\n';
    }
}

}  // namespace detail

inline void write_square(const SymmetricLatinSquare& sq, std::ostream& out) {
    detail::write_grid(out, "LATIN", sq.order, sq.cells);
}

inline SymmetricLatinSquare parse_square(std::istream& in) {
    auto [n, cells] = detail::parse_grid(in, "LATIN", 1);
    return SymmetricLatinSquare::from_cells(n, std::move(cells));
}

inline void write_matrix(const ColorMatrix& m, std::ostream& out) {
    detail::write_grid(out, "CMAT", m.order, m.cells);
}

inline ColorMatrix parse_matrix(std::istream& in) {
    auto [n, cells] = detail::parse_grid(in, "CMAT", 0);
    return ColorMatrix::from_cells(n, std::move(cells));
}

}  // namespace efl

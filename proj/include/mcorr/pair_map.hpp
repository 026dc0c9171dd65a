#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mcorr/errors.hpp"

namespace mcorr {

// Data-set pairs (p,q), p < q, are enumerated lexicographically:
// (0,1), (0,2), ..., (0,P-1), (1,2), ... Everything that serializes a
// correlation map relies on this single ordering.

constexpr int pair_count(int p_sets) noexcept { return p_sets * (p_sets - 1) / 2; }

inline int pair_index(int p, int q, int p_sets) {
    if (p > q) std::swap(p, q);
    if (p < 0 || q >= p_sets || p == q) throw InvalidInput("pair_index: bad pair");
    return p * p_sets - p * (p + 1) / 2 + (q - p - 1);
}

inline std::pair<int, int> pair_at(int index, int p_sets) {
    if (index < 0 || index >= pair_count(p_sets)) throw InvalidInput("pair_at: index out of range");
    for (int p = 0; p < p_sets; ++p) {
        const int row = p_sets - 1 - p;
        if (index < row) return {p, p + 1 + index};
        index -= row;
    }
    throw InvalidInput("pair_at: unreachable");
}

// 1-based display form, e.g. "12" for the pair of the first two data sets.
inline std::string pair_label(int p, int q) {
    return std::to_string(p + 1) + std::to_string(q + 1);
}

// Binary rows-by-pairs matrix. Rows are correlated components (ground truth:
// all n components; detection output: the d_hat leading eigenvectors).
struct CorrelationMap {
    int rows = 0;
    int p_sets = 0;
    std::vector<std::uint8_t> cells;  // row-major, rows x pair_count(p_sets)

    CorrelationMap() = default;
    CorrelationMap(int rows_, int p_sets_, std::uint8_t fill = 0)
        : rows(rows_), p_sets(p_sets_) {
        if (rows_ < 0 || p_sets_ < 2) throw InvalidInput("CorrelationMap: bad shape");
        cells.assign(static_cast<std::size_t>(rows_) * pair_count(p_sets_), fill);
    }

    [[nodiscard]] int cols() const noexcept { return pair_count(p_sets); }

    [[nodiscard]] std::uint8_t at(int r, int c) const {
        check(r, c);
        return cells[static_cast<std::size_t>(r) * cols() + c];
    }

    void set(int r, int c, std::uint8_t v) {
        check(r, c);
        cells[static_cast<std::size_t>(r) * cols() + c] = v ? 1 : 0;
    }

    [[nodiscard]] bool row_all_ones(int r) const {
        for (int c = 0; c < cols(); ++c) {
            if (at(r, c) == 0) return false;
        }
        return true;
    }

    [[nodiscard]] int count_ones() const {
        int total = 0;
        for (const auto v : cells) total += v;
        return total;
    }

    bool operator==(const CorrelationMap&) const = default;

  private:
    void check(int r, int c) const {
        if (r < 0 || r >= rows || c < 0 || c >= cols()) {
            throw InvalidInput("CorrelationMap: cell out of range");
        }
    }
};

using GroundTruthMap = CorrelationMap;

}  // namespace mcorr

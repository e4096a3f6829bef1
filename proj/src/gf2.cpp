#include "gsw/gf2.hpp"

namespace gsw {

void Gf2System::add_row(const std::vector<int>& vars, bool rhs) {
    size_t base = rows_.size();
    rows_.resize(base + words_, 0);
    for (int v : vars)
        rows_[base + v / 64] ^= uint64_t(1) << (v % 64);
    if (rhs)
        rows_[base + nvars_ / 64] ^= uint64_t(1) << (nvars_ % 64);
}

bool Gf2System::eliminate(std::vector<int>& pivot_of_row) {
    int nrows = num_rows();
    pivot_of_row.assign(nrows, -1);
    int rank = 0;
    for (int col = 0; col < nvars_ && rank < nrows; ++col) {
        uint64_t mask = uint64_t(1) << (col % 64);
        int w = col / 64;
        int pivot = -1;
        for (int r = rank; r < nrows; ++r) {
            if (rows_[(size_t)r * words_ + w] & mask) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0)
            continue;
        if (pivot != rank) {
            for (int k = 0; k < words_; ++k)
                std::swap(rows_[(size_t)pivot * words_ + k],
                          rows_[(size_t)rank * words_ + k]);
        }
        for (int r = 0; r < nrows; ++r) {
            if (r != rank && (rows_[(size_t)r * words_ + w] & mask)) {
                for (int k = 0; k < words_; ++k)
                    rows_[(size_t)r * words_ + k] ^=
                        rows_[(size_t)rank * words_ + k];
            }
        }
        pivot_of_row[rank] = col;
        ++rank;
    }
    // a zero row with rhs 1 means no solution
    uint64_t rhs_mask = uint64_t(1) << (nvars_ % 64);
    int rhs_word = nvars_ / 64;
    for (int r = rank; r < nrows; ++r) {
        bool zero = true;
        for (int k = 0; k < words_ && zero; ++k) {
            uint64_t word = rows_[(size_t)r * words_ + k];
            if (k == rhs_word)
                word &= ~rhs_mask;
            if (word)
                zero = false;
        }
        if (zero && (rows_[(size_t)r * words_ + rhs_word] & rhs_mask))
            return false;
    }
    return true;
}

bool Gf2System::solvable() {
    std::vector<int> pivots;
    return eliminate(pivots);
}

bool Gf2System::solve(std::vector<uint8_t>& solution) {
    std::vector<int> pivots;
    if (!eliminate(pivots))
        return false;
    solution.assign(nvars_, 0);
    uint64_t rhs_mask = uint64_t(1) << (nvars_ % 64);
    int rhs_word = nvars_ / 64;
    for (int r = 0; r < num_rows(); ++r) {
        if (pivots[r] >= 0 && (rows_[(size_t)r * words_ + rhs_word] & rhs_mask))
            solution[pivots[r]] = 1;
    }
    return true;
}

} // namespace gsw

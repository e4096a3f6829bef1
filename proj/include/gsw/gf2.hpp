#ifndef GSW_GF2_HPP
#define GSW_GF2_HPP

#include <cstdint>
#include <vector>

namespace gsw {

// Dense GF(2) linear system, rows packed into 64-bit words.  The last
// logical column holds the right-hand side.
class Gf2System {
public:
    explicit Gf2System(int num_vars)
        : nvars_(num_vars), words_((num_vars + 1 + 63) / 64) {}

    void add_row(const std::vector<int>& vars, bool rhs);
    int num_rows() const { return (int)rows_.size() / words_; }

    // Eliminates in place.  Returns false on an inconsistent row 0 = 1.
    bool solvable();

    // Eliminates and produces one solution (free variables set to 0).
    // Returns false if inconsistent.
    bool solve(std::vector<uint8_t>& solution);

private:
    bool eliminate(std::vector<int>& pivot_of_row);

    int nvars_;
    int words_;
    std::vector<uint64_t> rows_; // num_rows * words_
};

} // namespace gsw

#endif

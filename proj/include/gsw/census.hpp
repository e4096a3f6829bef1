#ifndef GSW_CENSUS_HPP
#define GSW_CENSUS_HPP

#include <string>
#include <vector>

#include "gsw/tseitin.hpp"

namespace gsw {

// Exact arithmetic for the counting step of the switching-lemma proof: the
// restriction-space sizes are proportional to binomials C(m, k-2i), and the
// proof needs the tail sum dominated by its first term and the head-to-tail
// ratio at least ((m-k)/k)^{2s} / 2.
struct SpaceCensus {
    int m = 0, k = 0, s = 0;
    bool vacuous = false; // k > m: empty spaces, nothing to check

    BigInt head;                 // C(m, k)
    std::vector<BigInt> tail;    // C(m, k-2i) for i = s .. (k-1)/2
    BigInt tail_sum;

    bool sum_dominated = false;  // tail_sum <= 2 * tail.front()
    bool ratio_bound = false;    // head * k^{2s} >= C(m,k-2s) * (m-k)^{2s}
    bool chain_bound = false;    // head * 2 * k^{2s} >= tail_sum * (m-k)^{2s}

    bool all_hold() const {
        return vacuous || (sum_dominated && ratio_bound && chain_bound);
    }
    std::string report() const;
};

BigInt binomial(int n, int r);

SpaceCensus census_from_m(int m, int k, int s);

// m = Delta * n2^2 for the (n1, n2) partition geometry
SpaceCensus census(int n1, int n2, int k, int s);

} // namespace gsw

#endif

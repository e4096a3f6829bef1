#include "gsw/census.hpp"

#include <sstream>
#include <stdexcept>

#include "gsw/partition.hpp"

namespace gsw {

BigInt binomial(int n, int r) {
    if (r < 0 || r > n)
        return 0;
    r = std::min(r, n - r);
    BigInt result = 1;
    for (int i = 1; i <= r; ++i) {
        result *= (n - r + i);
        result /= i;
    }
    return result;
}

SpaceCensus census_from_m(int m, int k, int s) {
    if (m <= 0 || k <= 0 || s <= 0)
        throw std::invalid_argument("census: parameters must be positive");
    if (k % 2 == 0)
        throw std::invalid_argument("census: k must be odd");
    SpaceCensus c;
    c.m = m;
    c.k = k;
    c.s = s;
    if (k > m) {
        c.vacuous = true;
        return c;
    }
    c.head = binomial(m, k);
    for (int i = s; i <= (k - 1) / 2; ++i)
        c.tail.push_back(binomial(m, k - 2 * i));
    c.tail_sum = 0;
    for (const BigInt& t : c.tail)
        c.tail_sum += t;
    if (c.tail.empty()) {
        c.vacuous = true;
        return c;
    }

    c.sum_dominated = c.tail_sum <= 2 * c.tail.front();

    BigInt k_pow = 1, mk_pow = 1;
    for (int i = 0; i < 2 * s; ++i) {
        k_pow *= k;
        mk_pow *= (m - k);
    }
    c.ratio_bound = c.head * k_pow >= c.tail.front() * mk_pow;
    c.chain_bound = c.head * 2 * k_pow >= c.tail_sum * mk_pow;
    return c;
}

SpaceCensus census(int n1, int n2, int k, int s) {
    SubSquarePartition part(n1, n2, true);
    return census_from_m(part.num_centers(), k, s);
}

std::string SpaceCensus::report() const {
    std::ostringstream out;
    out << "census m=" << m << " k=" << k << " s=" << s << "\n";
    if (vacuous) {
        out << "  vacuous (k > m or empty tail)\n";
        return out.str();
    }
    out << "  C(m,k)            = " << head << "\n";
    out << "  tail terms        =";
    for (const BigInt& t : tail)
        out << " " << t;
    out << "\n  tail sum          = " << tail_sum << "\n";
    out << "  sum <= 2*max term : " << (sum_dominated ? "holds" : "FAILS")
        << "\n";
    out << "  head/tail >= ((m-k)/k)^2s   : "
        << (ratio_bound ? "holds" : "FAILS") << "\n";
    out << "  head/sum  >= ((m-k)/k)^2s/2 : "
        << (chain_bound ? "holds" : "FAILS") << "\n";
    return out.str();
}

} // namespace gsw

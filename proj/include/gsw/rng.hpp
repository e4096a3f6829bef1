#ifndef GSW_RNG_HPP
#define GSW_RNG_HPP

#include <cstdint>

namespace gsw {

// Counter-based 64-bit generator (splitmix64).  Cheap to fork: a trial
// stream is derived from (seed, trial index) so concurrent trials are
// reproducible independent of scheduling.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    static Rng for_trial(uint64_t seed, uint64_t trial) {
        Rng r(seed);
        r.state_ += 0x9e3779b97f4a7c15ULL * (trial + 1);
        r.next();
        return r;
    }

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, n), n > 0; rejection keeps it exactly uniform
    uint64_t below(uint64_t n) {
        uint64_t limit = ~uint64_t(0) - (~uint64_t(0) % n);
        uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return v % n;
    }

    bool bit() { return next() >> 63; }

private:
    uint64_t state_;
};

} // namespace gsw

#endif

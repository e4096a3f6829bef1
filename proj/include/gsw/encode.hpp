#ifndef GSW_ENCODE_HPP
#define GSW_ENCODE_HPP

#include <functional>
#include <stdexcept>

#include "gsw/ecdt.hpp"

namespace gsw {

struct DecodeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bit stream with typed cursors; reads past the end raise DecodeError.
struct BitStream {
    std::vector<uint8_t> bits;
    size_t pos = 0;

    void put(int b) { bits.push_back((uint8_t)(b & 1)); }
    void put_int(uint32_t v, int width) {
        for (int i = width - 1; i >= 0; --i)
            put((v >> i) & 1);
    }
    int get() {
        if (pos >= bits.size())
            throw DecodeError("bit stream exhausted");
        return bits[pos++];
    }
    uint32_t get_int(int width) {
        uint32_t v = 0;
        for (int i = 0; i < width; ++i)
            v = (v << 1) | get();
        return v;
    }
    size_t size() const { return bits.size(); }
    bool fully_consumed() const { return pos == bits.size(); }

    void write(std::ostream& out, const std::string& header) const;
    static BitStream read(std::istream& in, std::string* header);
};

// bits needed to index a set of the given size
int index_width(int count);

struct EncodeResult {
    PartialRestriction rho_star;
    BitStream stream;
    // tallies of the counting argument
    int a = 0, b = 0, c = 0;
    int exposed_total = 0;
    int stages = 0;
    // the bit budget a*ceil(log t) + b*ceil(log delta) + A*s holds with
    // this measured constant
    double measured_A = 0.0;
};

// Turns a cap-hit construction into (rho*, X).  The transcript is produced
// by running the decoder's control flow against the run's ground truth, so
// the two sides cannot drift apart.
EncodeResult encode(const SwitchContext& ctx, const std::vector<DTree>& trees,
                    int s, int t, const EcdtResult& run);

// Recovers rho from rho* and the transcript; throws DecodeError on any
// corruption instead of returning a wrong restriction.
PartialRestriction decode(const SubSquarePartition& part,
                          const std::vector<DTree>& trees, int s, int t,
                          const PartialRestriction& rho_star,
                          BitStream stream);

} // namespace gsw

#endif

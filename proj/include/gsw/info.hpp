#ifndef GSW_INFO_HPP
#define GSW_INFO_HPP

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "gsw/restriction.hpp"

namespace gsw {

// One information piece: an edge between centers in adjacent sub-squares,
// or the absence of any edge from a center in one direction.
struct InfoPiece {
    int center = -1;
    Dir dir = Dir::Left;
    int partner = -1; // center id for an edge, -1 for a non-edge

    bool is_edge() const { return partner >= 0; }
    auto operator<=>(const InfoPiece&) const = default;
};

// A set of information pieces, keyed by (center, direction).  An edge
// occupies the slot at both of its endpoints.
class InfoSet {
public:
    // false (and no change) on a contradicting piece in an occupied slot
    bool add_nonedge(int center, Dir d);
    bool add_edge(const SubSquarePartition& part, int v, int w);
    bool add_piece(const SubSquarePartition& part, const InfoPiece& p);
    bool merge(const SubSquarePartition& part, const InfoSet& other);

    bool has(int center, Dir d) const { return slots_.count({center, (int)d}); }
    // partner id or -1; requires the slot to exist
    int piece(int center, Dir d) const { return slots_.at({center, (int)d}); }
    std::optional<InfoPiece> piece_at(int center, Dir d) const;

    bool contains(const InfoPiece& p) const;
    void remove_piece(const InfoPiece& p);

    int dirs_present(int center) const;
    int edges_at(int center) const;
    bool closed_at(int center) const;
    bool locally_consistent() const;

    std::vector<int> support() const;            // centers, ascending
    std::vector<InfoPiece> pieces() const;       // canonical order
    std::vector<std::pair<int, int>> edges() const; // (min,max) center pairs

    bool empty() const { return slots_.empty(); }
    size_t slot_count() const { return slots_.size(); }
    bool operator==(const InfoSet&) const = default;

private:
    std::map<std::pair<int, int>, int> slots_; // (center, dir) -> partner
};

// forced value of an edge variable under (rho, I), if any
std::optional<int> forces(const PartialRestriction& rho, const InfoSet& info,
                          int edge);

// The restriction that forces the same variables as (rho, I) does: centers
// closed in I die, the base assignment is negated along all edges of I.
// Requires I closed on the dying set and an even edge count elsewhere.
PartialRestriction apply_info(const PartialRestriction& rho,
                              const InfoSet& info);

// 9 bits: chosen flag, direction presence, edge presence; the direction
// order inside the bit fields is up, down, left, right
struct Signature {
    uint16_t bits = 0;

    static Signature of(const SubSquarePartition& part, const InfoSet& j,
                        int center, bool chosen);
    bool chosen() const { return bits >> 8; }
    bool present(Dir d) const { return (bits >> (4 + sig_index(d))) & 1; }
    bool edge(Dir d) const { return (bits >> sig_index(d)) & 1; }

    static int sig_index(Dir d) {
        switch (d) {
        case Dir::Up: return 3;
        case Dir::Down: return 2;
        case Dir::Left: return 1;
        default: return 0; // right
        }
    }
    bool operator==(const Signature&) const = default;
};

} // namespace gsw

#endif

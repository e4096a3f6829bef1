#ifndef GSW_RESTRICTION_HPP
#define GSW_RESTRICTION_HPP

#include <iosfwd>
#include <vector>

#include "gsw/decision_tree.hpp"
#include "gsw/pairing.hpp"
#include "gsw/partition.hpp"
#include "gsw/rng.hpp"
#include "gsw/tseitin.hpp"

namespace gsw {

// Base for both restriction kinds: alive centers, the chosen center per
// sub-square (lowest row among the alive ones) and a base assignment.
struct RestrictionBase {
    const SubSquarePartition* part = nullptr;
    std::vector<uint8_t> alive; // per center id
    std::vector<int> chosen;    // per square id: center id, -1 if none alive
    std::vector<uint8_t> base;  // per big-grid edge

    int alive_count() const {
        int k = 0;
        for (uint8_t a : alive)
            k += a;
        return k;
    }
    bool is_alive(int cid) const { return alive[cid]; }
    bool is_chosen(int cid) const {
        return chosen[part->square_of_center(cid)] == cid;
    }
    // a path is alive when both endpoints are
    bool path_alive(int path_id) const;
};

// rho: base assignment solves Tseitin with charge 0 at the alive centers
// and 1 elsewhere; variables off alive paths take their final value
struct PartialRestriction : RestrictionBase {
    bool edge_on_alive_path(int edge) const;
    int final_value(int edge) const { return base[edge]; }
};

// sigma: base assignment solves Tseitin with charge 0 at the chosen centers
// and 1 elsewhere; edges on chosen paths map to y-variables of the small
// grid (y ids are small-grid edge ids)
struct FullRestriction : RestrictionBase {
    AffineMap map; // per big-grid edge

    // the small-grid edge of the chosen path leaving square sq in dir d
    int y_var(int sq, Dir d) const {
        return part->small_grid().edge_from(sq, d);
    }
};

ChargeVector charges_for_centers(const SubSquarePartition& part,
                                 const std::vector<int>& center_nodes);

std::vector<int> chosen_from_alive(const SubSquarePartition& part,
                                   const std::vector<uint8_t>& alive);

// Uniform over k-subsets of the centers subject to the per-square
// regularity bound (1 +- 0.01)k/n2^2, rounded outward to the nearest
// feasible integers; rejection sampling with a retry cap.
std::vector<uint8_t> sample_alive(const SubSquarePartition& part, int k,
                                  Rng& rng);

// Non-regular helper used by geometry-level tests: per-square counts drawn
// uniformly from [lo, hi], total forced odd.
std::vector<uint8_t> sample_alive_direct(const SubSquarePartition& part,
                                         int lo, int hi, Rng& rng);

PartialRestriction sample_partial(const SubSquarePartition& part, int k,
                                  Rng& rng);
FullRestriction sample_full(const SubSquarePartition& part, int k, Rng& rng);

// sigma with the given alive set (base sampled with the rng)
FullRestriction full_from_alive(const SubSquarePartition& part,
                                std::vector<uint8_t> alive, Rng& rng);
PartialRestriction partial_from_alive(const SubSquarePartition& part,
                                      std::vector<uint8_t> alive, Rng& rng);

// builds the affine map of a full restriction from its base assignment
AffineMap build_affine_map(const SubSquarePartition& part,
                           const std::vector<uint8_t>& sigma0,
                           const std::vector<int>& chosen);

enum class NodeFate : uint8_t { Satisfied, Tautology, NewAxiom };

struct ApplyAudit {
    std::vector<NodeFate> fate;  // per big-grid node
    CnfFormula restricted;       // the surviving clauses over y-variables
    bool matches_small_instance = false;
};

// Substitutes sigma into every axiom clause of the all-ones instance and
// classifies each node; the surviving clauses must equal the CNF of the
// small all-ones instance up to clause order.
ApplyAudit apply_full(const FullRestriction& sigma);

// pi composed with rho; validates that the result passes the audit
FullRestriction compose(const PartialRestriction& rho,
                        const GraphicalPairing& pairing);

void write_restriction(std::ostream& out, const RestrictionBase& r,
                       const GraphicalPairing* pairing, int k, uint64_t seed);
// returns alive set, base bits and pairing edges; caller rebuilds structs
struct RestrictionFile {
    int n1 = 0, n2 = 0, k = 0;
    uint64_t seed = 0;
    std::vector<int> alive_ids;
    std::vector<uint8_t> base;
    std::vector<std::pair<int, int>> pairing_edges;
};
RestrictionFile read_restriction(std::istream& in);

} // namespace gsw

#endif

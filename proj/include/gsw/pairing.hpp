#ifndef GSW_PAIRING_HPP
#define GSW_PAIRING_HPP

#include <vector>

#include "gsw/partition.hpp"

namespace gsw {

// One component of a graphical pairing: a single edge between two centers,
// or a star of size 4 (centers[0] is the degree-3 center).
struct PairingComponent {
    bool star = false;
    std::vector<int> centers; // center ids; 2 for an edge, 4 for a star

    std::vector<std::pair<int, int>> edges() const {
        std::vector<std::pair<int, int>> out;
        if (star) {
            for (int i = 1; i < 4; ++i)
                out.push_back({centers[0], centers[i]});
        } else {
            out.push_back({centers[0], centers[1]});
        }
        return out;
    }
};

// Odd-degree graph on the non-chosen centers; every non-chosen center is
// covered exactly once.
struct GraphicalPairing {
    std::vector<PairingComponent> components;

    std::vector<std::pair<int, int>> all_edges() const {
        std::vector<std::pair<int, int>> out;
        for (const auto& c : components) {
            auto e = c.edges();
            out.insert(out.end(), e.begin(), e.end());
        }
        return out;
    }
};

// Deterministic in the alive set: no randomness, same input gives the same
// pairing byte for byte.  Uses the counting construction when every square
// has at least 16 alive centers and a greedy matching with augmentation and
// star repair below that; fails loudly when no pairing exists.
GraphicalPairing build_pairing(const SubSquarePartition& part,
                               const std::vector<uint8_t>& alive,
                               const std::vector<int>& chosen);

// check all graphical-pairing invariants
void validate_pairing(const SubSquarePartition& part,
                      const std::vector<uint8_t>& alive,
                      const std::vector<int>& chosen,
                      const GraphicalPairing& pairing);

} // namespace gsw

#endif

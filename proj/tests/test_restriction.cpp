#include "doctest.h"

#include <map>
#include <set>
#include <sstream>

#include "gsw/restriction.hpp"

using namespace gsw;

TEST_CASE("k equal to the square count means every alive center is chosen") {
    SubSquarePartition part(45, 3, true);
    Rng rng(1);
    FullRestriction sigma = sample_full(part, 9, rng);
    CHECK(sigma.alive_count() == 9);
    for (int sq = 0; sq < part.num_squares(); ++sq) {
        CHECK(sigma.chosen[sq] >= 0);
        CHECK(sigma.is_alive(sigma.chosen[sq]));
    }
    int non_chosen = 0;
    for (int cid = 0; cid < part.num_centers(); ++cid)
        if (sigma.is_alive(cid) && !sigma.is_chosen(cid))
            ++non_chosen;
    CHECK(non_chosen == 0);
}

TEST_CASE("even k is rejected") {
    SubSquarePartition part(45, 3, true);
    Rng rng(2);
    CHECK_THROWS(sample_full(part, 10, rng));
}

TEST_CASE("per-square alive counts stay in the sampling band") {
    SubSquarePartition part(33, 3, true);
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        PartialRestriction rho = sample_partial(part, 11, rng);
        std::map<int, int> counts;
        for (int cid = 0; cid < part.num_centers(); ++cid)
            if (rho.is_alive(cid))
                counts[part.square_of_center(cid)]++;
        for (int sq = 0; sq < part.num_squares(); ++sq) {
            CHECK(counts[sq] >= 1);
            CHECK(counts[sq] <= 2);
        }
    }
}

TEST_CASE("base assignments have the right charges") {
    SubSquarePartition part(33, 3, true);
    const TorusGrid& g = part.grid();
    Rng rng(4);
    PartialRestriction rho = sample_partial(part, 11, rng);
    std::set<int> alive_nodes;
    for (int cid = 0; cid < part.num_centers(); ++cid)
        if (rho.is_alive(cid))
            alive_nodes.insert(part.center_node(cid));
    Graph gr = g.as_graph();
    for (int v = 0; v < gr.num_nodes; ++v) {
        int parity = 0;
        for (int e : gr.incident[v])
            parity ^= rho.base[e];
        CHECK(parity == (alive_nodes.count(v) ? 0 : 1));
    }
}

TEST_CASE("apply_full: restricted formula is the small instance") {
    SubSquarePartition part(45, 3, true);
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        FullRestriction sigma = sample_full(part, 11, rng);
        ApplyAudit audit = apply_full(sigma);
        CHECK(audit.matches_small_instance);
        // spot-check the three fates appear
        int sat = 0, taut = 0, axiom = 0;
        for (NodeFate f : audit.fate) {
            sat += f == NodeFate::Satisfied;
            taut += f == NodeFate::Tautology;
            axiom += f == NodeFate::NewAxiom;
        }
        CHECK(axiom == part.num_squares());
        CHECK(taut > 0);
        CHECK(sat > 0);
    }
}

TEST_CASE("interior path nodes stay satisfied when a y flips") {
    // tautology fate means the substituted clauses hold for all y values,
    // which is exactly the flip-independence claim
    SubSquarePartition part(45, 3, true);
    Rng rng(6);
    FullRestriction sigma = sample_full(part, 9, rng);
    ApplyAudit audit = apply_full(sigma);
    REQUIRE(audit.matches_small_instance);
}

TEST_CASE("pairing validity over seeded alive sets") {
    for (int n2 : {3, 5}) {
        int n1 = n2 == 3 ? 45 : 75;
        SubSquarePartition part(n1, n2, true);
        REQUIRE(part.delta() >= 2);
        Rng rng(100 + n2);
        for (int trial = 0; trial < 60; ++trial) {
            // 2 to delta non-chosen per square needs delta+1 <= alive
            int hi = std::min(part.delta(), 3);
            auto alive = sample_alive_direct(part, 2, hi, rng);
            auto chosen = chosen_from_alive(part, alive);
            GraphicalPairing pi0 = build_pairing(part, alive, chosen);
            validate_pairing(part, alive, chosen, pi0);
        }
    }
}

TEST_CASE("pairing determinism") {
    SubSquarePartition part(45, 3, true);
    Rng rng(77);
    auto alive = sample_alive_direct(part, 2, 3, rng);
    auto chosen = chosen_from_alive(part, alive);
    GraphicalPairing a = build_pairing(part, alive, chosen);
    GraphicalPairing b = build_pairing(part, alive, chosen);
    REQUIRE(a.components.size() == b.components.size());
    for (size_t i = 0; i < a.components.size(); ++i) {
        CHECK(a.components[i].star == b.components[i].star);
        CHECK(a.components[i].centers == b.components[i].centers);
    }
}

TEST_CASE("empty pairing when every alive center is chosen") {
    SubSquarePartition part(45, 3, true);
    Rng rng(8);
    FullRestriction sigma = sample_full(part, 9, rng);
    GraphicalPairing pi0 = build_pairing(part, sigma.alive, sigma.chosen);
    CHECK(pi0.components.empty());
}

TEST_CASE("two non-chosen centers in adjacent squares become one edge") {
    SubSquarePartition part(45, 3, true);
    std::vector<uint8_t> alive(part.num_centers(), 0);
    // one alive (= chosen) center per square, plus one extra in (0,0) and
    // one extra in (0,1)
    for (int sq = 0; sq < part.num_squares(); ++sq)
        alive[sq * part.delta() + 0] = 1;
    alive[part.square_id(0, 0) * part.delta() + 1] = 1;
    alive[part.square_id(0, 1) * part.delta() + 1] = 1;
    auto chosen = chosen_from_alive(part, alive);
    GraphicalPairing pi0 = build_pairing(part, alive, chosen);
    REQUIRE(pi0.components.size() == 1);
    CHECK_FALSE(pi0.components[0].star);
}

TEST_CASE("star repair covers a claw of stranded tokens") {
    SubSquarePartition part(75, 5, true);
    std::vector<uint8_t> alive(part.num_centers(), 0);
    for (int sq = 0; sq < part.num_squares(); ++sq)
        alive[sq * part.delta() + 0] = 1;
    // extra tokens at (2,2) and three neighbors that are pairwise
    // non-adjacent: forces a star component
    for (auto [r, c] : {std::pair{2, 2}, {1, 2}, {2, 1}, {3, 2}})
        alive[part.square_id(r, c) * part.delta() + 1] = 1;
    auto chosen = chosen_from_alive(part, alive);
    GraphicalPairing pi0 = build_pairing(part, alive, chosen);
    validate_pairing(part, alive, chosen, pi0);
    bool has_star = false;
    for (const auto& comp : pi0.components)
        has_star = has_star || comp.star;
    CHECK(has_star);
}

TEST_CASE("compose agrees with the direct construction and passes audit") {
    SubSquarePartition part(33, 3, true);
    Rng rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        PartialRestriction rho = sample_partial(part, 11, rng);
        GraphicalPairing pi0 = build_pairing(part, rho.alive, rho.chosen);
        FullRestriction sigma = compose(rho, pi0);
        ApplyAudit audit = apply_full(sigma);
        CHECK(audit.matches_small_instance);
    }
}

TEST_CASE("restriction file round trip") {
    SubSquarePartition part(33, 3, true);
    Rng rng(10);
    PartialRestriction rho = sample_partial(part, 11, rng);
    GraphicalPairing pi0 = build_pairing(part, rho.alive, rho.chosen);
    std::stringstream ss;
    write_restriction(ss, rho, &pi0, 11, 10);
    RestrictionFile f = read_restriction(ss);
    CHECK(f.n1 == 33);
    CHECK(f.n2 == 3);
    CHECK(f.k == 11);
    CHECK(f.base == rho.base);
    std::set<int> ids(f.alive_ids.begin(), f.alive_ids.end());
    for (int cid = 0; cid < part.num_centers(); ++cid)
        CHECK((bool)rho.alive[cid] == (bool)ids.count(cid));
    CHECK(f.pairing_edges.size() == pi0.all_edges().size());
}

TEST_CASE("counting construction handles the large-alive regime") {
    // D = 85 gives delta = 17, enough for 16+ alive centers per square
    SubSquarePartition part(255, 3, true);
    REQUIRE(part.delta() >= 17);
    Rng rng(11);
    auto alive = sample_alive_direct(part, 16, 17, rng);
    auto chosen = chosen_from_alive(part, alive);
    GraphicalPairing pi0 = build_pairing(part, alive, chosen);
    validate_pairing(part, alive, chosen, pi0);
    CHECK(!pi0.components.empty());
}

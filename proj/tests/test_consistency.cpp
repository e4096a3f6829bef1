#include "doctest.h"

#include <algorithm>

#include "gsw/consistency.hpp"
#include "gsw/rng.hpp"

using namespace gsw;

namespace {

// independent oracle: enumerate assignments to the free variables of the
// closure subsystem and look for a consistent completion
bool consistent_by_enumeration(const TorusGrid& grid,
                               const TseitinInstance& inst,
                               const PartialAssignment& tau) {
    auto supp = tau.support(inst.graph);
    if (supp.empty())
        return true;
    ClosureResult cl = closure(grid, supp, LcMode::Relaxed);
    std::vector<uint8_t> in_cl(grid.num_nodes(), 0);
    for (int v : cl.closure)
        in_cl[v] = 1;
    std::vector<int> free_edges;
    for (int v : cl.closure)
        for (int e : inst.graph.incident[v])
            if (!tau.assigns(e) &&
                std::find(free_edges.begin(), free_edges.end(), e) ==
                    free_edges.end())
                free_edges.push_back(e);
    REQUIRE(free_edges.size() <= 22);
    for (uint64_t a = 0; a < (1ull << free_edges.size()); ++a) {
        bool ok = true;
        for (size_t idx = 0; idx < cl.closure.size() && ok; ++idx) {
            int v = cl.closure[idx];
            int parity = 0;
            for (int e : inst.graph.incident[v]) {
                if (tau.assigns(e))
                    parity ^= tau.value(e);
                else {
                    auto it =
                        std::find(free_edges.begin(), free_edges.end(), e);
                    parity ^= (a >> (it - free_edges.begin())) & 1;
                }
            }
            ok = parity == inst.charges[v];
        }
        if (ok)
            return true;
    }
    return false;
}

} // namespace

TEST_CASE("closure of a ring captures the enclosed node") {
    TorusGrid grid(9);
    std::vector<int> ring;
    for (int dr = -1; dr <= 1; ++dr)
        for (int dc = -1; dc <= 1; ++dc)
            if (dr || dc)
                ring.push_back(grid.node(4 + dr, 4 + dc));
    // |U| = 8 > 2n/3 = 6, so only the relaxed mode may answer
    ClosureResult cl = closure(grid, ring, LcMode::Relaxed);
    std::vector<int> expect = ring;
    expect.push_back(grid.node(4, 4));
    std::sort(expect.begin(), expect.end());
    CHECK(cl.closure == expect);
    CHECK(cl.small_components.size() == 1);
}

TEST_CASE("closure of a single node is itself") {
    TorusGrid grid(9);
    ClosureResult cl = closure(grid, {grid.node(0, 0)});
    CHECK(cl.closure == std::vector<int>{grid.node(0, 0)});
    CHECK(cl.small_components.empty());
}

TEST_CASE("closure rejects oversized sets in strict mode") {
    TorusGrid grid(9);
    std::vector<int> u;
    for (int i = 0; i < 7; ++i)
        u.push_back(grid.node(0, i)); // 7 > 2*9/3
    CHECK_THROWS(closure(grid, u, LcMode::Strict));
}

TEST_CASE("empty assignment is locally consistent") {
    TorusGrid grid(9);
    TseitinInstance inst = all_ones_instance(grid);
    CHECK(is_locally_consistent(grid, inst, PartialAssignment(inst.num_vars())));
}

TEST_CASE("a violated node is locally inconsistent") {
    TorusGrid grid(9);
    TseitinInstance inst = all_ones_instance(grid);
    PartialAssignment tau(inst.num_vars());
    int v = grid.node(4, 4);
    for (Dir d : kAllDirs)
        tau.set(grid.edge_from(v, d), 0); // parity 0, charge 1
    CHECK_FALSE(is_locally_consistent(grid, inst, tau));
}

TEST_CASE("three of four edges force the fourth") {
    TorusGrid grid(9);
    TseitinInstance inst = all_ones_instance(grid);
    PartialAssignment tau(inst.num_vars());
    int v = grid.node(4, 4);
    tau.set(grid.edge_from(v, Dir::Left), 0);
    tau.set(grid.edge_from(v, Dir::Right), 0);
    tau.set(grid.edge_from(v, Dir::Up), 0);
    CHECK(is_locally_consistent(grid, inst, tau));
    auto implied = locally_implied(grid, inst, tau, grid.edge_from(v, Dir::Down));
    REQUIRE(implied.has_value());
    CHECK(*implied == 1);
}

TEST_CASE("assigned variables are locally implied to their value") {
    TorusGrid grid(9);
    TseitinInstance inst = all_ones_instance(grid);
    PartialAssignment tau(inst.num_vars());
    tau.set(grid.edge_from(grid.node(2, 2), Dir::Right), 1);
    auto implied =
        locally_implied(grid, inst, tau, grid.edge_from(grid.node(2, 2), Dir::Right));
    REQUIRE(implied.has_value());
    CHECK(*implied == 1);
}

TEST_CASE("fresh variable on an empty assignment is free") {
    TorusGrid grid(9);
    TseitinInstance inst = all_ones_instance(grid);
    PartialAssignment tau(inst.num_vars());
    CHECK_FALSE(locally_implied(grid, inst, tau, 0).has_value());
}

TEST_CASE("locally implied value matches the enumeration oracle") {
    TorusGrid grid(9);
    TseitinInstance inst = all_ones_instance(grid);
    Rng rng(31);
    for (int trial = 0; trial < 60; ++trial) {
        PartialAssignment tau(inst.num_vars());
        int v = (int)rng.below(grid.num_nodes());
        int placed = 0;
        for (Dir d : kAllDirs) {
            if (placed >= 3)
                break;
            PartialAssignment attempt = tau;
            attempt.set(grid.edge_from(v, d), (int)rng.bit());
            if (is_locally_consistent(grid, inst, attempt)) {
                tau = attempt;
                ++placed;
            }
        }
        for (Dir d : kAllDirs) {
            int e = grid.edge_from(v, d);
            if (tau.assigns(e))
                continue;
            PartialAssignment t0 = tau, t1 = tau;
            t0.set(e, 0);
            t1.set(e, 1);
            bool ok0 = consistent_by_enumeration(grid, inst, t0);
            bool ok1 = consistent_by_enumeration(grid, inst, t1);
            auto implied = locally_implied(grid, inst, tau, e);
            if (ok0 && ok1)
                CHECK_FALSE(implied.has_value());
            else {
                REQUIRE(implied.has_value());
                CHECK(*implied == (ok1 ? 1 : 0));
            }
        }
    }
}

TEST_CASE("gf2 decision agrees with enumeration on random assignments") {
    TorusGrid grid(9);
    TseitinInstance inst = all_ones_instance(grid);
    Rng rng(17);
    int checked = 0;
    while (checked < 300) {
        PartialAssignment tau(inst.num_vars());
        int v = (int)rng.below(grid.num_nodes());
        int vars = 1 + (int)rng.below(6);
        // a cluster of assignments near one node keeps the closure small
        int cur = v;
        for (int i = 0; i < vars; ++i) {
            Dir d = (Dir)rng.below(4);
            tau.set(grid.edge_from(cur, d), (int)rng.bit());
            if (rng.bit())
                cur = grid.neighbor(cur, d);
        }
        if ((int)tau.support(inst.graph).size() > 6)
            continue;
        ++checked;
        CHECK(is_locally_consistent(grid, inst, tau) ==
              consistent_by_enumeration(grid, inst, tau));
    }
}

TEST_CASE("monotonicity: subsets of consistent assignments stay consistent") {
    TorusGrid grid(9);
    TseitinInstance inst = all_ones_instance(grid);
    Rng rng(41);
    int done = 0;
    while (done < 100) {
        PartialAssignment tau(inst.num_vars());
        int v = (int)rng.below(grid.num_nodes());
        for (int i = 0; i < 5; ++i) {
            Dir d = (Dir)rng.below(4);
            tau.set(grid.edge_from(v, d), (int)rng.bit());
            v = grid.neighbor(v, d);
        }
        if (!is_locally_consistent(grid, inst, tau))
            continue;
        ++done;
        PartialAssignment sub(inst.num_vars());
        int drop = (int)rng.below(inst.num_vars());
        for (int e = 0; e < inst.num_vars(); ++e)
            if (tau.assigns(e) && e != drop)
                sub.set(e, tau.value(e));
        CHECK(is_locally_consistent(grid, inst, sub));
    }
}

TEST_CASE("extension lemma holds for random consistent assignments") {
    TorusGrid grid(9);
    TseitinInstance inst = all_ones_instance(grid);
    Rng rng(53);
    int done = 0;
    while (done < 1000) {
        PartialAssignment tau(inst.num_vars());
        int v = (int)rng.below(grid.num_nodes());
        int vars = (int)rng.below(3);
        for (int i = 0; i < vars; ++i) {
            Dir d = (Dir)rng.below(4);
            tau.set(grid.edge_from(v, d), (int)rng.bit());
            v = grid.neighbor(v, d);
        }
        if ((int)tau.support(inst.graph).size() * 2 > grid.n())
            continue;
        if (!is_locally_consistent(grid, inst, tau))
            continue;
        ++done;
        int edge = (int)rng.below(inst.num_vars());
        PartialAssignment ext = extend_with_variable(grid, inst, tau, edge);
        CHECK(ext.assigns(edge));
        for (int e = 0; e < inst.num_vars(); ++e)
            if (tau.assigns(e))
                CHECK(ext.value(e) == tau.value(e));
        CHECK(is_locally_consistent(grid, inst, ext));
    }
}

TEST_CASE("extension rejects oversized supports") {
    TorusGrid grid(9);
    TseitinInstance inst = all_ones_instance(grid);
    PartialAssignment tau(inst.num_vars());
    for (int i = 0; i < 5; ++i)
        tau.set(grid.right_edge(grid.node(0, 2 * i)), 0);
    // support is 10 nodes > n/2
    CHECK_THROWS(extend_with_variable(grid, inst, tau, grid.down_edge(40)));
}

TEST_CASE("pairwise local consistency") {
    TorusGrid grid(9);
    TseitinInstance inst = all_ones_instance(grid);
    PartialAssignment t1(inst.num_vars()), t2(inst.num_vars());
    t1.set(0, 0);
    SUBCASE("empty second operand reduces to single consistency") {
        CHECK(pairwise_locally_consistent(grid, inst, t1, t2) ==
              is_locally_consistent(grid, inst, t1));
    }
    SUBCASE("direct conflict") {
        t2.set(0, 1);
        CHECK_FALSE(pairwise_locally_consistent(grid, inst, t1, t2));
    }
    SUBCASE("distant single assignments are consistent") {
        t2.set(grid.right_edge(grid.node(5, 5)), 1);
        CHECK(pairwise_locally_consistent(grid, inst, t1, t2));
    }
}

TEST_CASE("assignment text round trip") {
    PartialAssignment a(10);
    a.set(3, 1);
    a.set(7, 0);
    PartialAssignment b = PartialAssignment::from_text(a.to_text(), 10);
    CHECK(a == b);
}

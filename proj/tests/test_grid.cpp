#include "doctest.h"

#include <set>

#include "gsw/grid.hpp"

using namespace gsw;

TEST_CASE("torus sizes") {
    TorusGrid g(3);
    CHECK(g.num_nodes() == 9);
    CHECK(g.num_edges() == 18);
    CHECK_THROWS(TorusGrid(2));
    CHECK_THROWS(TorusGrid(4));
    CHECK_THROWS(TorusGrid(1));
}

TEST_CASE("wraparound neighbors of the corner") {
    TorusGrid g(3);
    std::set<int> nbrs;
    for (Dir d : kAllDirs)
        nbrs.insert(g.neighbor(g.node(0, 0), d));
    std::set<int> expect = {g.node(0, 1), g.node(0, 2), g.node(1, 0),
                            g.node(2, 0)};
    CHECK(nbrs == expect);
}

TEST_CASE("every node has degree 4") {
    TorusGrid g(5);
    Graph gr = g.as_graph();
    for (int v = 0; v < gr.num_nodes; ++v)
        CHECK(gr.incident[v].size() == 4);
    CHECK(gr.connected());
}

TEST_CASE("edge ids are consistent with edge_from") {
    TorusGrid g(5);
    for (int v = 0; v < g.num_nodes(); ++v) {
        for (Dir d : kAllDirs) {
            int e = g.edge_from(v, d);
            auto [a, b] = g.endpoints(e);
            CHECK(((a == v && b == g.neighbor(v, d)) ||
                   (b == v && a == g.neighbor(v, d))));
        }
    }
}

TEST_CASE("canonical edge form puts the smaller endpoint first") {
    TorusGrid g(3);
    int seam = g.right_edge(g.node(1, 2)); // wraps to column 0
    auto f = g.edge_form(seam);
    CHECK(f.a < f.b);
    CHECK(f.wraps);
    auto inner = g.edge_form(g.right_edge(g.node(1, 0)));
    CHECK_FALSE(inner.wraps);
}

#include "gsw/grid.hpp"

namespace gsw {

bool Graph::connected() const {
    if (num_nodes == 0)
        return false;
    std::vector<uint8_t> seen(num_nodes, 0);
    std::vector<int> stack = {0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int e : incident[v]) {
            int w = other_end(e, v);
            if (!seen[w]) {
                seen[w] = 1;
                ++count;
                stack.push_back(w);
            }
        }
    }
    return count == num_nodes;
}

TorusGrid::TorusGrid(int n) : n_(n) {
    if (n < 3 || n % 2 == 0)
        throw std::invalid_argument("torus size must be odd and >= 3, got " +
                                    std::to_string(n));
}

Graph TorusGrid::as_graph() const {
    Graph g;
    g.num_nodes = num_nodes();
    g.edges.reserve(num_edges());
    for (int v = 0; v < num_nodes(); ++v) {
        g.edges.push_back(endpoints(right_edge(v)));
        g.edges.push_back(endpoints(down_edge(v)));
    }
    g.finish();
    return g;
}

} // namespace gsw

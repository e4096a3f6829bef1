#ifndef GSW_GRID_HPP
#define GSW_GRID_HPP

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace gsw {

// Directions are relative to the grid layout: row index grows downwards.
enum class Dir : int { Left = 0, Right = 1, Up = 2, Down = 3 };

constexpr std::array<Dir, 4> kAllDirs = {Dir::Left, Dir::Right, Dir::Up,
                                         Dir::Down};

inline Dir opposite(Dir d) {
    switch (d) {
    case Dir::Left: return Dir::Right;
    case Dir::Right: return Dir::Left;
    case Dir::Up: return Dir::Down;
    default: return Dir::Up;
    }
}

inline const char* dir_name(Dir d) {
    switch (d) {
    case Dir::Left: return "left";
    case Dir::Right: return "right";
    case Dir::Up: return "up";
    default: return "down";
    }
}

// Connected graph with a fixed edge enumeration; nodes are 0..n-1.
struct Graph {
    int num_nodes = 0;
    std::vector<std::pair<int, int>> edges;
    std::vector<std::vector<int>> incident; // node -> edge ids

    void finish() {
        incident.assign(num_nodes, {});
        for (int e = 0; e < (int)edges.size(); ++e) {
            incident[edges[e].first].push_back(e);
            incident[edges[e].second].push_back(e);
        }
    }

    int other_end(int edge, int node) const {
        auto [a, b] = edges[edge];
        return a == node ? b : a;
    }

    bool connected() const;
};

// The n x n torus: node (i,j) with 0 <= i,j < n, edges between nodes whose
// coordinates differ by 1 mod n in one position.  Node ids are row-major,
// edge ids are 2*node + {0 = right edge, 1 = down edge}.
class TorusGrid {
public:
    explicit TorusGrid(int n);

    int n() const { return n_; }
    int num_nodes() const { return n_ * n_; }
    int num_edges() const { return 2 * n_ * n_; }

    int node(int row, int col) const {
        return mod(row) * n_ + mod(col);
    }
    int row_of(int v) const { return v / n_; }
    int col_of(int v) const { return v % n_; }

    int right_edge(int v) const { return 2 * v; }
    int down_edge(int v) const { return 2 * v + 1; }

    // the edge leaving v in direction d
    int edge_from(int v, Dir d) const {
        switch (d) {
        case Dir::Right: return right_edge(v);
        case Dir::Down: return down_edge(v);
        case Dir::Left: return right_edge(node(row_of(v), col_of(v) - 1));
        default: return down_edge(node(row_of(v) - 1, col_of(v)));
        }
    }

    int neighbor(int v, Dir d) const {
        switch (d) {
        case Dir::Right: return node(row_of(v), col_of(v) + 1);
        case Dir::Down: return node(row_of(v) + 1, col_of(v));
        case Dir::Left: return node(row_of(v), col_of(v) - 1);
        default: return node(row_of(v) - 1, col_of(v));
        }
    }

    std::pair<int, int> endpoints(int edge) const {
        int v = edge / 2;
        return {v, edge % 2 == 0 ? node(row_of(v), col_of(v) + 1)
                                 : node(row_of(v) + 1, col_of(v))};
    }

    // canonical display form: lexicographically smaller endpoint first,
    // plus a flag for seam-crossing edges
    struct EdgeForm {
        int a, b;
        bool wraps;
    };
    EdgeForm edge_form(int edge) const {
        auto [u, v] = endpoints(edge);
        bool w = edge % 2 == 0 ? col_of(u) == n_ - 1 : row_of(u) == n_ - 1;
        if (u > v)
            std::swap(u, v);
        return {u, v, w};
    }

    Graph as_graph() const;

    int mod(int x) const {
        x %= n_;
        return x < 0 ? x + n_ : x;
    }

private:
    int n_;
};

} // namespace gsw

#endif

#ifndef GSW_PARTITION_HPP
#define GSW_PARTITION_HPP

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "gsw/grid.hpp"

namespace gsw {

// center ell (0-based) of sub-square (sq_row, sq_col)
struct CenterId {
    int sq_row = 0, sq_col = 0, ell = 0;

    bool operator==(const CenterId&) const = default;
    auto operator<=>(const CenterId&) const = default;
};

// A path between centers in adjacent sub-squares: five non-empty segments
// that concatenate into a simple path.  Direction is relative to the first
// endpoint.
struct PathSpec {
    CenterId from, to;
    Dir direction = Dir::Down;
    std::vector<std::vector<int>> segments; // 5 edge-id lists
    std::vector<int> edges;                 // concatenation
};

// Partition of the n1 x n1 torus into n2 x n2 sub-squares with designated
// centers and inter-center paths.  Immutable after construction.
class SubSquarePartition {
public:
    // strict geometry needs D >= 40 (all margin arguments hold with room);
    // relaxed mode admits D >= 10 for brute-force testability and re-checks
    // the spacing constraints explicitly
    SubSquarePartition(int n1, int n2, bool relaxed = false);

    int n1() const { return n1_; }
    int n2() const { return n2_; }
    int D() const { return d_; }
    int delta() const { return delta_; }
    int num_squares() const { return n2_ * n2_; }
    int num_centers() const { return num_squares() * delta_; }
    const TorusGrid& grid() const { return grid_; }
    const TorusGrid& small_grid() const { return small_grid_; }

    int square_id(int sq_row, int sq_col) const {
        return small_grid_.node(sq_row, sq_col);
    }
    int center_id(const CenterId& c) const {
        return square_id(c.sq_row, c.sq_col) * delta_ + c.ell;
    }
    CenterId center_from_id(int cid) const {
        int sq = cid / delta_;
        return {small_grid_.row_of(sq), small_grid_.col_of(sq), cid % delta_};
    }
    int square_of_center(int cid) const { return cid / delta_; }

    // grid node of a center
    int center_node(const CenterId& c) const;
    int center_node(int cid) const { return center_node(center_from_id(cid)); }

    // sub-square of a grid node
    int square_of_node(int node) const;

    int neighbor_square(int sq, Dir d) const {
        return small_grid_.neighbor(sq, d);
    }

    // all paths, indexed by path id
    const std::vector<PathSpec>& paths() const { return paths_; }
    int num_paths() const { return (int)paths_.size(); }
    int path_between(const CenterId& a, const CenterId& b) const;
    int path_between_ids(int cid_a, int cid_b) const;

    // the path oriented from a towards b, direction determined by the
    // sub-square adjacency
    PathSpec oriented_path(const CenterId& a, const CenterId& b) const;

    // unique common endpoint of all paths through the edge, or -1 when the
    // edge lies on no path; dir is the shared direction relative to it
    int associated_center(int edge) const { return assoc_center_[edge]; }
    Dir associated_dir(int edge) const { return (Dir)assoc_dir_[edge]; }
    // partner center ids w with edge on path(assoc, w)
    const std::vector<int>& covering_partners(int edge) const {
        return partners_[edge];
    }

    // paths out of a center, by direction
    int path_from(int cid, Dir d, int partner_ell) const {
        return path_from_[(size_t)cid * 4 + (int)d][partner_ell];
    }

    int row_group_of(int row) const { return row_group_[row]; }
    int col_group_of(int col) const { return col_group_[col]; }

    void dump_geometry(std::ostream& out) const;

private:
    struct Band { // one row group or column group
        int start = 0, size = 0;
        int central_lo = 0, central_hi = 0; // positions within the band
        std::vector<int> centers;           // absolute row/col per ell
        std::vector<int> designated;        // absolute row/col per ell
    };

    void build_bands(std::vector<Band>& bands) const;
    PathSpec build_path(const CenterId& from, const CenterId& to,
                        Dir dir) const;
    void build_paths();

    int n1_, n2_, d_, delta_;
    bool relaxed_;
    TorusGrid grid_;
    TorusGrid small_grid_;
    std::vector<Band> rows_, cols_;
    std::vector<int> row_group_, col_group_;

    std::vector<PathSpec> paths_;
    std::map<std::pair<int, int>, int> path_index_; // (min cid,max cid)->id
    std::vector<std::vector<int>> path_from_;       // [cid*4+dir][ell]
    std::vector<int> assoc_center_;
    std::vector<int8_t> assoc_dir_;
    std::vector<std::vector<int>> partners_;
};

} // namespace gsw

#endif

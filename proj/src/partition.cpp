#include "gsw/partition.hpp"

#include <algorithm>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace gsw {

namespace {

[[noreturn]] void geometry_error(const std::string& what) {
    throw std::invalid_argument("partition geometry: " + what);
}

} // namespace

SubSquarePartition::SubSquarePartition(int n1, int n2, bool relaxed)
    : n1_(n1), n2_(n2), d_(n1 / n2), delta_((n1 / n2) / 5), relaxed_(relaxed),
      grid_(n1), small_grid_(n2) {
    if (n2 < 3 || n2 % 2 == 0 || n1 % 2 == 0 || n1 <= n2)
        geometry_error("need odd n1 > n2 >= 3");
    int d_min = relaxed ? 10 : 40;
    if (d_ < d_min)
        geometry_error("D = " + std::to_string(d_) + " below minimum " +
                       std::to_string(d_min));
    if (delta_ < 1)
        geometry_error("no centers fit (delta = 0)");

    build_bands(rows_);
    build_bands(cols_);

    row_group_.assign(n1_, -1);
    col_group_.assign(n1_, -1);
    for (int g = 0; g < n2_; ++g) {
        for (int k = 0; k < rows_[g].size; ++k)
            row_group_[rows_[g].start + k] = g;
        for (int k = 0; k < cols_[g].size; ++k)
            col_group_[cols_[g].start + k] = g;
    }

    build_paths();
}

void SubSquarePartition::build_bands(std::vector<Band>& bands) const {
    int rem = n1_ - d_ * n2_; // that many groups get one extra line
    bands.clear();
    int at = 0;
    for (int g = 0; g < n2_; ++g) {
        Band b;
        b.start = at;
        b.size = d_ + (g < rem ? 1 : 0); // larger groups first
        at += b.size;

        // central positions keep at least D/8 lines on both sides
        int lo = 0, hi = b.size - 1;
        while (8 * lo < d_)
            ++lo;
        while (8 * (b.size - 1 - hi) < d_)
            --hi;
        if (lo > hi)
            geometry_error("no central lines in a group");
        b.central_lo = lo;
        b.central_hi = hi;

        int ncentral = hi - lo + 1;
        for (int ell = 1; ell <= delta_; ++ell) {
            int idx = (int)(((2 * ell - 1) * (long long)ncentral) /
                            (2 * delta_));
            b.centers.push_back(b.start + lo + idx);
        }
        for (int i = 1; i < (int)b.centers.size(); ++i)
            if (b.centers[i] - b.centers[i - 1] < 3)
                geometry_error("center lines closer than 2 central lines");

        bands.push_back(b);
    }

    // designated lines live in the strip between consecutive central areas
    for (int g = 0; g < n2_; ++g) {
        Band& b = bands[g];
        const Band& next = bands[(g + 1) % n2_];
        int strip_start = b.start + b.central_hi + 1;
        int strip_len =
            (b.size - 1 - b.central_hi) + next.central_lo;
        if (strip_len < delta_)
            geometry_error("strip between central areas too small for the "
                           "designated lines");
        for (int ell = 0; ell < delta_; ++ell)
            b.designated.push_back((strip_start + ell) % n1_);
    }
}

int SubSquarePartition::center_node(const CenterId& c) const {
    return grid_.node(rows_[c.sq_row].centers[c.ell],
                      cols_[c.sq_col].centers[c.ell]);
}

int SubSquarePartition::square_of_node(int node) const {
    return square_id(row_group_[grid_.row_of(node)],
                     col_group_[grid_.col_of(node)]);
}

namespace {

// append the edges of a straight walk, step by step
void walk(const TorusGrid& g, int& node, Dir d, int steps,
          std::vector<int>& edges) {
    for (int i = 0; i < steps; ++i) {
        edges.push_back(g.edge_from(node, d));
        node = g.neighbor(node, d);
    }
}

int fwd_dist(int from, int to, int n) { // steps in increasing direction
    return ((to - from) % n + n) % n;
}

} // namespace

PathSpec SubSquarePartition::build_path(const CenterId& from,
                                        const CenterId& to, Dir dir) const {
    PathSpec p;
    p.from = from;
    p.to = to;
    p.direction = dir;
    p.segments.resize(5);

    const TorusGrid& g = grid_;
    int r1 = rows_[from.sq_row].centers[from.ell];
    int q1 = cols_[from.sq_col].centers[from.ell];
    int r2 = rows_[to.sq_row].centers[to.ell];
    int q2 = cols_[to.sq_col].centers[to.ell];

    if (dir == Dir::Down) {
        int rd = rows_[from.sq_row].designated[from.ell];
        int node = g.node(r1, q1);
        walk(g, node, Dir::Left, 1, p.segments[0]);
        walk(g, node, Dir::Down, fwd_dist(r1, rd, n1_), p.segments[1]);
        int delta_cols = q2 + 1 - (q1 - 1); // within one column group
        walk(g, node, delta_cols >= 0 ? Dir::Right : Dir::Left,
             std::abs(delta_cols), p.segments[2]);
        walk(g, node, Dir::Down, fwd_dist(rd, r2, n1_), p.segments[3]);
        walk(g, node, Dir::Left, 1, p.segments[4]);
        if (node != g.node(r2, q2))
            geometry_error("path does not reach its endpoint");
    } else if (dir == Dir::Right) {
        int cd = cols_[from.sq_col].designated[from.ell];
        int node = g.node(r1, q1);
        walk(g, node, Dir::Down, 1, p.segments[0]);
        walk(g, node, Dir::Right, fwd_dist(q1, cd, n1_), p.segments[1]);
        int delta_rows = (r2 - 1) - (r1 + 1); // within one row group
        walk(g, node, delta_rows >= 0 ? Dir::Down : Dir::Up,
             std::abs(delta_rows), p.segments[2]);
        walk(g, node, Dir::Right, fwd_dist(cd, q2, n1_), p.segments[3]);
        walk(g, node, Dir::Down, 1, p.segments[4]);
        if (node != g.node(r2, q2))
            geometry_error("path does not reach its endpoint");
    } else {
        PathSpec rev = build_path(to, from, opposite(dir));
        for (int s = 0; s < 5; ++s) {
            p.segments[s] = rev.segments[4 - s];
            std::reverse(p.segments[s].begin(), p.segments[s].end());
        }
    }

    for (const auto& seg : p.segments) {
        if (seg.empty())
            geometry_error("empty path segment");
        p.edges.insert(p.edges.end(), seg.begin(), seg.end());
    }
    return p;
}

void SubSquarePartition::build_paths() {
    // canonical orientation: Down and Right from every center
    for (int sq = 0; sq < num_squares(); ++sq) {
        int sr = small_grid_.row_of(sq), sc = small_grid_.col_of(sq);
        for (Dir d : {Dir::Down, Dir::Right}) {
            int tq = neighbor_square(sq, d);
            int tr = small_grid_.row_of(tq), tc = small_grid_.col_of(tq);
            for (int ell = 0; ell < delta_; ++ell) {
                for (int ell2 = 0; ell2 < delta_; ++ell2) {
                    CenterId a{sr, sc, ell}, b{tr, tc, ell2};
                    int id = (int)paths_.size();
                    paths_.push_back(build_path(a, b, d));
                    int ca = center_id(a), cb = center_id(b);
                    path_index_[{std::min(ca, cb), std::max(ca, cb)}] = id;
                }
            }
        }
    }

    path_from_.assign((size_t)num_centers() * 4, {});
    for (int sq = 0; sq < num_squares(); ++sq) {
        for (Dir d : kAllDirs) {
            int tq = neighbor_square(sq, d);
            for (int ell = 0; ell < delta_; ++ell) {
                int cid = sq * delta_ + ell;
                auto& lst = path_from_[(size_t)cid * 4 + (int)d];
                lst.resize(delta_);
                for (int ell2 = 0; ell2 < delta_; ++ell2)
                    lst[ell2] = path_between_ids(cid, tq * delta_ + ell2);
            }
        }
    }

    // associated centers: the one endpoint common to all covering paths;
    // built by enumeration, which re-proves the shared-endpoint property
    // for this particular geometry
    int ne = grid_.num_edges();
    assoc_center_.assign(ne, -1);
    assoc_dir_.assign(ne, 0);
    partners_.assign(ne, {});
    std::vector<std::set<int>> endpoint_sets(ne);
    for (int id = 0; id < (int)paths_.size(); ++id) {
        const PathSpec& p = paths_[id];
        int ca = center_id(p.from), cb = center_id(p.to);
        for (int s = 0; s < 5; ++s) {
            int owner = s <= 2 ? ca : cb;
            Dir owner_dir = s <= 2 ? p.direction : opposite(p.direction);
            int partner = s <= 2 ? cb : ca;
            for (int e : p.segments[s]) {
                if (assoc_center_[e] < 0) {
                    assoc_center_[e] = owner;
                    assoc_dir_[e] = (int8_t)owner_dir;
                } else if (assoc_center_[e] != owner ||
                           (Dir)assoc_dir_[e] != owner_dir) {
                    geometry_error(
                        "edge with inconsistent associated center");
                }
                partners_[e].push_back(partner);
            }
        }
        // cross-check: every edge of the path has one of its endpoints as
        // the associated center
        for (int e : p.edges)
            endpoint_sets[e].insert(ca), endpoint_sets[e].insert(cb);
    }
    for (int e = 0; e < ne; ++e) {
        if (assoc_center_[e] >= 0 &&
            !endpoint_sets[e].count(assoc_center_[e]))
            geometry_error("associated center is not a shared endpoint");
        std::sort(partners_[e].begin(), partners_[e].end());
        partners_[e].erase(
            std::unique(partners_[e].begin(), partners_[e].end()),
            partners_[e].end());
    }
}

int SubSquarePartition::path_between(const CenterId& a,
                                     const CenterId& b) const {
    return path_between_ids(center_id(a), center_id(b));
}

PathSpec SubSquarePartition::oriented_path(const CenterId& a,
                                           const CenterId& b) const {
    int sa = square_id(a.sq_row, a.sq_col);
    int sb = square_id(b.sq_row, b.sq_col);
    for (Dir d : kAllDirs)
        if (neighbor_square(sa, d) == sb)
            return build_path(a, b, d);
    throw std::invalid_argument(
        "oriented_path: centers are not in adjacent sub-squares");
}

int SubSquarePartition::path_between_ids(int cid_a, int cid_b) const {
    auto it = path_index_.find(
        {std::min(cid_a, cid_b), std::max(cid_a, cid_b)});
    if (it == path_index_.end())
        throw std::invalid_argument(
            "no path: centers are not in adjacent sub-squares");
    return it->second;
}

void SubSquarePartition::dump_geometry(std::ostream& out) const {
    out << "partition n1=" << n1_ << " n2=" << n2_ << " D=" << d_
        << " delta=" << delta_ << "\n";
    for (int i = 0; i < n2_; ++i) {
        for (int j = 0; j < n2_; ++j) {
            const Band& r = rows_[i];
            const Band& c = cols_[j];
            out << "square (" << i << "," << j << ")"
                << " rows [" << r.start << "," << r.start + r.size - 1 << "]"
                << " cols [" << c.start << "," << c.start + c.size - 1 << "]"
                << " central rows [" << r.start + r.central_lo << ","
                << r.start + r.central_hi << "]"
                << " central cols [" << c.start + c.central_lo << ","
                << c.start + c.central_hi << "]"
                << " centers";
            for (int ell = 0; ell < delta_; ++ell)
                out << " (" << r.centers[ell] << "," << c.centers[ell] << ")";
            out << "\n";
        }
    }
}

} // namespace gsw

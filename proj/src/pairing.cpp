#include "gsw/pairing.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

#include "gsw/gf2.hpp"

namespace gsw {

namespace {

using EdgeCount = std::map<std::pair<int, int>, int>; // (s<t) -> multiplicity

std::pair<int, int> key(int s, int t) {
    return {std::min(s, t), std::max(s, t)};
}

bool squares_adjacent(const SubSquarePartition& part, int a, int b) {
    for (Dir d : kAllDirs)
        if (part.neighbor_square(a, d) == b)
            return true;
    return false;
}

// Alternating augmentation: starting from a square with a stranded token,
// add a new edge, remove a matched one, and so on, until a square with
// spare demand absorbs the final new edge.  Depth-first with explicit path
// state so removals never exceed multiplicities.
bool augment_dfs(const SubSquarePartition& part, std::vector<int>& rem,
                 EdgeCount& matched, int from, int depth_cap) {
    std::vector<std::pair<int, int>> added;
    EdgeCount removed;
    std::set<int> on_path = {from};
    int final_square = -1;

    std::function<bool(int, int)> rec = [&](int s, int depth) -> bool {
        if (depth > depth_cap)
            return false;
        for (Dir d : kAllDirs) {
            int t = part.neighbor_square(s, d);
            // the start square still holds its own stranded token
            int required = t == from ? 2 : 1;
            if (t != s && rem[t] >= required) {
                added.push_back(key(s, t));
                final_square = t;
                return true;
            }
        }
        for (Dir d : kAllDirs) {
            int t = part.neighbor_square(s, d);
            if (t == s || on_path.count(t))
                continue;
            added.push_back(key(s, t));
            on_path.insert(t);
            for (Dir d2 : kAllDirs) {
                int u = part.neighbor_square(t, d2);
                if (u == t || on_path.count(u))
                    continue;
                auto it = matched.find(key(t, u));
                int avail = (it == matched.end() ? 0 : it->second);
                auto rit = removed.find(key(t, u));
                if (rit != removed.end())
                    avail -= rit->second;
                if (avail <= 0)
                    continue;
                removed[key(t, u)]++;
                on_path.insert(u);
                if (rec(u, depth + 1))
                    return true;
                on_path.erase(u);
                if (--removed[key(t, u)] == 0)
                    removed.erase(key(t, u));
            }
            on_path.erase(t);
            added.pop_back();
        }
        return false;
    };

    if (!rec(from, 0))
        return false;

    for (auto& [k2, c] : removed) {
        auto it = matched.find(k2);
        it->second -= c;
        if (it->second == 0)
            matched.erase(it);
    }
    for (auto& e : added)
        matched[e]++;
    rem[from]--;
    rem[final_square]--;
    return true;
}

struct SquareComponent { // square-level component skeleton
    bool star = false;
    int hub_square = -1;
    std::vector<int> squares; // edge: {a,b}; star: the 3 leaf squares
};

// counting construction for the regime where every square has at least 16
// alive centers; returns false when a feasibility check fails and the
// caller falls back to the generic matcher
bool counting_construction(const SubSquarePartition& part,
                           const std::vector<int>& b, int total,
                           EdgeCount& matched,
                           std::vector<SquareComponent>& stars) {
    int squares = part.num_squares();
    double a = (double)(total + squares) / squares;
    int m0 = (int)std::max(0.0, std::ceil(0.26 * a));
    const TorusGrid& sg = part.small_grid();

    Gf2System sys(sg.num_edges());
    for (int sq = 0; sq < squares; ++sq) {
        std::vector<int> vars;
        for (Dir d : kAllDirs)
            vars.push_back(sg.edge_from(sq, d));
        sys.add_row(vars, b[sq] % 2);
    }
    std::vector<uint8_t> y;
    if (!sys.solve(y))
        return false;

    auto edge_count = [&](int sq, Dir d) {
        return m0 + (int)y[sg.edge_from(sq, d)];
    };
    std::vector<int> c(squares);
    for (int sq = 0; sq < squares; ++sq) {
        int degree = 0;
        for (Dir d : kAllDirs)
            degree += edge_count(sq, (Dir)d);
        if (degree < b[sq] || (degree - b[sq]) % 2 != 0)
            return false;
        c[sq] = (degree - b[sq]) / 2;
        if (c[sq] > b[sq])
            return false;
    }

    // hub i at a square skips direction (i mod 4); slot entries hold the
    // hub index, or -1 for a plain degree-1 token
    std::vector<std::vector<std::vector<int>>> slots(
        squares, std::vector<std::vector<int>>(4));
    for (int sq = 0; sq < squares; ++sq) {
        for (int i = 0; i < c[sq]; ++i)
            for (int di = 0; di < 4; ++di)
                if (di != i % 4)
                    slots[sq][di].push_back(i);
        int plain = b[sq] - c[sq];
        for (int di = 0; di < 4; ++di) {
            int cap = edge_count(sq, (Dir)di);
            if ((int)slots[sq][di].size() > cap)
                return false;
            while ((int)slots[sq][di].size() < cap && plain > 0) {
                slots[sq][di].push_back(-1);
                --plain;
            }
        }
        if (plain != 0)
            return false;
    }

    // pair slot lists across each adjacent pair; hubs sit first on one side
    // and last on the other so they face plain tokens
    std::map<int, std::vector<int>> star_leaves; // sq*delta-ish id -> leaves
    auto star_key = [&](int sq, int i) { return sq * 64 + i; };
    EdgeCount plain_edges;
    for (int sq = 0; sq < squares; ++sq) {
        for (Dir d : {Dir::Right, Dir::Down}) {
            int t = part.neighbor_square(sq, d);
            auto mine = slots[sq][(int)d];
            auto theirs = slots[t][(int)opposite(d)];
            if (mine.size() != theirs.size())
                return false;
            std::reverse(theirs.begin(), theirs.end());
            for (size_t i = 0; i < mine.size(); ++i) {
                int hi = mine[i], hj = theirs[i];
                if (hi >= 0 && hj >= 0)
                    return false; // hub facing hub
                if (hi >= 0)
                    star_leaves[star_key(sq, hi)].push_back(t);
                else if (hj >= 0)
                    star_leaves[star_key(t, hj)].push_back(sq);
                else
                    plain_edges[key(sq, t)]++;
            }
        }
    }
    for (int sq = 0; sq < squares; ++sq) {
        for (int i = 0; i < c[sq]; ++i) {
            auto& leaves = star_leaves[star_key(sq, i)];
            std::set<int> distinct(leaves.begin(), leaves.end());
            distinct.insert(sq);
            if (leaves.size() != 3 || distinct.size() != 4)
                return false;
            SquareComponent sc;
            sc.star = true;
            sc.hub_square = sq;
            sc.squares = leaves;
            stars.push_back(sc);
        }
    }
    matched = plain_edges;
    return true;
}

} // namespace

GraphicalPairing build_pairing(const SubSquarePartition& part,
                               const std::vector<uint8_t>& alive,
                               const std::vector<int>& chosen) {
    int squares = part.num_squares();
    std::vector<std::vector<int>> tokens(squares);
    std::vector<uint8_t> is_chosen(part.num_centers(), 0);
    for (int cid : chosen)
        if (cid >= 0)
            is_chosen[cid] = 1;
    for (int cid = 0; cid < part.num_centers(); ++cid)
        if (alive[cid] && !is_chosen[cid])
            tokens[part.square_of_center(cid)].push_back(cid);

    std::vector<int> b(squares);
    int total = 0, min_alive = part.delta();
    for (int sq = 0; sq < squares; ++sq) {
        b[sq] = (int)tokens[sq].size();
        total += b[sq];
        min_alive = std::min(min_alive, b[sq] + (chosen[sq] >= 0 ? 1 : 0));
    }
    if (total == 0)
        return {};
    if (total % 2)
        throw std::runtime_error("pairing: odd number of non-chosen centers");

    EdgeCount matched;
    std::vector<SquareComponent> stars;
    bool built = min_alive >= 16 &&
                 counting_construction(part, b, total, matched, stars);

    if (!built) {
        matched.clear();
        stars.clear();
        std::vector<int> rem = b;
        for (;;) {
            int s = -1;
            for (int sq = 0; sq < squares; ++sq)
                if (rem[sq] > 0) {
                    s = sq;
                    break;
                }
            if (s < 0)
                break;

            // neighbor with the largest remaining demand
            int best = -1, best_rem = 0;
            for (Dir d : kAllDirs) {
                int t = part.neighbor_square(s, d);
                if (t != s && rem[t] > best_rem) {
                    best_rem = rem[t];
                    best = t;
                }
            }
            if (best >= 0) {
                rem[s]--;
                rem[best]--;
                matched[key(s, best)]++;
                continue;
            }
            if (augment_dfs(part, rem, matched, s, 8))
                continue;

            // star repair 1: an existing edge plus two stranded tokens in
            // distinct squares becomes a star
            bool repaired = false;
            std::vector<int> stranded;
            for (int sq = 0; sq < squares; ++sq)
                for (int i = 0; i < rem[sq]; ++i)
                    stranded.push_back(sq);
            std::vector<std::pair<int, int>> edge_keys;
            for (auto& [pr, cnt] : matched)
                if (cnt > 0)
                    edge_keys.push_back(pr);

            for (size_t i = 0; i < stranded.size() && !repaired; ++i) {
                for (size_t j = i + 1; j < stranded.size() && !repaired;
                     ++j) {
                    int su = stranded[i], sv = stranded[j];
                    if (su == sv)
                        continue;
                    for (auto pr : edge_keys) {
                        for (int orient = 0; orient < 2; ++orient) {
                            int hub = orient ? pr.second : pr.first;
                            int far = orient ? pr.first : pr.second;
                            std::set<int> leaf_sqs = {far, su, sv};
                            if (leaf_sqs.size() != 3 || leaf_sqs.count(hub))
                                continue;
                            if (!squares_adjacent(part, hub, su) ||
                                !squares_adjacent(part, hub, sv))
                                continue;
                            if (--matched[pr] == 0)
                                matched.erase(pr);
                            stars.push_back({true, hub, {far, su, sv}});
                            rem[su]--;
                            rem[sv]--;
                            repaired = true;
                            break;
                        }
                        if (repaired)
                            break;
                    }
                }
            }
            if (repaired)
                continue;

            // star repair 2: two stranded tokens in one square, fixed by
            // rearranging two existing edges
            for (int s0 = 0; s0 < squares && !repaired; ++s0) {
                if (rem[s0] < 2)
                    continue;
                for (size_t i1 = 0; i1 < edge_keys.size() && !repaired;
                     ++i1) {
                    for (size_t i2 = 0; i2 < edge_keys.size() && !repaired;
                         ++i2) {
                        auto p1 = edge_keys[i1], p2 = edge_keys[i2];
                        if (p1 == p2 && matched[p1] < 2)
                            continue;
                        for (int o1 = 0; o1 < 2 && !repaired; ++o1) {
                            int hub = o1 ? p1.second : p1.first;
                            int leaf1 = o1 ? p1.first : p1.second;
                            if (!squares_adjacent(part, hub, s0))
                                continue;
                            for (int o2 = 0; o2 < 2 && !repaired; ++o2) {
                                int t2 = o2 ? p2.second : p2.first;
                                int leaf2 = o2 ? p2.first : p2.second;
                                if (!squares_adjacent(part, t2, s0) ||
                                    !squares_adjacent(part, hub, leaf2))
                                    continue;
                                std::set<int> sqs = {hub, leaf1, s0, leaf2};
                                if (sqs.size() != 4)
                                    continue;
                                matched[p1]--;
                                matched[p2]--;
                                if (matched[p1] == 0)
                                    matched.erase(p1);
                                if (matched.count(p2) && matched[p2] == 0)
                                    matched.erase(p2);
                                matched[key(t2, s0)]++;
                                stars.push_back(
                                    {true, hub, {leaf1, s0, leaf2}});
                                rem[s0] -= 2;
                                repaired = true;
                            }
                        }
                    }
                }
            }
            if (!repaired)
                throw std::runtime_error(
                    "pairing: stranded non-chosen centers admit no edge or "
                    "star component");
        }
    }

    // hand out concrete center tokens in canonical order
    std::vector<size_t> next(squares, 0);
    auto take = [&](int sq) {
        if (next[sq] >= tokens[sq].size())
            throw std::logic_error("pairing: token bookkeeping off");
        return tokens[sq][next[sq]++];
    };
    GraphicalPairing out;
    for (const SquareComponent& sc : stars) {
        PairingComponent pc;
        pc.star = true;
        pc.centers.push_back(take(sc.hub_square));
        for (int leaf : sc.squares)
            pc.centers.push_back(take(leaf));
        out.components.push_back(std::move(pc));
    }
    for (auto& [pr, cnt] : matched) {
        for (int i = 0; i < cnt; ++i) {
            PairingComponent pc;
            pc.centers.push_back(take(pr.first));
            pc.centers.push_back(take(pr.second));
            out.components.push_back(std::move(pc));
        }
    }
    validate_pairing(part, alive, chosen, out);
    return out;
}

void validate_pairing(const SubSquarePartition& part,
                      const std::vector<uint8_t>& alive,
                      const std::vector<int>& chosen,
                      const GraphicalPairing& pairing) {
    std::vector<uint8_t> is_chosen(part.num_centers(), 0);
    for (int cid : chosen)
        if (cid >= 0)
            is_chosen[cid] = 1;
    std::vector<int> covered(part.num_centers(), 0);
    for (const PairingComponent& comp : pairing.components) {
        size_t want = comp.star ? 4 : 2;
        if (comp.centers.size() != want)
            throw std::runtime_error("pairing: component of wrong size");
        std::set<int> sqs;
        for (int cid : comp.centers) {
            if (!alive[cid] || is_chosen[cid])
                throw std::runtime_error(
                    "pairing: component touches a chosen or dead center");
            covered[cid]++;
            sqs.insert(part.square_of_center(cid));
        }
        if (sqs.size() != comp.centers.size())
            throw std::runtime_error(
                "pairing: component centers share a sub-square");
        if (comp.star) {
            for (int i = 1; i < 4; ++i)
                if (!squares_adjacent(part,
                                      part.square_of_center(comp.centers[0]),
                                      part.square_of_center(comp.centers[i])))
                    throw std::runtime_error(
                        "pairing: star leaf not adjacent to its hub");
        } else if (!squares_adjacent(
                       part, part.square_of_center(comp.centers[0]),
                       part.square_of_center(comp.centers[1]))) {
            throw std::runtime_error(
                "pairing: edge between non-adjacent sub-squares");
        }
    }
    for (int cid = 0; cid < part.num_centers(); ++cid) {
        int want = alive[cid] && !is_chosen[cid] ? 1 : 0;
        if (covered[cid] != want)
            throw std::runtime_error(
                "pairing: a non-chosen center is not covered exactly once");
    }
}

} // namespace gsw

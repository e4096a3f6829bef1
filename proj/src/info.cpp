#include "gsw/info.hpp"

#include <algorithm>
#include <stdexcept>

namespace gsw {

namespace {

Dir dir_between_squares(const SubSquarePartition& part, int sa, int sb) {
    for (Dir d : kAllDirs)
        if (part.neighbor_square(sa, d) == sb)
            return d;
    throw std::invalid_argument("info: centers not in adjacent sub-squares");
}

} // namespace

bool InfoSet::add_nonedge(int center, Dir d) {
    auto [it, inserted] = slots_.insert({{center, (int)d}, -1});
    return inserted || it->second == -1;
}

bool InfoSet::add_edge(const SubSquarePartition& part, int v, int w) {
    Dir dv = dir_between_squares(part, part.square_of_center(v),
                                 part.square_of_center(w));
    Dir dw = opposite(dv);
    auto iv = slots_.find({v, (int)dv});
    if (iv != slots_.end() && iv->second != w)
        return false;
    auto iw = slots_.find({w, (int)dw});
    if (iw != slots_.end() && iw->second != v)
        return false;
    slots_[{v, (int)dv}] = w;
    slots_[{w, (int)dw}] = v;
    return true;
}

bool InfoSet::add_piece(const SubSquarePartition& part, const InfoPiece& p) {
    if (p.is_edge())
        return add_edge(part, p.center, p.partner);
    return add_nonedge(p.center, p.dir);
}

bool InfoSet::merge(const SubSquarePartition& part, const InfoSet& other) {
    for (const auto& [key, partner] : other.slots_) {
        InfoPiece p{key.first, (Dir)key.second, partner};
        if (partner >= 0 ? !add_edge(part, key.first, partner)
                         : !add_nonedge(key.first, (Dir)key.second))
            return false;
    }
    return true;
}

std::optional<InfoPiece> InfoSet::piece_at(int center, Dir d) const {
    auto it = slots_.find({center, (int)d});
    if (it == slots_.end())
        return std::nullopt;
    return InfoPiece{center, d, it->second};
}

bool InfoSet::contains(const InfoPiece& p) const {
    auto it = slots_.find({p.center, (int)p.dir});
    return it != slots_.end() && it->second == p.partner;
}

void InfoSet::remove_piece(const InfoPiece& p) {
    slots_.erase({p.center, (int)p.dir});
    if (p.is_edge()) {
        // drop the mirrored slot as well
        for (auto it = slots_.begin(); it != slots_.end(); ++it) {
            if (it->first.first == p.partner && it->second == p.center) {
                slots_.erase(it);
                break;
            }
        }
    }
}

int InfoSet::dirs_present(int center) const {
    int n = 0;
    for (Dir d : kAllDirs)
        n += has(center, d);
    return n;
}

int InfoSet::edges_at(int center) const {
    int n = 0;
    for (Dir d : kAllDirs) {
        auto it = slots_.find({center, (int)d});
        n += it != slots_.end() && it->second >= 0;
    }
    return n;
}

bool InfoSet::closed_at(int center) const {
    return dirs_present(center) == 4;
}

bool InfoSet::locally_consistent() const {
    // slot structure rules out two pieces in one direction; it remains to
    // check the odd-edge rule at closed centers
    for (int v : support())
        if (closed_at(v) && edges_at(v) % 2 == 0)
            return false;
    return true;
}

std::vector<int> InfoSet::support() const {
    std::vector<int> out;
    for (const auto& [key, partner] : slots_)
        out.push_back(key.first);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<InfoPiece> InfoSet::pieces() const {
    std::vector<InfoPiece> out;
    for (const auto& [key, partner] : slots_)
        out.push_back({key.first, (Dir)key.second, partner});
    return out;
}

std::vector<std::pair<int, int>> InfoSet::edges() const {
    std::vector<std::pair<int, int>> out;
    for (const auto& [key, partner] : slots_) {
        if (partner >= 0 && key.first < partner)
            out.push_back({key.first, partner});
    }
    return out;
}

std::optional<int> forces(const PartialRestriction& rho, const InfoSet& info,
                          int edge) {
    const SubSquarePartition& part = *rho.part;
    int v = part.associated_center(edge);
    if (v < 0 || !rho.is_alive(v))
        return rho.base[edge];
    if (!info.closed_at(v))
        return std::nullopt;
    Dir d = part.associated_dir(edge);
    int partner = info.piece(v, d);
    if (partner >= 0) {
        const auto& covering = part.covering_partners(edge);
        if (std::binary_search(covering.begin(), covering.end(), partner))
            return 1 - rho.base[edge];
    }
    return rho.base[edge];
}

PartialRestriction apply_info(const PartialRestriction& rho,
                              const InfoSet& info) {
    if (!info.locally_consistent())
        throw std::invalid_argument("apply_info: inconsistent information");
    const SubSquarePartition& part = *rho.part;
    PartialRestriction out = rho;
    for (int v : info.support()) {
        if (!rho.is_alive(v))
            throw std::invalid_argument(
                "apply_info: information on a dead center");
        if (info.closed_at(v))
            out.alive[v] = 0;
        else if (info.edges_at(v) % 2 != 0)
            throw std::invalid_argument(
                "apply_info: odd open edge count at a surviving center");
    }
    for (auto [a, b] : info.edges()) {
        int pid = part.path_between_ids(a, b);
        for (int e : part.paths()[pid].edges)
            out.base[e] ^= 1;
    }
    out.chosen = chosen_from_alive(part, out.alive);
    return out;
}

Signature Signature::of(const SubSquarePartition& part, const InfoSet& j,
                        int center, bool chosen) {
    (void)part;
    Signature s;
    if (chosen)
        s.bits |= 1 << 8;
    for (Dir d : kAllDirs) {
        if (auto p = j.piece_at(center, d)) {
            s.bits |= 1 << (4 + sig_index(d));
            if (p->is_edge())
                s.bits |= 1 << sig_index(d);
        }
    }
    return s;
}

} // namespace gsw

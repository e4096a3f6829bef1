#include "gsw/encode.hpp"
#include "gsw/multi.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

namespace gsw {

int index_width(int count) {
    int w = 0;
    while ((1 << w) < count)
        ++w;
    return w;
}

void BitStream::write(std::ostream& out, const std::string& header) const {
    out << header << "\n" << bits.size() << "\n";
    for (uint8_t b : bits)
        out << (int)b;
    out << "\n";
}

BitStream BitStream::read(std::istream& in, std::string* header) {
    BitStream s;
    std::string line;
    if (!std::getline(in, line))
        throw DecodeError("transcript: missing header");
    if (header)
        *header = line;
    size_t n;
    in >> n;
    std::string data;
    in >> data;
    if (data.size() != n)
        throw DecodeError("transcript: length mismatch");
    for (char c : data)
        s.bits.push_back(c == '1');
    return s;
}

namespace {

// -------- component shape table: 4 edges + 4 star hubs + 12 star leaves --

struct Shape {
    enum Kind { Edge, Hub, Leaf } kind;
    Dir d1;          // edge: partner dir; hub: missing dir; leaf: hub dir
    Dir d2 = Dir::Left, d3 = Dir::Left; // leaf: the hub's other leaf dirs
};

const std::vector<Shape>& shape_table() {
    static const std::vector<Shape> table = [] {
        std::vector<Shape> t;
        for (Dir d : kAllDirs)
            t.push_back({Shape::Edge, d});
        for (Dir d : kAllDirs)
            t.push_back({Shape::Hub, d});
        for (Dir d : kAllDirs) {
            std::vector<Dir> rest;
            for (Dir o : kAllDirs)
                if (o != opposite(d))
                    rest.push_back(o);
            for (size_t i = 0; i < rest.size(); ++i)
                for (size_t k = i + 1; k < rest.size(); ++k)
                    t.push_back({Shape::Leaf, d, rest[i], rest[k]});
        }
        return t;
    }();
    return table;
}

Dir dir_between(const SubSquarePartition& part, int sq_a, int sq_b) {
    for (Dir d : kAllDirs)
        if (part.neighbor_square(sq_a, d) == sq_b)
            return d;
    throw std::logic_error("encode: squares not adjacent");
}

int shape_of(const SubSquarePartition& part, const PairingComponent& comp,
             int v) {
    const auto& table = shape_table();
    int sqv = part.square_of_center(v);
    if (!comp.star) {
        int other = comp.centers[0] == v ? comp.centers[1] : comp.centers[0];
        Dir d = dir_between(part, sqv, part.square_of_center(other));
        for (int i = 0; i < (int)table.size(); ++i)
            if (table[i].kind == Shape::Edge && table[i].d1 == d)
                return i;
    } else if (comp.centers[0] == v) {
        int present = 0;
        for (int i = 1; i < 4; ++i) {
            Dir d = dir_between(part, sqv,
                                part.square_of_center(comp.centers[i]));
            present |= 1 << (int)d;
        }
        for (int i = 0; i < (int)table.size(); ++i)
            if (table[i].kind == Shape::Hub &&
                !(present & (1 << (int)table[i].d1)))
                return i;
    } else {
        int hub = comp.centers[0];
        int sqh = part.square_of_center(hub);
        Dir dh = dir_between(part, sqv, sqh);
        std::vector<Dir> others;
        for (int i = 1; i < 4; ++i) {
            if (comp.centers[i] == v)
                continue;
            others.push_back(dir_between(
                part, sqh, part.square_of_center(comp.centers[i])));
        }
        std::sort(others.begin(), others.end(),
                  [](Dir a, Dir b) { return (int)a < (int)b; });
        for (int i = 0; i < (int)table.size(); ++i) {
            const Shape& s = table[i];
            if (s.kind != Shape::Leaf || s.d1 != dh)
                continue;
            Dir lo = (int)s.d2 < (int)s.d3 ? s.d2 : s.d3;
            Dir hi = (int)s.d2 < (int)s.d3 ? s.d3 : s.d2;
            if (others.size() == 2 && others[0] == lo && others[1] == hi)
                return i;
        }
    }
    throw std::logic_error("encode: component shape not in the table");
}

// -------- ground truth available to the encoder --------------------------

struct Truth {
    const SwitchContext* ctx = nullptr;
    std::vector<StageRecord> stages;
    std::map<int, int> center_stage;
    std::map<int, Signature> center_sig;
    std::map<InfoPiece, int> piece_stage;
    // multi-switch extras
    const std::vector<RoundRecord>* rounds = nullptr;
    const PartialAssignment* capped_full = nullptr;

    Truth(const SwitchContext& c, std::vector<StageRecord> st)
        : ctx(&c), stages(std::move(st)) {
        for (int j = 0; j < (int)stages.size(); ++j) {
            for (int v : stages[j].forcing.support()) {
                center_stage[v] = j;
                center_sig[v] = Signature::of(*c.part, stages[j].forcing, v,
                                              c.rho.is_chosen(v));
            }
            for (const InfoPiece& p : stages[j].forcing.pieces())
                piece_stage[p] = j;
        }
    }

    bool future_shared(const InfoPiece& p, int j) const {
        auto it = piece_stage.find(p);
        return it != piece_stage.end() && it->second > j;
    }
};

struct Oracle {
    BitStream* enc = nullptr;
    BitStream* dec = nullptr;

    int bit(const std::function<int()>& truth) {
        if (enc) {
            int b = truth() & 1;
            enc->put(b);
            return b;
        }
        return dec->get();
    }
    uint32_t value(int width, const std::function<uint32_t()>& truth) {
        if (enc) {
            uint32_t v = truth();
            enc->put_int(v, width);
            return v;
        }
        return dec->get_int(width);
    }
};

// -------- the reconstruction skeleton ------------------------------------

struct Recon {
    const SubSquarePartition& part;
    std::vector<std::vector<DTree>> formulas;
    int s, t;
    Oracle oracle;
    const Truth* truth;

    TseitinInstance small_inst;
    std::vector<std::vector<std::vector<Branch>>> formula_branches;

    std::vector<uint8_t> base;
    std::vector<uint8_t> alive_star;
    InfoSet istar_ans, istar_comp;
    std::set<int> exposed;
    std::map<int, Signature> sigs;
    std::set<int> disappeared;
    std::map<int, int> known_chosen;
    int stage = 0;
    std::vector<int> round_filled; // variables whose pieces this round set

    Recon(const SubSquarePartition& p, std::vector<std::vector<DTree>> fs,
          int s_, int t_, const PartialRestriction& rho_star, Oracle o,
          const Truth* tru)
        : part(p), formulas(std::move(fs)), s(s_), t(t_), oracle(o),
          truth(tru), small_inst(all_ones_instance(p.small_grid())),
          base(rho_star.base), alive_star(rho_star.alive) {
        for (const auto& trees : formulas) {
            formula_branches.push_back({});
            for (const DTree& dt : trees)
                formula_branches.back().push_back(
                    branches(dt, p.grid().num_edges()));
        }
    }

    int cap_threshold() const { return (s + 3) / 4; }

    void flip_path(int a, int b) {
        int pid = part.path_between_ids(a, b);
        for (int e : part.paths()[pid].edges)
            base[e] ^= 1;
    }

    bool traversed(const Branch& psi) const {
        for (int x : psi.order) {
            int v = part.associated_center(x);
            if (v >= 0 && alive_star[v])
                return false;
            if (base[x] != psi.assignment.value(x))
                return false;
        }
        return true;
    }

    int y_var(int sq, Dir d) const {
        return part.small_grid().edge_from(sq, d);
    }

    bool conflict(const Branch& psi) const {
        std::set<int> assoc;
        for (int x : psi.order) {
            int v = part.associated_center(x);
            if (v >= 0)
                assoc.insert(v);
        }
        // partial direction coverage at an associated center
        for (int v : assoc) {
            int n = 0;
            auto sit = sigs.find(v);
            for (Dir d : kAllDirs) {
                if (istar_ans.has(v, d) || istar_comp.has(v, d) ||
                    (sit != sigs.end() && sit->second.present(d)))
                    ++n;
            }
            if (n > 0 && n < 4)
                return true;
        }
        // the induced assignment on chosen path variables
        PartialAssignment y(small_inst.num_vars());
        bool clash = false;
        auto put = [&](int var, int val) {
            if (y.assigns(var)) {
                if (y.value(var) != val)
                    clash = true;
            } else {
                y.set(var, val);
            }
        };
        for (const InfoPiece& p : istar_ans.pieces()) {
            int sq = part.square_of_center(p.center);
            put(y_var(sq, p.dir), p.is_edge() ? 0 : 1);
        }
        for (int v : assoc) {
            auto sit = sigs.find(v);
            if (sit == sigs.end() || !sit->second.chosen())
                continue;
            int sq = part.square_of_center(v);
            for (Dir d : kAllDirs)
                if (sit->second.present(d))
                    put(y_var(sq, d), sit->second.edge(d) ? 0 : 1);
        }
        if (clash)
            return true;
        return !is_locally_consistent(part.small_grid(), small_inst, y,
                                      LcMode::Relaxed);
    }

    std::vector<int> present_centers(int sq) const {
        std::vector<int> out;
        for (int ell = 0; ell < part.delta(); ++ell) {
            int cid = sq * part.delta() + ell;
            if (alive_star[cid] || sigs.count(cid))
                out.push_back(cid);
        }
        return out;
    }

    int get_center(int sq, bool chosen_target,
                   const std::function<int()>& truth_center) {
        std::vector<int> present = present_centers(sq);
        if (chosen_target) {
            int candidate = present.empty() ? -1 : present.front();
            int known = oracle.bit(
                [&] { return candidate >= 0 && truth_center() == candidate; });
            int cid;
            if (known) {
                if (candidate < 0)
                    throw DecodeError("known chosen center in empty square");
                cid = candidate;
            } else {
                uint32_t ell = oracle.value(
                    index_width(part.delta()),
                    [&] { return (uint32_t)(truth_center() % part.delta()); });
                if ((int)ell >= part.delta())
                    throw DecodeError("center index out of range");
                cid = sq * part.delta() + (int)ell;
            }
            known_chosen[sq] = cid;
            return cid;
        }
        int known = oracle.bit([&] {
            int target = truth_center();
            return std::find(present.begin(), present.end(), target) !=
                   present.end();
        });
        if (known) {
            uint32_t idx =
                oracle.value(index_width((int)present.size()), [&] {
                    int target = truth_center();
                    return (uint32_t)(std::find(present.begin(),
                                                present.end(), target) -
                                      present.begin());
                });
            if (idx >= present.size())
                throw DecodeError("present-center index out of range");
            return present[idx];
        }
        uint32_t ell = oracle.value(
            index_width(part.delta()),
            [&] { return (uint32_t)(truth_center() % part.delta()); });
        if ((int)ell >= part.delta())
            throw DecodeError("center index out of range");
        return sq * part.delta() + (int)ell;
    }

    // returns false when the stage hit the global cap before its queries
    bool recover_stage(const Branch& psi) {
        if (truth && stage >= (int)truth->stages.size())
            throw std::logic_error("encode: more stages than the run had");
        const StageRecord* ts = truth ? &truth->stages[stage] : nullptr;

        std::set<int> assoc;
        for (int x : psi.order) {
            int v = part.associated_center(x);
            if (v >= 0)
                assoc.insert(v);
        }
        std::vector<std::pair<int, Signature>> fresh;
        for (int v : assoc)
            if (sigs.count(v) && !exposed.count(v))
                fresh.push_back({v, sigs[v]});

        InfoSet j;
        std::set<int> j_chosen;
        std::vector<InfoSet> comp_sets;

        for (auto& [v, sig] : fresh) {
            if (!sig.chosen())
                continue;
            j_chosen.insert(v);
            known_chosen[part.square_of_center(v)] = v;
            for (Dir d : kAllDirs) {
                if (!sig.present(d) || j.has(v, d))
                    continue;
                if (sig.edge(d)) {
                    int sq = part.neighbor_square(part.square_of_center(v), d);
                    int u = get_center(sq, true, [&, v2 = v, d2 = d] {
                        auto p = ts->forcing.piece_at(v2, d2);
                        return p ? p->partner : -1;
                    });
                    if (!j.add_edge(part, v, u))
                        throw DecodeError("forcing edge conflicts");
                    j_chosen.insert(u);
                } else if (!j.add_nonedge(v, d)) {
                    throw DecodeError("forcing non-edge conflicts");
                }
            }
        }
        const auto& table = shape_table();
        for (auto& [v, sig] : fresh) {
            if (sig.chosen())
                continue;
            {
                auto supp = j.support();
                if (std::binary_search(supp.begin(), supp.end(), v))
                    continue;
            }
            uint32_t sh = oracle.value(5, [&, v2 = v] {
                int ci = truth->ctx->comp_of_center[v2];
                return (uint32_t)shape_of(
                    part, truth->ctx->pairing.components[ci], v2);
            });
            if (sh >= table.size())
                throw DecodeError("component shape out of range");
            const Shape& shape = table[sh];
            int sqv = part.square_of_center(v);
            auto member = [&, v2 = v](int sq) {
                return get_center(sq, false, [&, sq, v2] {
                    int ci = truth->ctx->comp_of_center[v2];
                    for (int c : truth->ctx->pairing.components[ci].centers)
                        if (part.square_of_center(c) == sq)
                            return c;
                    throw std::logic_error(
                        "encode: component member missing in its square");
                });
            };
            int hub;
            std::vector<int> leaves;
            if (shape.kind == Shape::Edge) {
                int other = member(part.neighbor_square(sqv, shape.d1));
                InfoSet comp;
                if (!comp.add_edge(part, v, other))
                    throw DecodeError("component edge conflicts");
                for (Dir d : kAllDirs) {
                    comp.add_nonedge(v, d);
                    comp.add_nonedge(other, d);
                }
                comp_sets.push_back(comp);
                if (!j.merge(part, comp))
                    throw DecodeError("component conflicts with forcing");
                continue;
            }
            if (shape.kind == Shape::Hub) {
                hub = v;
                for (Dir d : kAllDirs) {
                    if (d == shape.d1)
                        continue;
                    leaves.push_back(member(part.neighbor_square(sqv, d)));
                }
            } else {
                int hub_sq = part.neighbor_square(sqv, shape.d1);
                hub = member(hub_sq);
                leaves.push_back(v);
                std::vector<Dir> ds = {shape.d2, shape.d3};
                std::sort(ds.begin(), ds.end(),
                          [](Dir a, Dir b) { return (int)a < (int)b; });
                for (Dir d : ds)
                    leaves.push_back(member(part.neighbor_square(hub_sq, d)));
            }
            InfoSet comp;
            for (int leaf : leaves)
                if (!comp.add_edge(part, hub, leaf))
                    throw DecodeError("component edge conflicts");
            for (int m : comp.support())
                for (Dir d : kAllDirs)
                    comp.add_nonedge(m, d);
            if (!comp.locally_consistent())
                throw DecodeError("recovered component inconsistent");
            comp_sets.push_back(comp);
            if (!j.merge(part, comp))
                throw DecodeError("component conflicts with forcing");
        }

        if (ts && !(j == ts->forcing))
            throw std::logic_error(
                "encode: recovered forcing information diverges");

        // undo the stage's flips: edges of J except pairing components and
        // pieces shared with the collected information
        std::set<std::pair<int, int>> comp_edges;
        for (const InfoSet& comp : comp_sets)
            for (auto e : comp.edges())
                comp_edges.insert(e);
        for (auto [ea, eb] : j.edges()) {
            if (comp_edges.count({ea, eb}))
                continue;
            if (exposed.count(ea) || exposed.count(eb))
                continue;
            flip_path(ea, eb);
        }

        for (int v : j.support())
            if (j.edges_at(v) % 2 == 1)
                disappeared.insert(v);

        std::set<int> s_j;
        for (int v : j.support())
            s_j.insert(v);
        std::set<int> sj_chosen = j_chosen;
        for (int u : j_chosen) {
            int usq = part.square_of_center(u);
            for (Dir d : kAllDirs) {
                int sq = part.neighbor_square(usq, d);
                int c;
                auto kit = known_chosen.find(sq);
                if (kit != known_chosen.end())
                    c = kit->second;
                else
                    c = get_center(sq, true,
                                   [&] { return truth->ctx->rho.chosen[sq]; });
                s_j.insert(c);
                sj_chosen.insert(c);
            }
        }

        std::vector<int> fresh_exposed;
        for (int v : s_j)
            if (!exposed.count(v))
                fresh_exposed.push_back(v);
        std::sort(fresh_exposed.begin(), fresh_exposed.end());

        bool final_stage =
            (int)(exposed.size() + fresh_exposed.size()) >= cap_threshold();

        // forcing pieces shared with earlier answers re-enter the
        // information set as this stage is undone
        for (const InfoPiece& p : j.pieces()) {
            bool incident_old = exposed.count(p.center) ||
                                (p.is_edge() && exposed.count(p.partner));
            if (!incident_old)
                continue;
            if (!istar_ans.add_piece(part, p))
                throw DecodeError("shared piece conflicts with answers");
            round_filled.push_back(
                y_var(part.square_of_center(p.center), p.dir));
        }
        for (const InfoSet& comp : comp_sets)
            if (!istar_comp.merge(part, comp))
                throw DecodeError("component conflicts with answers");

        if (!final_stage) {
            for (int u : fresh_exposed) {
                if (!sj_chosen.count(u) || sigs.count(u))
                    continue;
                int fut = oracle.bit([&, u] {
                    auto it = truth->center_stage.find(u);
                    return it != truth->center_stage.end() &&
                           it->second > stage;
                });
                if (fut) {
                    uint32_t sgbits = oracle.value(9, [&, u] {
                        return (uint32_t)truth->center_sig.at(u).bits;
                    });
                    sigs[u] = Signature{(uint16_t)sgbits};
                    if (sigs[u].chosen())
                        known_chosen[part.square_of_center(u)] = u;
                }
            }
            for (int u : fresh_exposed) {
                if (!sj_chosen.count(u))
                    continue;
                int usq = part.square_of_center(u);
                for (Dir d : kAllDirs) {
                    if (istar_ans.has(u, d) || istar_comp.has(u, d))
                        continue;
                    uint32_t code = oracle.value(2, [&, u, d] {
                        auto p = ts->info_added.piece_at(u, d);
                        if (!p)
                            throw std::logic_error(
                                "encode: missing stage answer");
                        if (truth->future_shared(*p, stage))
                            return (uint32_t)0;
                        return (uint32_t)(p->is_edge() ? 2 : 1);
                    });
                    if (code == 0)
                        continue;
                    if (code == 1) {
                        if (!istar_ans.add_nonedge(u, d))
                            throw DecodeError("answer non-edge conflicts");
                        round_filled.push_back(y_var(usq, d));
                        continue;
                    }
                    if (code != 2)
                        throw DecodeError("invalid answer code");
                    int sq = part.neighbor_square(usq, d);
                    int w;
                    auto kit = known_chosen.find(sq);
                    if (kit != known_chosen.end())
                        w = kit->second;
                    else
                        w = get_center(sq, true, [&, u, d] {
                            auto p = ts->info_added.piece_at(u, d);
                            return p ? p->partner : -1;
                        });
                    if (!istar_ans.add_edge(part, u, w))
                        throw DecodeError("answer edge conflicts");
                    flip_path(u, w);
                    round_filled.push_back(y_var(usq, d));
                }
            }
        }

        for (auto& [v, sig] : fresh)
            sigs.erase(v);
        for (int v : s_j)
            exposed.insert(v);
        ++stage;
        return !final_stage;
    }

    // finds and recovers the next stage of a formula; true when one was
    // processed, with *answered telling whether its queries exist
    bool next_stage(int fj, bool* answered) {
        for (int ti = 0; ti < (int)formulas[fj].size(); ++ti) {
            for (const Branch& br : formula_branches[fj][ti]) {
                if (br.label != 1 || !traversed(br))
                    continue;
                if (conflict(br))
                    continue;
                bool rejected = false;
                for (;;) {
                    int disc = oracle.bit([&] {
                        for (int x : br.order) {
                            int v = part.associated_center(x);
                            if (v < 0 || sigs.count(v))
                                continue;
                            auto it = truth->center_stage.find(v);
                            if (it != truth->center_stage.end() &&
                                it->second >= stage)
                                return 1;
                        }
                        return 0;
                    });
                    if (!disc) {
                        if (truth) {
                            const StageRecord& st = truth->stages[stage];
                            if (!(st.psi.assignment == br.assignment))
                                throw std::logic_error(
                                    "encode: accepted the wrong forceable "
                                    "branch");
                        }
                        *answered = recover_stage(br);
                        return true;
                    }
                    uint32_t idx = oracle.value(index_width(t), [&] {
                        for (uint32_t i = 0; i < br.order.size(); ++i) {
                            int v = part.associated_center(br.order[i]);
                            if (v < 0 || sigs.count(v))
                                continue;
                            auto it = truth->center_stage.find(v);
                            if (it != truth->center_stage.end() &&
                                it->second >= stage)
                                return i;
                        }
                        throw std::logic_error(
                            "encode: discovery index missing");
                    });
                    if (idx >= br.order.size())
                        throw DecodeError("discovery index out of range");
                    int v = part.associated_center(br.order[idx]);
                    if (v < 0)
                        throw DecodeError(
                            "discovered variable has no associated center");
                    uint32_t sgbits = oracle.value(9, [&, v] {
                        return (uint32_t)truth->center_sig.at(v).bits;
                    });
                    sigs[v] = Signature{(uint16_t)sgbits};
                    if (sigs[v].chosen())
                        known_chosen[part.square_of_center(v)] = v;
                    if (conflict(br)) {
                        rejected = true;
                        break;
                    }
                }
                if (rejected)
                    continue;
            }
        }
        return false;
    }

    void apply_round_diffs() {
        std::sort(round_filled.begin(), round_filled.end());
        round_filled.erase(
            std::unique(round_filled.begin(), round_filled.end()),
            round_filled.end());
        const TorusGrid& sg = part.small_grid();
        for (int y : round_filled) {
            auto [n1, n2] = sg.endpoints(y);
            Dir d12 = Dir::Left;
            for (Dir d : kAllDirs)
                if (sg.neighbor(n1, d) == n2) {
                    d12 = d;
                    break;
                }
            Dir d21 = opposite(d12);
            // pieces currently describing y
            std::vector<InfoPiece> pieces;
            for (const InfoPiece& p : istar_ans.pieces()) {
                int sq = part.square_of_center(p.center);
                if ((sq == n1 && p.dir == d12) || (sq == n2 && p.dir == d21))
                    pieces.push_back(p);
            }
            if (pieces.empty())
                continue;
            int lambda_val = pieces.front().is_edge() ? 0 : 1;
            int diff = oracle.bit([&, y, lambda_val] {
                if (!truth->capped_full->assigns(y))
                    throw std::logic_error("encode: diff truth missing");
                return truth->capped_full->value(y) != lambda_val;
            });
            if (!diff)
                continue;
            // flip the piece form of y
            if (lambda_val == 0) {
                // remove the edge, flip its path back, add non-edges at
                // whichever endpoints are exposed chosen centers
                InfoPiece edge = pieces.front();
                for (const InfoPiece& p : pieces)
                    if (p.is_edge()) {
                        edge = p;
                        break;
                    }
                istar_ans.remove_piece(edge);
                flip_path(edge.center, edge.partner);
                for (int c : {edge.center, edge.partner}) {
                    if (!exposed.count(c))
                        continue;
                    Dir d = part.square_of_center(c) == n1 ? d12 : d21;
                    if (!istar_ans.add_nonedge(c, d))
                        throw DecodeError("diff non-edge conflicts");
                }
            } else {
                for (const InfoPiece& p : pieces)
                    istar_ans.remove_piece(p);
                auto endpoint = [&](int sq) {
                    auto kit = known_chosen.find(sq);
                    if (kit != known_chosen.end())
                        return kit->second;
                    return get_center(sq, true, [&, sq] {
                        return truth->ctx->rho.chosen[sq];
                    });
                };
                int c1 = endpoint(n1), c2 = endpoint(n2);
                if (!istar_ans.add_edge(part, c1, c2))
                    throw DecodeError("diff edge conflicts");
                flip_path(c1, c2);
            }
        }
        round_filled.clear();
    }

    PartialRestriction finish() {
        PartialRestriction rho;
        rho.part = &part;
        rho.base = base;
        auto unflip = [&](int a, int b) {
            int pid = part.path_between_ids(a, b);
            for (int e : part.paths()[pid].edges)
                rho.base[e] ^= 1;
        };
        for (auto [a, b] : istar_ans.edges())
            unflip(a, b);
        for (auto [a, b] : istar_comp.edges())
            unflip(a, b);
        rho.alive = alive_star;
        for (int v : disappeared)
            rho.alive[v] = 1;
        rho.chosen = chosen_from_alive(part, rho.alive);

        std::vector<int> alive_nodes;
        for (int cid = 0; cid < part.num_centers(); ++cid)
            if (rho.alive[cid])
                alive_nodes.push_back(part.center_node(cid));
        TseitinInstance check(part.grid().as_graph(),
                              charges_for_centers(part, alive_nodes));
        if (!check.satisfies(rho.base))
            throw DecodeError("recovered restriction fails its charges");
        return rho;
    }

    PartialRestriction run_single() {
        while ((int)exposed.size() < cap_threshold()) {
            bool answered = false;
            if (!next_stage(0, &answered))
                throw DecodeError(
                    "no traversed branch passes the conflict checks");
        }
        return finish();
    }

    PartialRestriction run_multi(int ell) {
        int round_idx = 0;
        int m_formulas = (int)formulas.size();
        int budget = (ell + 3) / 4;
        while ((int)exposed.size() < cap_threshold()) {
            uint32_t fj =
                oracle.value(index_width(m_formulas), [&, round_idx] {
                    return (uint32_t)truth->rounds->at(round_idx)
                        .formula_index;
                });
            if ((int)fj >= m_formulas)
                throw DecodeError("round formula index out of range");
            int round_start = (int)exposed.size();
            round_filled.clear();
            bool global_stop = false;
            while ((int)exposed.size() - round_start < budget) {
                bool answered = false;
                if (!next_stage((int)fj, &answered))
                    throw DecodeError(
                        "no traversed branch passes the conflict checks");
                if (!answered) {
                    global_stop = true;
                    break;
                }
            }
            if (global_stop)
                break;
            apply_round_diffs();
            ++round_idx;
        }
        return finish();
    }
};

PartialRestriction rho_star_from_stages(const SwitchContext& ctx,
                                        const std::vector<StageRecord>& sts) {
    PartialRestriction star = ctx.rho;
    for (const StageRecord& st : sts) {
        for (int v : st.disappearing)
            star.alive[v] = 0;
        for (auto [a, b] : st.forcing.edges()) {
            int pid = ctx.part->path_between_ids(a, b);
            for (int e : ctx.part->paths()[pid].edges)
                star.base[e] ^= 1;
        }
    }
    star.chosen = chosen_from_alive(*ctx.part, star.alive);
    return star;
}

} // namespace

EncodeResult encode(const SwitchContext& ctx, const std::vector<DTree>& trees,
                    int s, int t, const EcdtResult& run) {
    if (!run.cap_hit)
        throw std::invalid_argument("encode: run did not hit the cap");
    Truth truth(ctx, run.stages);

    EncodeResult out;
    out.stages = (int)run.stages.size();
    out.exposed_total = (int)run.capped_exposed.size();
    for (const StageRecord& st : run.stages) {
        out.a += st.a;
        out.b += st.b;
    }
    out.c = out.exposed_total - out.a - out.b;
    out.rho_star = rho_star_from_stages(ctx, run.stages);

    Oracle oracle;
    oracle.enc = &out.stream;
    Recon recon(*ctx.part, {trees}, s, t, out.rho_star, oracle, &truth);
    PartialRestriction recovered = recon.run_single();
    if (!(recovered.alive == ctx.rho.alive) ||
        !(recovered.base == ctx.rho.base))
        throw std::logic_error("encode: self-check reconstruction failed");

    int log_t = index_width(t);
    int log_delta = index_width(ctx.part->delta());
    double slack =
        (double)out.stream.size() - out.a * log_t - out.b * log_delta;
    out.measured_A = slack / std::max(1, s);
    return out;
}

PartialRestriction decode(const SubSquarePartition& part,
                          const std::vector<DTree>& trees, int s, int t,
                          const PartialRestriction& rho_star,
                          BitStream stream) {
    Oracle oracle;
    oracle.dec = &stream;
    Recon recon(part, {trees}, s, t, rho_star, oracle, nullptr);
    PartialRestriction rho = recon.run_single();
    if (!stream.fully_consumed())
        throw DecodeError("transcript has trailing bits");
    return rho;
}

MultiEncodeResult multi_encode(const SwitchContext& ctx,
                               const std::vector<std::vector<DTree>>& ors,
                               int ell, int s, int t,
                               const CommonPdtResult& run) {
    if (!run.cap_hit)
        throw std::invalid_argument("multi_encode: run did not hit the cap");
    std::vector<StageRecord> flat;
    for (const RoundRecord& r : run.rounds)
        for (const StageRecord& st : r.stages)
            flat.push_back(st);
    Truth truth(ctx, std::move(flat));
    truth.rounds = &run.rounds;
    truth.capped_full = &run.capped_tau;

    MultiEncodeResult out;
    out.rounds = (int)run.rounds.size();
    std::vector<StageRecord> all;
    for (const RoundRecord& r : run.rounds)
        for (const StageRecord& st : r.stages)
            all.push_back(st);
    out.rho_star = rho_star_from_stages(ctx, all);

    Oracle oracle;
    oracle.enc = &out.stream;
    Recon recon(*ctx.part, ors, s, t, out.rho_star, oracle, &truth);
    PartialRestriction recovered = recon.run_multi(ell);
    if (!(recovered.alive == ctx.rho.alive) ||
        !(recovered.base == ctx.rho.base))
        throw std::logic_error("multi_encode: self-check failed");
    return out;
}

PartialRestriction multi_decode(const SubSquarePartition& part,
                                const std::vector<std::vector<DTree>>& ors,
                                int ell, int s, int t,
                                const PartialRestriction& rho_star,
                                BitStream stream) {
    Oracle oracle;
    oracle.dec = &stream;
    Recon recon(part, ors, s, t, rho_star, oracle, nullptr);
    PartialRestriction rho = recon.run_multi(ell);
    if (!stream.fully_consumed())
        throw DecodeError("transcript has trailing bits");
    return rho;
}

} // namespace gsw

#include "gsw/ecdt.hpp"

#include <algorithm>
#include <stdexcept>

namespace gsw {

SwitchContext::SwitchContext(const SubSquarePartition& p, PartialRestriction r,
                             GraphicalPairing pi)
    : part(&p), rho(std::move(r)), pairing(std::move(pi)),
      sigma(compose(rho, pairing)), big_inst(all_ones_instance(p.grid())),
      small_inst(all_ones_instance(p.small_grid())) {
    comp_of_center.assign(p.num_centers(), -1);
    for (int ci = 0; ci < (int)pairing.components.size(); ++ci) {
        const PairingComponent& comp = pairing.components[ci];
        InfoSet closure;
        for (auto [a, b] : comp.edges())
            if (!closure.add_edge(p, a, b))
                throw std::logic_error("context: inconsistent component");
        for (int cid : comp.centers) {
            comp_of_center[cid] = ci;
            for (Dir d : kAllDirs)
                closure.add_nonedge(cid, d); // no-op on edge slots
        }
        if (!closure.locally_consistent())
            throw std::logic_error("context: component closure inconsistent");
        comp_closures.push_back(std::move(closure));
    }
}

SwitchContext make_context(const SubSquarePartition& part,
                           PartialRestriction rho) {
    GraphicalPairing pi = build_pairing(part, rho.alive, rho.chosen);
    return SwitchContext(part, std::move(rho), std::move(pi));
}

std::optional<PartialAssignment> induced_small_assignment(
    const SwitchContext& ctx, const Branch& psi) {
    PartialAssignment out(ctx.small_inst.num_vars());
    for (int x : psi.order) {
        const EdgeImage& img = ctx.sigma.map[x];
        int val = psi.assignment.value(x);
        if (img.is_const()) {
            if (img.const_value() != val)
                return std::nullopt;
            continue;
        }
        int yval = val ^ (img.negated() ? 1 : 0);
        if (out.assigns(img.var)) {
            if (out.value(img.var) != yval)
                return std::nullopt;
        } else {
            out.set(img.var, yval);
        }
    }
    return out;
}

bool branch_consistent_with_sigma(const SwitchContext& ctx,
                                  const Branch& psi) {
    auto small = induced_small_assignment(ctx, psi);
    if (!small)
        return false;
    return is_locally_consistent(ctx.part->small_grid(), ctx.small_inst,
                                 *small, LcMode::Relaxed);
}

bool info_traverses_branch(const SwitchContext& ctx, const InfoSet& info,
                           const Branch& psi) {
    for (int x : psi.order) {
        auto f = forces(ctx.rho, info, x);
        if (!f || *f != psi.assignment.value(x))
            return false;
    }
    return true;
}

namespace {

// Completes alpha on the four incident variables of the given square,
// keeping local consistency; false when no value works (outside the
// guaranteed regime).  Value 1 is tried first: a 0 turns into an edge
// piece, whose path endpoint then joins the forcing support, so preferring
// 1 keeps the forcing information small.
bool complete_on_square(const SwitchContext& ctx, PartialAssignment& alpha,
                        int sq) {
    const TorusGrid& sg = ctx.part->small_grid();
    for (Dir d : kAllDirs) {
        int y = sg.edge_from(sq, d);
        if (alpha.assigns(y))
            continue;
        bool placed = false;
        for (int val : {1, 0}) {
            alpha.set(y, val);
            if (is_locally_consistent(sg, ctx.small_inst, alpha,
                                      LcMode::Relaxed)) {
                placed = true;
                break;
            }
        }
        if (!placed) {
            alpha.unset(y);
            return false;
        }
    }
    return true;
}

} // namespace

InfoSet find_forcing_info(const SwitchContext& ctx, const Branch& psi,
                          const InfoSet& info,
                          const PartialAssignment& tau_full) {
    const SubSquarePartition& part = *ctx.part;
    InfoSet j;

    auto small = induced_small_assignment(ctx, psi);
    if (!small)
        throw std::logic_error("forcing info: branch contradicts sigma");
    auto merged = small->merged_with(tau_full);
    if (!merged)
        throw std::logic_error("forcing info: branch contradicts the answers");
    PartialAssignment alpha = *merged;

    InfoSet combined = info;
    auto forced_right = [&](int x) {
        auto f = forces(ctx.rho, combined, x);
        return f && *f == psi.assignment.value(x);
    };

    for (int x : psi.order) {
        if (forced_right(x))
            continue;
        int v = part.associated_center(x);
        if (v < 0 || !ctx.rho.is_alive(v))
            throw std::logic_error("forcing info: unforced dead variable");
        if (!ctx.rho.is_chosen(v)) {
            int ci = ctx.comp_of_center[v];
            if (ci < 0)
                throw std::logic_error(
                    "forcing info: non-chosen center outside the pairing");
            if (!j.merge(part, ctx.comp_closures[ci]) ||
                !combined.merge(part, ctx.comp_closures[ci]))
                throw std::logic_error(
                    "forcing info: component conflicts with the collected "
                    "information");
        } else {
            int sq = part.square_of_center(v);
            if (!complete_on_square(ctx, alpha, sq))
                throw std::logic_error(
                    "forcing info: no consistent completion at a chosen "
                    "center");
            for (Dir d : kAllDirs) {
                if (j.has(v, d) || combined.has(v, d))
                    continue;
                int y = part.small_grid().edge_from(sq, d);
                // an edge piece means the base assignment is flipped along
                // the chosen path, which is the 0-value of its y-variable
                bool ok;
                if (alpha.value(y) == 0) {
                    int w = ctx.rho.chosen[part.neighbor_square(sq, d)];
                    ok = j.add_edge(part, v, w) && combined.add_edge(part, v, w);
                } else {
                    ok = j.add_nonedge(v, d) && combined.add_nonedge(v, d);
                }
                if (!ok)
                    throw std::logic_error(
                        "forcing info: piece conflicts with the collected "
                        "information");
            }
        }
        if (!forced_right(x))
            throw std::logic_error("forcing info: forcing failed");
    }

    // canonical minimization: drop any piece (whole components for the
    // non-chosen part) whose removal keeps every branch variable forced
    auto still_forces = [&](const InfoSet& cand) {
        InfoSet u = info;
        if (!u.merge(part, cand))
            return false;
        for (int x : psi.order) {
            auto f = forces(ctx.rho, u, x);
            if (!f || *f != psi.assignment.value(x))
                return false;
        }
        return true;
    };

    for (;;) {
        bool removed = false;
        for (const InfoPiece& p : j.pieces()) {
            if (p.is_edge() && p.partner < p.center)
                continue; // handle each edge once, from its low slot
            InfoSet cand = j;
            bool unit_is_component =
                !ctx.rho.is_chosen(p.center) ||
                (p.is_edge() && !ctx.rho.is_chosen(p.partner));
            if (unit_is_component) {
                int ci = ctx.comp_of_center[p.center];
                if (ci < 0)
                    throw std::logic_error("forcing info: stray piece");
                for (const InfoPiece& q : ctx.comp_closures[ci].pieces())
                    cand.remove_piece(q);
            } else {
                cand.remove_piece(p);
            }
            if (still_forces(cand)) {
                j = cand;
                removed = true;
                break;
            }
        }
        if (!removed)
            break;
    }
    return j;
}

void assert_stage_invariants(const SwitchContext& ctx,
                             const PartialAssignment& tau_full,
                             const InfoSet& info,
                             const std::set<int>& exposed) {
    const SubSquarePartition& part = *ctx.part;
    if (!info.locally_consistent())
        throw std::logic_error("invariant: information set inconsistent");
    for (int u : exposed) {
        if (!info.closed_at(u))
            throw std::logic_error("invariant: exposed center not closed");
        if (!ctx.rho.is_chosen(u)) {
            int ci = ctx.comp_of_center[u];
            if (ci < 0)
                throw std::logic_error(
                    "invariant: exposed non-chosen center in no component");
            for (int w : ctx.pairing.components[ci].centers)
                if (!exposed.count(w))
                    throw std::logic_error(
                        "invariant: pairing component only partly exposed");
        } else {
            int sq = part.square_of_center(u);
            for (Dir d : kAllDirs) {
                int y = part.small_grid().edge_from(sq, d);
                if (!tau_full.assigns(y))
                    throw std::logic_error(
                        "invariant: unqueried variable at an exposed chosen "
                        "center");
                auto p = info.piece_at(u, d);
                if (!p || (tau_full.value(y) == 0) != p->is_edge())
                    throw std::logic_error(
                        "invariant: answers and information disagree");
            }
        }
    }
    // the non-chosen part of the information set comes from the pairing
    for (int v : info.support()) {
        if (ctx.rho.is_chosen(v) || !ctx.rho.is_alive(v))
            continue;
        int ci = ctx.comp_of_center[v];
        if (ci < 0)
            throw std::logic_error(
                "invariant: information at a non-paired non-chosen center");
        for (Dir d : kAllDirs) {
            auto p = info.piece_at(v, d);
            if (!p)
                continue;
            if (!ctx.comp_closures[ci].contains(*p))
                throw std::logic_error(
                    "invariant: non-chosen information outside the pairing");
        }
    }
}

namespace {

struct Builder {
    const SwitchContext& ctx;
    const std::vector<DTree>& trees;
    std::vector<std::vector<Branch>> tree_branches;
    int cap;
    int round_floor = 0;  // exposure at the start of the round
    int round_budget = 0; // 0: no per-round bound
    bool capped = false;
    EcdtResult result;

    Builder(const SwitchContext& c, const std::vector<DTree>& t, int cap_)
        : ctx(c), trees(t), cap(cap_) {
        for (const DTree& tr : trees)
            tree_branches.push_back(
                branches(tr, ctx.big_inst.num_vars()));
    }

    // the first eligible forceable branch, or tree index -1
    std::pair<int, const Branch*> find_forceable(
        const PartialAssignment& tau_full) {
        for (int i = 0; i < (int)trees.size(); ++i) {
            for (const Branch& br : tree_branches[i]) {
                if (br.label != 1)
                    continue;
                auto small = induced_small_assignment(ctx, br);
                if (!small)
                    continue;
                if (!is_locally_consistent(ctx.part->small_grid(),
                                           ctx.small_inst, *small,
                                           LcMode::Relaxed))
                    continue;
                auto merged = small->merged_with(tau_full);
                if (!merged)
                    continue;
                if (!is_locally_consistent(ctx.part->small_grid(),
                                           ctx.small_inst, *merged,
                                           LcMode::Relaxed))
                    continue;
                return {i, &br};
            }
        }
        return {-1, nullptr};
    }

    DTree grow(PartialAssignment tau_q, PartialAssignment tau_full,
               InfoSet info, std::set<int> exposed,
               std::vector<StageRecord> stages) {
        if (capped)
            return nullptr;
        auto [tree_idx, psi] = find_forceable(tau_full);
        if (tree_idx < 0)
            return make_leaf(0);

        InfoSet j = find_forcing_info(ctx, *psi, info, tau_full);

        StageRecord rec;
        rec.tree_index = tree_idx;
        rec.psi = *psi;
        rec.forcing = j;
        rec.exposed_before = exposed;
        for (int v : j.support())
            if (j.edges_at(v) % 2 == 1)
                rec.disappearing.push_back(v);
        {
            std::set<int> counted;
            auto supp = j.support();
            for (int x : psi->order) {
                int v = ctx.part->associated_center(x);
                if (v < 0 || exposed.count(v) || counted.count(v))
                    continue;
                if (std::binary_search(supp.begin(), supp.end(), v)) {
                    counted.insert(v);
                    ++rec.a;
                }
            }
            rec.b = (int)rec.disappearing.size() - rec.a;
        }

        // exposure: the support of J plus every chosen center within
        // distance one of its chosen part
        std::set<int> s_add;
        for (int v : j.support())
            s_add.insert(v);
        std::vector<int> query_centers;
        for (int v : j.support()) {
            if (!ctx.rho.is_chosen(v))
                continue;
            int sq = ctx.part->square_of_center(v);
            query_centers.push_back(v);
            for (Dir d : kAllDirs) {
                int w = ctx.rho.chosen[ctx.part->neighbor_square(sq, d)];
                s_add.insert(w);
                query_centers.push_back(w);
            }
        }
        std::sort(query_centers.begin(), query_centers.end());
        query_centers.erase(
            std::unique(query_centers.begin(), query_centers.end()),
            query_centers.end());

        std::vector<int> queries;
        for (int u : query_centers) {
            int sq = ctx.part->square_of_center(u);
            for (Dir d : kAllDirs)
                queries.push_back(ctx.part->small_grid().edge_from(sq, d));
        }
        std::sort(queries.begin(), queries.end());
        queries.erase(std::unique(queries.begin(), queries.end()),
                      queries.end());

        // The exposure of this stage is fixed before any query is made, so
        // the stop rule triggers here: the stage is recorded without its
        // queries and the whole construction halts.
        {
            std::set<int> exposed_after = exposed;
            for (int v : s_add)
                exposed_after.insert(v);
            if ((int)exposed_after.size() >= cap) {
                InfoSet info_after = info;
                for (int v : j.support()) {
                    if (ctx.rho.is_chosen(v) || !ctx.rho.is_alive(v))
                        continue;
                    int ci = ctx.comp_of_center[v];
                    if (!rec.info_added.merge(*ctx.part,
                                              ctx.comp_closures[ci]) ||
                        !info_after.merge(*ctx.part, ctx.comp_closures[ci]))
                        throw std::logic_error(
                            "stage: component pieces conflict");
                }
                rec.exposed_added = s_add;
                stages.push_back(rec);
                capped = true;
                result.cap_hit = true;
                result.stages = std::move(stages);
                result.capped_queries = std::move(tau_q);
                result.capped_full = std::move(tau_full);
                result.capped_info = std::move(info_after);
                result.capped_exposed = std::move(exposed_after);
                return nullptr;
            }
        }

        return extend(0, queries, rec, std::move(tau_q), std::move(tau_full),
                      std::move(info), std::move(exposed), s_add,
                      query_centers, std::move(stages));
    }

    DTree extend(size_t qi, const std::vector<int>& queries, StageRecord rec,
                 PartialAssignment tau_q, PartialAssignment tau_full,
                 InfoSet info, std::set<int> exposed,
                 const std::set<int>& s_add,
                 const std::vector<int>& query_centers,
                 std::vector<StageRecord> stages) {
        if (capped)
            return nullptr;
        const TorusGrid& sg = ctx.part->small_grid();
        while (qi < queries.size() && tau_full.assigns(queries[qi]))
            ++qi;
        if (qi == queries.size())
            return finish_stage(std::move(rec), std::move(tau_q),
                                std::move(tau_full), std::move(info),
                                std::move(exposed), s_add, query_centers,
                                std::move(stages));
        int y = queries[qi];
        Implication iv =
            implied_value(sg, ctx.small_inst, tau_full, y, LcMode::Relaxed);
        if (iv == Implication::Dead)
            return nullptr; // no locally consistent continuation
        if (iv != Implication::Free) {
            tau_full.set(y, iv == Implication::One ? 1 : 0);
            return extend(qi + 1, queries, std::move(rec), std::move(tau_q),
                          std::move(tau_full), std::move(info),
                          std::move(exposed), s_add, query_centers,
                          std::move(stages));
        }
        PartialAssignment tq0 = tau_q, tf0 = tau_full;
        tq0.set(y, 0);
        tf0.set(y, 0);
        DTree c0 = extend(qi + 1, queries, rec, std::move(tq0), std::move(tf0),
                          info, exposed, s_add, query_centers, stages);
        if (capped)
            return nullptr;
        PartialAssignment tq1 = std::move(tau_q), tf1 = std::move(tau_full);
        tq1.set(y, 1);
        tf1.set(y, 1);
        DTree c1 = extend(qi + 1, queries, std::move(rec), std::move(tq1),
                          std::move(tf1), std::move(info), std::move(exposed),
                          s_add, query_centers, std::move(stages));
        if (capped)
            return nullptr;
        if (c0 && c1)
            return make_node(y, std::move(c0), std::move(c1));
        return c0 ? c0 : c1;
    }

    DTree finish_stage(StageRecord rec, PartialAssignment tau_q,
                       PartialAssignment tau_full, InfoSet info,
                       std::set<int> exposed, const std::set<int>& s_add,
                       const std::vector<int>& query_centers,
                       std::vector<StageRecord> stages) {
        const SubSquarePartition& part = *ctx.part;
        // record the answers at the freshly exposed chosen centers and the
        // pairing components of the forcing information
        InfoSet added;
        for (int u : query_centers) {
            if (exposed.count(u))
                continue;
            int sq = part.square_of_center(u);
            for (Dir d : kAllDirs) {
                int y = part.small_grid().edge_from(sq, d);
                if (!tau_full.assigns(y))
                    throw std::logic_error("stage: unanswered query");
                bool ok;
                if (tau_full.value(y) == 0) {
                    int w = ctx.rho.chosen[part.neighbor_square(sq, d)];
                    ok = added.add_edge(part, u, w) &&
                         info.add_edge(part, u, w);
                } else {
                    ok = added.add_nonedge(u, d) && info.add_nonedge(u, d);
                }
                if (!ok)
                    throw std::logic_error("stage: answer pieces conflict");
            }
        }
        for (int v : rec.forcing.support()) {
            if (ctx.rho.is_chosen(v) || !ctx.rho.is_alive(v))
                continue;
            int ci = ctx.comp_of_center[v];
            if (!added.merge(part, ctx.comp_closures[ci]) ||
                !info.merge(part, ctx.comp_closures[ci]))
                throw std::logic_error("stage: component pieces conflict");
        }
        rec.info_added = added;
        for (int v : s_add)
            exposed.insert(v);
        rec.exposed_added = s_add;
        stages.push_back(rec);

        assert_stage_invariants(ctx, tau_full, info, exposed);

        if (info_traverses_branch(ctx, info, rec.psi))
            return make_leaf(1);

        // a round budget ends the construction after a completed stage
        if (round_budget > 0 &&
            (int)exposed.size() >= round_floor + round_budget) {
            capped = true;
            result.cap_hit = true;
            result.capped_with_answers = true;
            result.stages = std::move(stages);
            result.capped_queries = std::move(tau_q);
            result.capped_full = std::move(tau_full);
            result.capped_info = std::move(info);
            result.capped_exposed = std::move(exposed);
            return nullptr;
        }
        return grow(std::move(tau_q), std::move(tau_full), std::move(info),
                    std::move(exposed), std::move(stages));
    }
};

} // namespace

EcdtResult build_ecdt(const SwitchContext& ctx,
                      const std::vector<DTree>& trees, int cap_exposed,
                      const PartialAssignment* seed_tau,
                      const InfoSet* seed_info,
                      const std::set<int>* seed_exposed, int round_budget) {
    Builder b(ctx, trees, cap_exposed);
    PartialAssignment tau(ctx.small_inst.num_vars());
    PartialAssignment tau_full = seed_tau ? *seed_tau : tau;
    InfoSet info = seed_info ? *seed_info : InfoSet{};
    std::set<int> exposed = seed_exposed ? *seed_exposed : std::set<int>{};
    b.round_budget = round_budget;
    b.round_floor = (int)exposed.size();
    DTree tree = b.grow(tau, tau_full, info, exposed, {});
    if (b.capped)
        return std::move(b.result);
    if (!tree)
        throw std::runtime_error(
            "ecdt: no locally consistent branch survives");
    EcdtResult res;
    res.tree = tree;
    return res;
}

} // namespace gsw

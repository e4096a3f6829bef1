#include "gsw/multi.hpp"

#include <algorithm>

namespace gsw {

namespace {

struct CommonBuilder {
    const SwitchContext& ctx;
    const std::vector<std::vector<DTree>>& ors;
    int ell, s;
    bool capped = false;
    CommonPdtResult result;

    int round_budget() const { return (ell + 3) / 4; }

    // vars assigned by the round beyond the seed
    static std::vector<int> new_vars(const PartialAssignment& before,
                                     const PartialAssignment& after) {
        std::vector<int> out;
        for (int v = 0; v < after.size(); ++v)
            if (after.assigns(v) && !before.assigns(v))
                out.push_back(v);
        return out;
    }

    DTree build(PartialAssignment tau, PartialAssignment tau_full,
                InfoSet info, std::set<int> exposed,
                std::vector<RoundRecord> rounds,
                std::vector<std::vector<DTree>>& completions_out) {
        if (capped)
            return nullptr;
        for (int j = 0; j < (int)ors.size(); ++j) {
            EcdtResult r = build_ecdt(ctx, ors[j], exposure_cap(s), &tau_full,
                                      &info, &exposed, round_budget());
            if (!r.cap_hit) {
                if (j == (int)ors.size() - 1) {
                    // every formula representable at this leaf: collect the
                    // completions
                    std::vector<DTree> comps;
                    for (int i = 0; i < (int)ors.size(); ++i) {
                        EcdtResult ri =
                            build_ecdt(ctx, ors[i], exposure_cap(s),
                                       &tau_full, &info, &exposed);
                        if (ri.cap_hit || !ri.tree)
                            throw std::logic_error(
                                "common pdt: completion changed under "
                                "re-construction");
                        comps.push_back(ri.tree);
                    }
                    completions_out.push_back(std::move(comps));
                    return make_leaf(0); // leaf marker; labels are unused
                }
                continue;
            }

            RoundRecord round;
            round.formula_index = j;
            round.stages = r.stages;
            round.lambda_values = r.capped_full;
            round.lambda_vars = new_vars(tau_full, r.capped_full);

            if (!r.capped_with_answers) {
                // the global exposure cap halted the construction before
                // the final stage's queries
                capped = true;
                result.cap_hit = true;
                rounds.push_back(std::move(round));
                result.rounds = std::move(rounds);
                result.capped_tau = std::move(tau_full);
                result.capped_info = std::move(r.capped_info);
                result.capped_exposed = std::move(r.capped_exposed);
                return nullptr;
            }

            rounds.push_back(round);
            // extend the common tree by the round's variables; each leaf
            // keeps the exposure and the pairing components, with the
            // answer pieces re-derived from its own values
            return extend(0, round.lambda_vars, std::move(tau),
                          std::move(tau_full), info, r, std::move(rounds),
                          completions_out);
        }
        throw std::logic_error("common pdt: no formula list given");
    }

    DTree extend(size_t qi, const std::vector<int>& vars,
                 PartialAssignment tau, PartialAssignment tau_full,
                 const InfoSet& seed_info, const EcdtResult& r,
                 std::vector<RoundRecord> rounds,
                 std::vector<std::vector<DTree>>& completions_out) {
        if (capped)
            return nullptr;
        const TorusGrid& sg = ctx.part->small_grid();
        while (qi < vars.size() && tau_full.assigns(vars[qi]))
            ++qi;
        if (qi == vars.size()) {
            InfoSet info = leaf_info(seed_info, r, tau_full);
            return build(std::move(tau), std::move(tau_full), std::move(info),
                         r.capped_exposed, std::move(rounds),
                         completions_out);
        }
        int y = vars[qi];
        Implication iv =
            implied_value(sg, ctx.small_inst, tau_full, y, LcMode::Relaxed);
        if (iv == Implication::Dead)
            return nullptr;
        if (iv != Implication::Free) {
            tau_full.set(y, iv == Implication::One ? 1 : 0);
            return extend(qi + 1, vars, std::move(tau), std::move(tau_full),
                          seed_info, r, std::move(rounds), completions_out);
        }
        PartialAssignment tq0 = tau, tf0 = tau_full;
        tq0.set(y, 0);
        tf0.set(y, 0);
        DTree c0 = extend(qi + 1, vars, std::move(tq0), std::move(tf0),
                          seed_info, r, rounds, completions_out);
        if (capped)
            return nullptr;
        tau.set(y, 1);
        tau_full.set(y, 1);
        DTree c1 = extend(qi + 1, vars, std::move(tau), std::move(tau_full),
                          seed_info, r, std::move(rounds), completions_out);
        if (capped)
            return nullptr;
        if (c0 && c1)
            return make_node(y, std::move(c0), std::move(c1));
        return c0 ? c0 : c1;
    }

    // the information set of a common-tree leaf: the seed, the round's
    // pairing components, and answer pieces from the leaf's own values
    InfoSet leaf_info(const InfoSet& seed, const EcdtResult& r,
                      const PartialAssignment& tau_full) {
        const SubSquarePartition& part = *ctx.part;
        InfoSet info = seed;
        for (const StageRecord& st : r.stages) {
            for (int v : st.forcing.support()) {
                if (ctx.rho.is_chosen(v) || !ctx.rho.is_alive(v))
                    continue;
                int ci = ctx.comp_of_center[v];
                if (!info.merge(part, ctx.comp_closures[ci]))
                    throw std::logic_error("common pdt: component conflict");
            }
            for (int u : st.exposed_added) {
                if (!ctx.rho.is_chosen(u) || st.exposed_before.count(u))
                    continue;
                int sq = part.square_of_center(u);
                for (Dir d : kAllDirs) {
                    int y = part.small_grid().edge_from(sq, d);
                    if (!tau_full.assigns(y))
                        throw std::logic_error(
                            "common pdt: unanswered leaf variable");
                    bool ok;
                    if (tau_full.value(y) == 0) {
                        int w = ctx.rho.chosen[part.neighbor_square(sq, d)];
                        ok = info.add_edge(part, u, w);
                    } else {
                        ok = info.add_nonedge(u, d);
                    }
                    if (!ok)
                        throw std::logic_error(
                            "common pdt: leaf answer pieces conflict");
                }
            }
        }
        return info;
    }
};

} // namespace

CommonPdtResult build_common_pdt(const SwitchContext& ctx,
                                 const std::vector<std::vector<DTree>>& ors,
                                 int ell, int s) {
    CommonBuilder b{ctx, ors, ell, s};
    std::vector<std::vector<DTree>> completions;
    PartialAssignment tau(ctx.small_inst.num_vars());
    DTree top = b.build(tau, tau, InfoSet{}, {}, {}, completions);
    if (b.capped)
        return std::move(b.result);
    if (!top)
        throw std::runtime_error("common pdt: no consistent branch survives");
    CommonPdtResult res;
    res.cpdt.top = top;
    res.cpdt.completions = std::move(completions);
    return res;
}

bool check_common_pdt(const TorusGrid& small_grid,
                      const TseitinInstance& small_inst, const CommonPdt& cpdt,
                      const std::vector<std::vector<DTree>>& restricted_ors,
                      int ell) {
    auto top_branches = branches(cpdt.top, small_inst.num_vars());
    if (top_branches.size() != cpdt.completions.size())
        return false;
    for (size_t bi = 0; bi < top_branches.size(); ++bi) {
        if (cpdt.completions[bi].size() != restricted_ors.size())
            return false;
        for (size_t i = 0; i < restricted_ors.size(); ++i) {
            const DTree& comp = cpdt.completions[bi][i];
            if (depth(comp) > ell)
                return false;
            for (const Branch& kappa :
                 branches(comp, small_inst.num_vars())) {
                auto merged =
                    top_branches[bi].assignment.merged_with(kappa.assignment);
                if (!merged)
                    return false;
                // label 1: some member restricts to a 1-tree; label 0: all
                // members restrict to 0-trees
                if (kappa.label == 1) {
                    bool witness = false;
                    for (const DTree& m : restricted_ors[i]) {
                        if (is_b_tree(restrict_by_assignment(
                                          small_grid, small_inst, m, *merged),
                                      1)) {
                            witness = true;
                            break;
                        }
                    }
                    if (!witness)
                        return false;
                } else {
                    for (const DTree& m : restricted_ors[i]) {
                        if (!is_b_tree(restrict_by_assignment(
                                           small_grid, small_inst, m,
                                           *merged),
                                       0))
                            return false;
                    }
                }
            }
        }
    }
    return true;
}

} // namespace gsw

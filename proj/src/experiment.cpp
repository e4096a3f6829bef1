#include "gsw/experiment.hpp"

#include <cmath>
#include <functional>
#include <ostream>

#include "gsw/encode.hpp"

#include "json.hpp"

namespace gsw {

DTree random_grid_tree(const SubSquarePartition& part,
                       const TseitinInstance& inst, int max_depth, Rng& rng) {
    std::function<DTree(int, PartialAssignment&)> rec =
        [&](int d, PartialAssignment& acc) -> DTree {
        if (d == 0)
            return make_leaf((int)rng.bit());
        for (int attempt = 0; attempt < 8; ++attempt) {
            int e;
            if (rng.bit()) {
                const auto& paths = part.paths();
                const PathSpec& p = paths[rng.below(paths.size())];
                e = p.edges[rng.below(p.edges.size())];
            } else {
                e = (int)rng.below(part.grid().num_edges());
            }
            if (acc.assigns(e))
                continue;
            if (implied_value(part.grid(), inst, acc, e, LcMode::Relaxed) !=
                Implication::Free)
                continue;
            acc.set(e, 0);
            DTree c0 = rec(d - 1, acc);
            acc.set(e, 1);
            DTree c1 = rec(d - 1, acc);
            acc.unset(e);
            return make_node(e, std::move(c0), std::move(c1));
        }
        return make_leaf((int)rng.bit());
    };
    PartialAssignment acc(inst.num_vars());
    return rec(max_depth, acc);
}

DTree parity_path_tree(const SubSquarePartition& part,
                       const TseitinInstance& inst, int depth, Rng& rng) {
    const auto& paths = part.paths();
    const PathSpec& p = paths[rng.below(paths.size())];
    std::vector<int> vars;
    for (int i = 0; i < depth && i < (int)p.edges.size(); ++i) {
        int e = p.edges[rng.below(p.edges.size())];
        if (std::find(vars.begin(), vars.end(), e) == vars.end())
            vars.push_back(e);
    }
    int target = (int)rng.bit();
    std::function<DTree(size_t, int, PartialAssignment&)> rec =
        [&](size_t i, int parity, PartialAssignment& acc) -> DTree {
        while (i < vars.size()) {
            Implication iv = implied_value(part.grid(), inst, acc, vars[i],
                                           LcMode::Relaxed);
            if (iv == Implication::Free)
                break;
            int v = iv == Implication::One ? 1 : 0;
            acc.set(vars[i], v);
            parity ^= v;
            ++i;
        }
        if (i == vars.size())
            return make_leaf(parity == target ? 1 : 0);
        PartialAssignment a0 = acc, a1 = acc;
        a0.set(vars[i], 0);
        a1.set(vars[i], 1);
        return make_node(vars[i], rec(i + 1, parity, a0),
                         rec(i + 1, parity ^ 1, a1));
    };
    PartialAssignment acc(inst.num_vars());
    return rec(0, 0, acc);
}

namespace {

SwitchContext trial_context(const SubSquarePartition& part,
                            const SwitchConfig& config, Rng& rng) {
    if (!config.direct_sampler)
        return make_context(part, sample_partial(part, config.k, rng));
    for (;;) {
        auto alive = sample_alive_direct(part, 1,
                                         std::min(2, part.delta()), rng);
        try {
            PartialRestriction rho =
                partial_from_alive(part, std::move(alive), rng);
            return make_context(part, std::move(rho));
        } catch (const std::runtime_error&) {
            // surplus centers placed unpairably; redraw
        }
    }
}

std::vector<DTree> trial_forest(const SubSquarePartition& part,
                                const TseitinInstance& inst,
                                const SwitchConfig& config, Rng& rng) {
    std::vector<DTree> trees;
    for (int i = 0; i < config.m; ++i) {
        if (config.adversarial)
            trees.push_back(parity_path_tree(part, inst, config.t, rng));
        else
            trees.push_back(random_grid_tree(part, inst, config.t, rng));
    }
    return trees;
}

void finish_report(ExperimentReport& report) {
    int n = (int)report.records.size();
    for (const TrialRecord& r : report.records) {
        report.cap_hits += r.cap_hit;
        report.verified += r.verified;
    }
    report.tail = n ? (double)report.cap_hits / n : 0.0;
    if (n) {
        // Wilson interval at z = 1.96
        double z = 1.96, p = report.tail;
        double denom = 1 + z * z / n;
        double center = (p + z * z / (2 * n)) / denom;
        double half =
            z * std::sqrt(p * (1 - p) / n + z * z / (4.0 * n * n)) / denom;
        report.wilson_lo = std::max(0.0, center - half);
        report.wilson_hi = std::min(1.0, center + half);
    }
    const SwitchConfig& c = report.config;
    double logn = std::log2((double)c.n2);
    double base = c.bound_A * c.t * std::pow(logn, c.bound_c1) /
                  ((double)c.n1 / c.n2);
    report.bound_value = std::pow(base, (double)c.s / c.bound_c2);
    if (c.formulas > 1)
        report.bound_value *=
            std::pow((double)c.formulas, (double)c.s / std::max(1, c.ell));
}

} // namespace

ExperimentReport run_switch_experiment(const SwitchConfig& config) {
    SubSquarePartition part(config.n1, config.n2, true);
    TseitinInstance inst = all_ones_instance(part.grid());
    ExperimentReport report;
    report.config = config;
    for (int trial = 0; trial < config.trials; ++trial) {
        Rng rng = Rng::for_trial(config.seed, trial);
        SwitchContext ctx = trial_context(part, config, rng);
        auto trees = trial_forest(part, ctx.big_inst, config, rng);

        TrialRecord rec;
        rec.trial = trial;
        EcdtResult run = build_ecdt(ctx, trees, exposure_cap(config.s));
        rec.cap_hit = run.cap_hit;
        if (!run.cap_hit) {
            rec.depth_reached = depth(run.tree);
            std::vector<DTree> restricted;
            for (const DTree& t : trees)
                restricted.push_back(
                    restrict_by_full(part.grid(), ctx.big_inst, t,
                                     ctx.sigma.map, part.small_grid(),
                                     ctx.small_inst));
            rec.verified = represents(part.small_grid(), ctx.small_inst,
                                      run.tree, restricted);
        } else {
            rec.stages = run.stage_count();
            rec.exposed = (int)run.capped_exposed.size();
            rec.depth_reached = run.capped_queries.assigned_count();
            EncodeResult enc = encode(ctx, trees, config.s, config.t, run);
            rec.a = enc.a;
            rec.b = enc.b;
            rec.c = enc.c;
            rec.transcript_bits = enc.stream.size();
            rec.measured_A = enc.measured_A;
            PartialRestriction back = decode(part, trees, config.s, config.t,
                                             enc.rho_star, enc.stream);
            rec.verified = back.alive == ctx.rho.alive &&
                           back.base == ctx.rho.base;
        }
        report.records.push_back(rec);
    }
    finish_report(report);
    return report;
}

ExperimentReport run_multi_experiment(const SwitchConfig& config) {
    SubSquarePartition part(config.n1, config.n2, true);
    ExperimentReport report;
    report.config = config;
    for (int trial = 0; trial < config.trials; ++trial) {
        Rng rng = Rng::for_trial(config.seed ^ 0x9e3779b9, trial);
        SwitchContext ctx = trial_context(part, config, rng);
        std::vector<std::vector<DTree>> ors;
        for (int j = 0; j < config.formulas; ++j)
            ors.push_back(trial_forest(part, ctx.big_inst, config, rng));

        TrialRecord rec;
        rec.trial = trial;
        CommonPdtResult run = build_common_pdt(ctx, ors, config.ell,
                                               config.s);
        rec.cap_hit = run.cap_hit;
        if (!run.cap_hit) {
            rec.depth_reached = depth(run.cpdt.top);
            std::vector<std::vector<DTree>> restricted;
            for (auto& trees : ors) {
                restricted.push_back({});
                for (const DTree& t : trees)
                    restricted.back().push_back(
                        restrict_by_full(part.grid(), ctx.big_inst, t,
                                         ctx.sigma.map, part.small_grid(),
                                         ctx.small_inst));
            }
            rec.verified = check_common_pdt(part.small_grid(), ctx.small_inst,
                                            run.cpdt, restricted, config.ell);
        } else {
            rec.stages = (int)run.rounds.size();
            rec.exposed = (int)run.capped_exposed.size();
            MultiEncodeResult enc =
                multi_encode(ctx, ors, config.ell, config.s, config.t, run);
            rec.transcript_bits = enc.stream.size();
            PartialRestriction back =
                multi_decode(part, ors, config.ell, config.s, config.t,
                             enc.rho_star, enc.stream);
            rec.verified = back.alive == ctx.rho.alive &&
                           back.base == ctx.rho.base;
        }
        report.records.push_back(rec);
    }
    finish_report(report);
    return report;
}

void write_report_csv(std::ostream& out, const ExperimentReport& report) {
    out << "trial,cap_hit,verified,depth,stages,exposed,a,b,c,bits,"
           "measured_A\n";
    for (const TrialRecord& r : report.records) {
        out << r.trial << "," << r.cap_hit << "," << r.verified << ","
            << r.depth_reached << "," << r.stages << "," << r.exposed << ","
            << r.a << "," << r.b << "," << r.c << "," << r.transcript_bits
            << "," << r.measured_A << "\n";
    }
}

void write_report_json(std::ostream& out, const ExperimentReport& report) {
    nlohmann::json j;
    const SwitchConfig& c = report.config;
    j["config"] = {{"n1", c.n1},       {"n2", c.n2},
                   {"k", c.k},         {"t", c.t},
                   {"s", c.s},         {"ell", c.ell},
                   {"m", c.m},         {"formulas", c.formulas},
                   {"trials", c.trials}, {"seed", c.seed},
                   {"adversarial", c.adversarial},
                   {"direct_sampler", c.direct_sampler}};
    j["cap_hits"] = report.cap_hits;
    j["verified"] = report.verified;
    j["tail"] = report.tail;
    j["wilson"] = {report.wilson_lo, report.wilson_hi};
    j["bound_display_only"] = report.bound_value;
    out << j.dump(2) << "\n";
}

} // namespace gsw

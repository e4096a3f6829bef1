// Command-line surface: formula generation, restriction sampling, pairing
// construction, switching experiments, encode/decode stress runs, counting
// arithmetic, the resolution upper bound, and Frege proof checking.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "gsw/census.hpp"
#include "gsw/encode.hpp"
#include "gsw/evaluation.hpp"
#include "gsw/experiment.hpp"
#include "gsw/resolution.hpp"

using namespace gsw;

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open " + path);
    return out;
}

int cmd_gen(int n, const std::string& charges, const std::string& out_path,
            bool dump_geometry, int n2) {
    TorusGrid grid(n);
    ChargeVector alpha(grid.num_nodes(), 1);
    if (charges == "zero")
        alpha.assign(grid.num_nodes(), 0);
    else if (charges != "ones")
        throw std::runtime_error("charges must be 'ones' or 'zero'");
    TseitinInstance inst(grid.as_graph(), alpha);
    CnfFormula cnf = to_cnf(inst);
    std::string header = "tseitin torus n=" + std::to_string(n) +
                         " charges=" + charges;
    if (out_path.empty())
        write_dimacs(std::cout, cnf, header);
    else {
        auto out = open_out(out_path);
        write_dimacs(out, cnf, header);
    }
    if (dump_geometry) {
        SubSquarePartition part(n, n2, true);
        part.dump_geometry(std::cerr);
    }
    return 0;
}

int cmd_restrict(int n1, int n2, int k, uint64_t seed, bool partial,
                 const std::string& save, const std::string& apply_out) {
    SubSquarePartition part(n1, n2, true);
    Rng rng(seed);
    if (partial) {
        PartialRestriction rho = sample_partial(part, k, rng);
        GraphicalPairing pi0 = build_pairing(part, rho.alive, rho.chosen);
        if (!save.empty()) {
            auto out = open_out(save);
            write_restriction(out, rho, &pi0, k, seed);
        } else {
            write_restriction(std::cout, rho, &pi0, k, seed);
        }
        return 0;
    }
    FullRestriction sigma = sample_full(part, k, rng);
    ApplyAudit audit = apply_full(sigma);
    int sat = 0, taut = 0, axiom = 0;
    for (NodeFate f : audit.fate) {
        sat += f == NodeFate::Satisfied;
        taut += f == NodeFate::Tautology;
        axiom += f == NodeFate::NewAxiom;
    }
    std::cerr << "audit: satisfied=" << sat << " tautology=" << taut
              << " new-axiom=" << axiom << " matches-small-instance="
              << (audit.matches_small_instance ? "yes" : "no") << "\n";
    if (!apply_out.empty()) {
        auto out = open_out(apply_out);
        write_dimacs(out, audit.restricted,
                     "restricted instance n2=" + std::to_string(n2));
    }
    if (!save.empty()) {
        auto out = open_out(save);
        write_restriction(out, sigma, nullptr, k, seed);
    }
    return audit.matches_small_instance ? 0 : 1;
}

int cmd_pair(int n1, int n2, int lo, int hi, uint64_t seed, int trials) {
    SubSquarePartition part(n1, n2, true);
    Rng rng(seed);
    for (int i = 0; i < trials; ++i) {
        auto alive = sample_alive_direct(part, lo, hi, rng);
        auto chosen = chosen_from_alive(part, alive);
        GraphicalPairing pi0 = build_pairing(part, alive, chosen);
        validate_pairing(part, alive, chosen, pi0);
        int stars = 0;
        for (const auto& comp : pi0.components)
            stars += comp.star;
        std::cout << "trial " << i << ": components="
                  << pi0.components.size() << " stars=" << stars << "\n";
    }
    return 0;
}

int cmd_switch(SwitchConfig config, const std::string& csv,
               const std::string& json, bool multi) {
    ExperimentReport report =
        multi ? run_multi_experiment(config) : run_switch_experiment(config);
    if (!csv.empty()) {
        auto out = open_out(csv);
        write_report_csv(out, report);
    }
    if (json.empty()) {
        write_report_json(std::cout, report);
    } else {
        auto out = open_out(json);
        write_report_json(out, report);
    }
    std::cerr << (report.all_verified() ? "all trials verified"
                                        : "VERIFICATION FAILURES")
              << ": " << report.verified << "/" << report.records.size()
              << " (cap hits: " << report.cap_hits << ")\n";
    return report.all_verified() ? 0 : 1;
}

int cmd_roundtrip(int n1, int n2, int k, int s, int t, int trials,
                  uint64_t seed, const std::string& dump_stages) {
    SubSquarePartition part(n1, n2, true);
    int done = 0, attempts = 0;
    for (uint64_t trial = 0; done < trials && attempts < trials * 50;
         ++trial, ++attempts) {
        Rng rng = Rng::for_trial(seed, trial);
        SwitchContext ctx = make_context(part, sample_partial(part, k, rng));
        Rng trng = Rng::for_trial(seed ^ 0xabcdef, trial);
        std::vector<DTree> trees;
        for (int i = 0; i < 4; ++i)
            trees.push_back(parity_path_tree(part, ctx.big_inst, t, trng));
        EcdtResult run = build_ecdt(ctx, trees, exposure_cap(s));
        if (!run.cap_hit)
            continue;
        EncodeResult enc = encode(ctx, trees, s, t, run);
        PartialRestriction back =
            decode(part, trees, s, t, enc.rho_star, enc.stream);
        bool ok = back.alive == ctx.rho.alive && back.base == ctx.rho.base;
        ++done;
        std::cout << "trial " << trial << ": stages=" << enc.stages
                  << " bits=" << enc.stream.size() << " a=" << enc.a
                  << " b=" << enc.b << " c=" << enc.c
                  << " roundtrip=" << (ok ? "exact" : "BROKEN") << "\n";
        if (!ok)
            return 1;
        if (!dump_stages.empty()) {
            auto out = open_out(dump_stages);
            for (size_t j = 0; j < run.stages.size(); ++j) {
                const StageRecord& st = run.stages[j];
                out << "{\"stage\":" << j << ",\"tree\":" << st.tree_index
                    << ",\"support\":" << st.forcing.support().size()
                    << ",\"disappearing\":" << st.disappearing.size()
                    << ",\"a\":" << st.a << ",\"b\":" << st.b << "}\n";
            }
        }
    }
    std::cerr << done << " cap-hit round trips, all exact\n";
    return done == trials ? 0 : 1;
}

int cmd_census(int m, int k, int s, int n1, int n2) {
    SpaceCensus c = m > 0 ? census_from_m(m, k, s) : census(n1, n2, k, s);
    std::cout << c.report();
    return c.all_hold() ? 0 : 1;
}

int cmd_refute(int n, const std::string& out_path) {
    ResolutionProof proof = build_grid_refutation(n);
    CnfFormula cnf = to_cnf(all_ones_instance(TorusGrid(n)));
    ResolutionCheck chk = check_resolution(proof, cnf);
    std::cerr << "steps=" << proof.steps.size()
              << " max-width=" << proof.max_width
              << " checked=" << (chk.ok ? "ok" : "FAILED")
              << " refutation=" << (chk.refutation ? "yes" : "no") << "\n";
    if (!out_path.empty()) {
        auto out = open_out(out_path);
        write_resolution(out, proof);
    }
    return chk.ok && chk.refutation ? 0 : 1;
}

int cmd_frege(const std::string& proof_path, int n,
              const std::string& axioms) {
    TorusGrid grid(n);
    std::ifstream in(proof_path);
    if (!in)
        throw std::runtime_error("cannot open " + proof_path);
    Proof proof = read_proof(in);

    std::vector<Formula> axiom_formulas;
    if (axioms == "tseitin") {
        TseitinInstance inst = all_ones_instance(grid);
        CnfFormula cnf = to_cnf(inst);
        for (const Clause& c : cnf.clauses) {
            Formula f;
            for (size_t li = 0; li < c.lits.size(); ++li) {
                int lit = c.lits[li];
                Formula lf = lit > 0 ? make_var(std::abs(lit) - 1)
                                     : make_not(make_var(std::abs(lit) - 1));
                f = li == 0 ? lf : make_or(f, lf);
            }
            axiom_formulas.push_back(f);
        }
    }
    ProofCheck chk = check_proof(proof, axiom_formulas);
    if (chk.ok) {
        std::cerr << "proof checks: " << proof.lines.size() << " lines\n";
        return 0;
    }
    std::cerr << "proof INVALID at line " << chk.failing_line << ": "
              << chk.reason << "\n";
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tseitin torus switching-lemma toolkit"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "Tseitin contradiction to DIMACS");
    int gen_n = 3, gen_n2 = 3;
    std::string gen_charges = "ones", gen_out;
    bool gen_geom = false;
    gen->add_option("-n", gen_n, "grid dimension (odd)");
    gen->add_option("--charges", gen_charges, "'ones' or 'zero'");
    gen->add_option("-o,--out", gen_out, "output file (default stdout)");
    gen->add_flag("--dump-geometry", gen_geom, "dump the partition geometry");
    gen->add_option("--n2", gen_n2, "small grid for --dump-geometry");

    // restrict
    auto* res = app.add_subcommand("restrict", "sample and apply sigma/rho");
    int r_n1 = 135, r_n2 = 3, r_k = 11;
    uint64_t r_seed = 1;
    bool r_partial = false;
    std::string r_save, r_apply;
    res->add_option("--n1", r_n1);
    res->add_option("--n2", r_n2);
    res->add_option("-k", r_k);
    res->add_option("--seed", r_seed);
    res->add_flag("--partial", r_partial, "sample rho instead of sigma");
    res->add_option("--save", r_save, "write the restriction to a file");
    res->add_option("--apply-out", r_apply, "write the restricted DIMACS");

    // pair
    auto* pair = app.add_subcommand("pair", "build graphical pairings");
    int p_n1 = 45, p_n2 = 3, p_lo = 2, p_hi = 3, p_trials = 10;
    uint64_t p_seed = 1;
    pair->add_option("--n1", p_n1);
    pair->add_option("--n2", p_n2);
    pair->add_option("--lo", p_lo, "per-square alive minimum");
    pair->add_option("--hi", p_hi, "per-square alive maximum");
    pair->add_option("--seed", p_seed);
    pair->add_option("--trials", p_trials);

    // switch / multiswitch
    SwitchConfig sw;
    std::string sw_csv, sw_json, sw_config;
    auto add_switch_options = [&](CLI::App* cmd) {
        cmd->add_option("--n1", sw.n1);
        cmd->add_option("--n2", sw.n2);
        cmd->add_option("-k", sw.k);
        cmd->add_option("-t", sw.t, "input tree depth");
        cmd->add_option("-s", sw.s, "switching depth");
        cmd->add_option("--ell", sw.ell, "completion depth (multi)");
        cmd->add_option("-m", sw.m, "trees per formula");
        cmd->add_option("--formulas", sw.formulas);
        cmd->add_option("--trials", sw.trials);
        cmd->add_option("--seed", sw.seed);
        cmd->add_flag("--adversarial", sw.adversarial);
        cmd->add_flag("--direct-sampler", sw.direct_sampler);
        cmd->add_option("--bound-A", sw.bound_A, "display-only constant");
        cmd->add_option("--bound-c1", sw.bound_c1, "display-only constant");
        cmd->add_option("--bound-c2", sw.bound_c2, "display-only constant");
        cmd->add_option("--csv", sw_csv, "per-trial records");
        cmd->add_option("--json", sw_json, "report (default stdout)");
        cmd->add_option("--config", sw_config, "JSON config file");
    };
    auto* sw_cmd = app.add_subcommand("switch", "switching experiment");
    add_switch_options(sw_cmd);
    auto* msw_cmd =
        app.add_subcommand("multiswitch", "multi-switching experiment");
    add_switch_options(msw_cmd);

    // roundtrip
    auto* rt = app.add_subcommand("roundtrip", "encode/decode stress");
    int rt_n1 = 135, rt_n2 = 3, rt_k = 11, rt_s = 8, rt_t = 2,
        rt_trials = 20;
    uint64_t rt_seed = 1;
    std::string rt_dump;
    rt->add_option("--n1", rt_n1);
    rt->add_option("--n2", rt_n2);
    rt->add_option("-k", rt_k);
    rt->add_option("-s", rt_s);
    rt->add_option("-t", rt_t);
    rt->add_option("--trials", rt_trials);
    rt->add_option("--seed", rt_seed);
    rt->add_option("--dump-stages", rt_dump, "stage records as JSON lines");

    // census
    auto* cen = app.add_subcommand("census", "counting-lemma arithmetic");
    int c_m = 0, c_k = 9, c_s = 1, c_n1 = 45, c_n2 = 3;
    cen->add_option("-m", c_m, "total centers (overrides n1/n2)");
    cen->add_option("-k", c_k);
    cen->add_option("-s", c_s);
    cen->add_option("--n1", c_n1);
    cen->add_option("--n2", c_n2);

    // refute
    auto* ref = app.add_subcommand("refute", "resolution refutation");
    int f_n = 3;
    std::string f_out;
    ref->add_option("-n", f_n, "grid dimension (odd, 3..9)");
    ref->add_option("-o,--out", f_out, "write the proof as text");

    // frege
    auto* fre = app.add_subcommand("frege", "check a Frege proof file");
    std::string fr_proof, fr_axioms = "none";
    int fr_n = 9;
    fre->add_option("proof", fr_proof, "proof file")->required();
    fre->add_option("--axioms", fr_axioms, "'none' or 'tseitin'");
    fre->add_option("-n", fr_n, "grid dimension for tseitin axioms");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return cmd_gen(gen_n, gen_charges, gen_out, gen_geom, gen_n2);
        if (res->parsed())
            return cmd_restrict(r_n1, r_n2, r_k, r_seed, r_partial, r_save,
                                r_apply);
        if (pair->parsed())
            return cmd_pair(p_n1, p_n2, p_lo, p_hi, p_seed, p_trials);
        if (sw_cmd->parsed() || msw_cmd->parsed()) {
            if (!sw_config.empty()) {
                std::ifstream in(sw_config);
                nlohmann::json j;
                in >> j;
                sw.n1 = j.value("n1", sw.n1);
                sw.n2 = j.value("n2", sw.n2);
                sw.k = j.value("k", sw.k);
                sw.t = j.value("t", sw.t);
                sw.s = j.value("s", sw.s);
                sw.ell = j.value("ell", sw.ell);
                sw.m = j.value("m", sw.m);
                sw.formulas = j.value("formulas", sw.formulas);
                sw.trials = j.value("trials", sw.trials);
                sw.seed = j.value("seed", sw.seed);
                sw.adversarial = j.value("adversarial", sw.adversarial);
                sw.direct_sampler =
                    j.value("direct_sampler", sw.direct_sampler);
            }
            return cmd_switch(sw, sw_csv, sw_json, msw_cmd->parsed());
        }
        if (rt->parsed())
            return cmd_roundtrip(rt_n1, rt_n2, rt_k, rt_s, rt_t, rt_trials,
                                 rt_seed, rt_dump);
        if (cen->parsed())
            return cmd_census(c_m, c_k, c_s, c_n1, c_n2);
        if (ref->parsed())
            return cmd_refute(f_n, f_out);
        if (fre->parsed())
            return cmd_frege(fr_proof, fr_n, fr_axioms);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

#include "doctest.h"

#include <sstream>

#include "gsw/evaluation.hpp"

using namespace gsw;

TEST_CASE("formula size and depth conventions") {
    CHECK(formula_size(parse_formula("x0")) == 0);
    CHECK(formula_depth(parse_formula("x0")) == 0);
    // ~(~x | ~y): blocks not, or, not
    Formula f = parse_formula("~(~x0 | ~x1)");
    CHECK(formula_size(f) == 4);
    CHECK(formula_depth(f) == 3);
    // consecutive ors form one block
    CHECK(formula_depth(parse_formula("(x0 | x1) | x2")) == 1);
    CHECK(formula_depth(parse_formula("~~x0")) == 1);
}

TEST_CASE("conjunction desugars") {
    Formula f = parse_formula("x0 & x1");
    CHECK(formula_to_text(f) == "~(~x0 | ~x1)");
}

TEST_CASE("formula text round trip") {
    for (const char* text : {"x0", "~x3", "(x0 | ~x1)", "~(x2 | (x3 | x4))"}) {
        Formula f = parse_formula(text);
        CHECK(equal(parse_formula(formula_to_text(f)), f));
    }
}

TEST_CASE("isomorphism commutes ors recursively") {
    CHECK(isomorphic(parse_formula("x0 | x1"), parse_formula("x1 | x0")));
    CHECK(isomorphic(parse_formula("(x0 | x1) | x2"),
                     parse_formula("x2 | (x1 | x0)")));
    CHECK_FALSE(isomorphic(parse_formula("x0 | x1"), parse_formula("x0 | x2")));
    CHECK_FALSE(isomorphic(parse_formula("~(x0 | x1)"),
                           parse_formula("~x0 | x1")));
}

TEST_CASE("excluded middle matches") {
    Formula c = parse_formula("x5 | ~x5");
    auto w = check_inference(Rule::ExcludedMiddle, {}, c);
    REQUIRE(w.has_value());
    CHECK(equal(w->map.at("p"), parse_formula("x5")));
    CHECK_FALSE(
        check_inference(Rule::ExcludedMiddle, {}, parse_formula("x5 | ~x6"))
            .has_value());
}

TEST_CASE("cut matches with the expected witness") {
    auto w = check_inference(
        Rule::Cut, {parse_formula("x0 | x1"), parse_formula("~x0 | x2")},
        parse_formula("x1 | x2"));
    REQUIRE(w.has_value());
    CHECK(equal(w->map.at("p"), parse_formula("x0")));
    CHECK(equal(w->map.at("q"), parse_formula("x1")));
    CHECK(equal(w->map.at("r"), parse_formula("x2")));
}

TEST_CASE("contraction does not commute") {
    CHECK(check_inference(Rule::Contraction, {parse_formula("x1 | x1")},
                          parse_formula("x1"))
              .has_value());
    CHECK_FALSE(check_inference(Rule::Contraction,
                                {parse_formula("x0 | x1")},
                                parse_formula("x1 | x0"))
                    .has_value());
}

TEST_CASE("witnessed inferences are sound") {
    // brute force over all assignments of the variables involved
    struct Case {
        Rule rule;
        std::vector<const char*> premises;
        const char* conclusion;
    };
    std::vector<Case> cases = {
        {Rule::ExcludedMiddle, {}, "(x0 | x1) | ~(x0 | x1)"},
        {Rule::Expansion, {"~x2"}, "(x0 & x1) | ~x2"},
        {Rule::Contraction, {"(x0 | x1) | (x0 | x1)"}, "x0 | x1"},
        {Rule::Association, {"x0 | (x1 | x2)"}, "(x0 | x1) | x2"},
        {Rule::Cut, {"~x3 | x1", "~~x3 | x2"}, "x1 | x2"},
    };
    for (const Case& c : cases) {
        std::vector<Formula> premises;
        for (const char* p : c.premises)
            premises.push_back(parse_formula(p));
        Formula conclusion = parse_formula(c.conclusion);
        REQUIRE(check_inference(c.rule, premises, conclusion).has_value());
        for (uint32_t a = 0; a < 16; ++a) {
            std::vector<uint8_t> assignment = {
                (uint8_t)(a & 1), (uint8_t)((a >> 1) & 1),
                (uint8_t)((a >> 2) & 1), (uint8_t)((a >> 3) & 1)};
            bool all = true;
            for (const Formula& p : premises)
                all = all && eval_formula(p, assignment);
            if (all)
                CHECK(eval_formula(conclusion, assignment));
        }
    }
}

TEST_CASE("proof checking and the file format") {
    Proof proof;
    proof.lines.push_back(
        {parse_formula("x0 | ~x0"), false, Rule::ExcludedMiddle, {}});
    proof.lines.push_back(
        {parse_formula("x1 | (x0 | ~x0)"), false, Rule::Expansion, {0}});
    ProofCheck chk = check_proof(proof, {});
    CHECK(chk.ok);

    std::stringstream ss;
    write_proof(ss, proof);
    Proof back = read_proof(ss);
    REQUIRE(back.lines.size() == 2);
    CHECK(equal(back.lines[1].formula, proof.lines[1].formula));
    CHECK(check_proof(back, {}).ok);

    // a broken premise index
    proof.lines[1].premises = {1};
    CHECK_FALSE(check_proof(proof, {}).ok);
}

TEST_CASE("axiom lines must match the axiom set") {
    Proof proof;
    proof.lines.push_back({parse_formula("x0 | x1"), true});
    CHECK_FALSE(check_proof(proof, {}).ok);
    CHECK(check_proof(proof, {parse_formula("x0 | x1")}).ok);
}

TEST_CASE("canonical axiom evaluation verifies") {
    TorusGrid grid(9);
    TseitinInstance inst = all_ones_instance(grid);
    std::vector<int> nodes = {grid.node(4, 4), grid.node(1, 7),
                              grid.node(6, 2)};
    Evaluation phi = build_axiom_evaluation(grid, inst, nodes);
    CHECK(phi.t >= 2);

    std::vector<Formula> axioms;
    CnfFormula cnf = to_cnf(inst);
    for (int v : nodes) {
        for (int ci = 0; ci < 8; ++ci) {
            const Clause& c = cnf.clauses[(size_t)v * 8 + ci];
            Formula f;
            for (size_t li = 0; li < c.lits.size(); ++li) {
                int lit = c.lits[li];
                Formula lf = lit > 0 ? make_var(std::abs(lit) - 1)
                                     : make_not(make_var(std::abs(lit) - 1));
                f = li == 0 ? lf : make_or(f, lf);
            }
            axioms.push_back(f);
            CHECK(is_b_tree(phi.tree_of(f), 1));
        }
    }
    EvalCheck chk = check_evaluation(grid, inst, phi, axioms);
    CHECK(chk.ok);
}

TEST_CASE("single-property mutations are rejected") {
    TorusGrid grid(9);
    TseitinInstance inst = all_ones_instance(grid);
    std::vector<int> nodes = {grid.node(4, 4)};
    Evaluation base = build_axiom_evaluation(grid, inst, nodes);
    REQUIRE(check_evaluation(grid, inst, base, {}).ok);

    SUBCASE("variable mapped to the wrong shape") {
        Evaluation phi = base;
        for (int i = 0; i < (int)phi.domain.size(); ++i)
            if (phi.domain[i]->kind == FormulaNode::Var)
                phi.trees[i] = make_leaf(1);
        CHECK_FALSE(check_evaluation(grid, inst, phi, {}).ok);
    }
    SUBCASE("negation with an unflipped leaf") {
        Evaluation phi = base;
        for (int i = 0; i < (int)phi.domain.size(); ++i)
            if (phi.domain[i]->kind == FormulaNode::Not)
                phi.trees[i] = phi.tree_of(phi.domain[i]->lhs);
        CHECK_FALSE(check_evaluation(grid, inst, phi, {}).ok);
    }
    SUBCASE("or-tree that ignores its children") {
        Evaluation phi = base;
        bool mutated = false;
        for (int i = 0; i < (int)phi.domain.size() && !mutated; ++i) {
            if (phi.domain[i]->kind == FormulaNode::Or &&
                !is_b_tree(phi.trees[i], 1)) {
                phi.trees[i] = make_leaf(1);
                mutated = true;
            }
        }
        REQUIRE(mutated);
        CHECK_FALSE(check_evaluation(grid, inst, phi, {}).ok);
    }
    SUBCASE("axiom mapped to a 0-leaf tree") {
        Evaluation phi = base;
        Formula ax;
        for (int i = 0; i < (int)phi.domain.size(); ++i) {
            if (phi.domain[i]->kind == FormulaNode::Or &&
                is_b_tree(phi.trees[i], 1) &&
                depth(phi.trees[i]) >= 2) {
                ax = phi.domain[i];
                phi.trees[i] = negate_leaves(phi.trees[i]);
                break;
            }
        }
        REQUIRE(ax != nullptr);
        CHECK_FALSE(check_evaluation(grid, inst, phi, {ax}).ok);
    }
    SUBCASE("tree breaking the depth bound") {
        Evaluation phi = base;
        phi.t = 1;
        CHECK_FALSE(check_evaluation(grid, inst, phi, {}).ok);
    }
}

TEST_CASE("restricted evaluations keep the four properties") {
    SubSquarePartition part(45, 3, true);
    const TorusGrid& grid = part.grid();
    TseitinInstance inst = all_ones_instance(grid);
    std::vector<int> nodes;
    for (int sq = 0; sq < 3; ++sq)
        nodes.push_back(part.center_node(part.center_from_id(sq * part.delta())));
    Evaluation phi = build_axiom_evaluation(grid, inst, nodes);
    REQUIRE(check_evaluation(grid, inst, phi, {}).ok);

    Rng rng(77);
    TseitinInstance small_inst = all_ones_instance(part.small_grid());
    for (int trial = 0; trial < 5; ++trial) {
        FullRestriction sigma = sample_full(part, 11, rng);
        Evaluation restricted =
            restrict_evaluation(grid, inst, phi, sigma);
        EvalCheck chk = check_evaluation(part.small_grid(), small_inst,
                                         restricted, {});
        CHECK(chk.ok);
        // axioms keep mapping to 1-trees
        for (int i = 0; i < (int)phi.domain.size(); ++i)
            if (is_b_tree(phi.trees[i], 1))
                CHECK(is_b_tree(restricted.trees[i], 1));
    }
}

TEST_CASE("noproof accepts a valid derivation and flags a bogus one") {
    TorusGrid grid(9);
    TseitinInstance inst = all_ones_instance(grid);
    int x = grid.right_edge(grid.node(4, 4));
    int y = grid.down_edge(grid.node(1, 1));

    Proof proof;
    Formula fx = make_var(x);
    Formula mid = make_or(fx, make_not(fx));
    proof.lines.push_back({mid, false, Rule::ExcludedMiddle, {}});
    proof.lines.push_back(
        {make_or(make_var(y), mid), false, Rule::Expansion, {0}});
    REQUIRE(check_proof(proof, {}).ok);

    DTree tx = make_node(x, make_leaf(0), make_leaf(1));
    DTree tnx = negate_leaves(tx);
    DTree tmid = make_node(x, make_leaf(1), make_leaf(1));
    DTree ty = make_node(y, make_leaf(0), make_leaf(1));
    DTree tline2 = make_node(y, tmid, make_leaf(1));

    Evaluation phi;
    phi.t = 2;
    phi.domain = {fx, make_not(fx), mid, make_var(y), proof.lines[1].formula};
    phi.trees = {tx, tnx, tmid, ty, tline2};
    REQUIRE(check_evaluation(grid, inst, phi, {}).ok);

    NoproofCheck ok = check_noproof(grid, inst, proof, {phi, phi});
    CHECK(ok.ok);

    // fabricated derivation of the constant false
    Proof bogus;
    bogus.lines.push_back({make_const(0), true});
    Evaluation psi;
    psi.t = 0;
    psi.domain = {make_const(0)};
    psi.trees = {make_leaf(0)};
    NoproofCheck bad = check_noproof(grid, inst, bogus, {psi});
    CHECK_FALSE(bad.ok);
    CHECK(bad.line == 0);
}

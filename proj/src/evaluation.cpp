#include "gsw/evaluation.hpp"

#include <algorithm>
#include <sstream>

namespace gsw {

namespace {

bool same_shape_negated(const DTree& a, const DTree& b) {
    if (a->is_leaf() != b->is_leaf())
        return false;
    if (a->is_leaf())
        return a->label == 1 - b->label;
    return a->var == b->var && same_shape_negated(a->child0, b->child0) &&
           same_shape_negated(a->child1, b->child1);
}

} // namespace

EvalCheck check_evaluation(const TorusGrid& grid, const TseitinInstance& inst,
                           const Evaluation& phi,
                           const std::vector<Formula>& axioms) {
    for (int i = 0; i < (int)phi.domain.size(); ++i) {
        const Formula& f = phi.domain[i];
        const DTree& tree = phi.trees[i];
        if (!tree)
            return {false, "missing tree", i};
        if (depth(tree) > phi.t)
            return {false, "tree deeper than the bound", i};
        if (!validate_tree(grid, inst, tree, LcMode::Relaxed))
            return {false, "tree not locally consistent", i};
        switch (f->kind) {
        case FormulaNode::Const:
            if (!tree->is_leaf() || tree->label != f->value)
                return {false, "constant mapped to the wrong tree", i};
            break;
        case FormulaNode::Var: {
            bool good = !tree->is_leaf() && tree->var == f->var &&
                        tree->child0->is_leaf() && tree->child0->label == 0 &&
                        tree->child1->is_leaf() && tree->child1->label == 1;
            if (!good)
                return {false, "variable mapped to the wrong tree", i};
            break;
        }
        case FormulaNode::Not: {
            DTree inner = phi.tree_of(f->lhs);
            if (inner && !same_shape_negated(tree, inner))
                return {false,
                        "negation does not flip the leaf labels in place",
                        i};
            break;
        }
        case FormulaNode::Or: {
            DTree a = phi.tree_of(f->lhs);
            DTree b = phi.tree_of(f->rhs);
            if (a && b &&
                !represents(grid, inst, tree, {a, b}, LcMode::Relaxed))
                return {false, "or-tree does not represent its children", i};
            break;
        }
        }
    }
    for (const Formula& ax : axioms) {
        DTree tree = phi.tree_of(ax);
        if (tree && !is_b_tree(tree, 1))
            return {false, "axiom not mapped to a 1-tree", phi.find(ax)};
    }
    return {};
}

namespace {

struct Literal {
    int var;
    bool positive;
};

DTree literal_list_tree(const TorusGrid& grid, const TseitinInstance& inst,
                        const std::vector<Literal>& lits, size_t i,
                        PartialAssignment& acc) {
    if (i == lits.size())
        return make_leaf(0);
    const Literal& lit = lits[i];
    if (acc.assigns(lit.var)) {
        if ((acc.value(lit.var) == 1) == lit.positive)
            return make_leaf(1);
        return literal_list_tree(grid, inst, lits, i + 1, acc);
    }
    Implication iv = implied_value(grid, inst, acc, lit.var, LcMode::Relaxed);
    if (iv != Implication::Free) {
        int val = iv == Implication::One ? 1 : 0;
        acc.set(lit.var, val);
        DTree r = ((val == 1) == lit.positive)
                      ? make_leaf(1)
                      : literal_list_tree(grid, inst, lits, i + 1, acc);
        acc.unset(lit.var);
        return r;
    }
    acc.set(lit.var, 0);
    DTree c0 = (!lit.positive)
                   ? make_leaf(1)
                   : literal_list_tree(grid, inst, lits, i + 1, acc);
    acc.set(lit.var, 1);
    DTree c1 = lit.positive
                   ? make_leaf(1)
                   : literal_list_tree(grid, inst, lits, i + 1, acc);
    acc.unset(lit.var);
    return make_node(lit.var, std::move(c0), std::move(c1));
}

} // namespace

Evaluation build_axiom_evaluation(const TorusGrid& grid,
                                  const TseitinInstance& inst,
                                  const std::vector<int>& nodes) {
    Evaluation phi;
    auto add = [&](const Formula& f, DTree tree) {
        if (phi.find(f) < 0) {
            phi.domain.push_back(f);
            phi.trees.push_back(std::move(tree));
        }
    };

    CnfFormula cnf = to_cnf(inst);
    // clauses are node-major, 8 per degree-4 node
    for (int v : nodes) {
        for (int ci = 0; ci < 8; ++ci) {
            const Clause& clause = cnf.clauses[(size_t)v * 8 + ci];
            std::vector<Literal> lits;
            Formula f;
            for (size_t li = 0; li < clause.lits.size(); ++li) {
                int lit = clause.lits[li];
                int var = std::abs(lit) - 1;
                lits.push_back({var, lit > 0});

                Formula lf = lit > 0 ? make_var(var)
                                     : make_not(make_var(var));
                add(make_var(var),
                    make_node(var, make_leaf(0), make_leaf(1)));
                if (lit < 0)
                    add(lf, make_node(var, make_leaf(1), make_leaf(0)));
                f = li == 0 ? lf : make_or(f, lf);

                PartialAssignment acc(inst.num_vars());
                std::vector<Literal> prefix(lits.begin(), lits.end());
                add(f, literal_list_tree(grid, inst, prefix, 0, acc));
            }
        }
    }
    for (const DTree& t : phi.trees)
        phi.t = std::max(phi.t, depth(t));
    return phi;
}

Formula restrict_formula(const Formula& f, const AffineMap& map) {
    switch (f->kind) {
    case FormulaNode::Const:
        return f;
    case FormulaNode::Var: {
        const EdgeImage& img = map[f->var];
        if (img.is_const())
            return make_const(img.const_value());
        Formula y = make_var(img.var);
        return img.negated() ? make_not(y) : y;
    }
    case FormulaNode::Not:
        return make_not(restrict_formula(f->lhs, map));
    default:
        return make_or(restrict_formula(f->lhs, map),
                       restrict_formula(f->rhs, map));
    }
}

Evaluation restrict_evaluation(const TorusGrid& big_grid,
                               const TseitinInstance& big_inst,
                               const Evaluation& phi,
                               const FullRestriction& sigma) {
    const SubSquarePartition& part = *sigma.part;
    Evaluation out;
    out.t = phi.t;
    TseitinInstance small_inst = all_ones_instance(part.small_grid());
    for (int i = 0; i < (int)phi.domain.size(); ++i) {
        out.domain.push_back(restrict_formula(phi.domain[i], sigma.map));
        out.trees.push_back(restrict_by_full(big_grid, big_inst, phi.trees[i],
                                             sigma.map, part.small_grid(),
                                             small_inst));
    }
    return out;
}

bool evaluations_functionally_equivalent(const TorusGrid& grid,
                                         const TseitinInstance& inst,
                                         const Evaluation& a,
                                         const Evaluation& b) {
    for (int i = 0; i < (int)a.domain.size(); ++i) {
        for (int k = 0; k < (int)b.domain.size(); ++k) {
            if (!isomorphic(a.domain[i], b.domain[k]))
                continue;
            if (!functionally_equivalent(grid, inst, a.trees[i], b.trees[k],
                                         LcMode::Relaxed))
                return false;
        }
    }
    return true;
}

NoproofCheck check_noproof(const TorusGrid& grid, const TseitinInstance& inst,
                           const Proof& proof,
                           const std::vector<Evaluation>& per_line) {
    if (per_line.size() != proof.lines.size())
        return {false, -1, "one evaluation per line required"};
    for (int i = 0; i < (int)proof.lines.size(); ++i) {
        const ProofLine& line = proof.lines[i];
        DTree tree = per_line[i].tree_of(line.formula);
        if (!tree)
            return {false, i, "line formula missing from its evaluation"};
        if (is_b_tree(tree, 1))
            continue;
        // the hypothesis set is violated; name the broken piece
        std::ostringstream why;
        why << "line tree has a 0-branch";
        if (line.is_axiom)
            why << " although the line is an axiom (evaluation property 2 "
                   "violated)";
        else
            why << " under rule " << rule_name(line.rule)
                << "; the case analysis for this rule needs every premise "
                   "tree to be a 1-tree in a functionally equivalent "
                   "evaluation";
        return {false, i, why.str()};
    }
    return {};
}

} // namespace gsw

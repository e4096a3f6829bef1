#ifndef GSW_DECISION_TREE_HPP
#define GSW_DECISION_TREE_HPP

#include <memory>
#include <string>
#include <vector>

#include "gsw/consistency.hpp"

namespace gsw {

// Image of one edge variable under an affine restriction: a constant, or a
// variable of the smaller instance, possibly negated.
struct EdgeImage {
    enum Kind : uint8_t { Const0, Const1, Var, NegVar };
    Kind kind = Const0;
    int var = -1;

    static EdgeImage constant(int b) { return {b ? Const1 : Const0, -1}; }
    static EdgeImage variable(int v, bool negated) {
        return {negated ? NegVar : Var, v};
    }
    bool is_const() const { return kind == Const0 || kind == Const1; }
    int const_value() const { return kind == Const1 ? 1 : 0; }
    bool negated() const { return kind == NegVar; }
};
using AffineMap = std::vector<EdgeImage>;

struct DTreeNode;
using DTree = std::shared_ptr<const DTreeNode>;

// Immutable decision tree; internal nodes query a variable, leaves carry a
// 0/1 label.  Shared as a DAG, never mutated.
struct DTreeNode {
    int var = -1; // -1 at leaves
    int label = 0;
    DTree child0, child1;

    bool is_leaf() const { return var < 0; }
};

DTree make_leaf(int label);
DTree make_node(int var, DTree c0, DTree c1);

int depth(const DTree& t);
bool is_b_tree(const DTree& t, int b);

// leaf label under a total assignment
int evaluate(const DTree& t, const std::vector<uint8_t>& assignment);

struct Branch {
    PartialAssignment assignment; // the queried variables
    std::vector<int> order;       // root-to-leaf query order
    int label = 0;
};

// depth-first, 0-edge before 1-edge: the fixed branch order shared by the
// whole code base
std::vector<Branch> branches(const DTree& t, int num_vars);

// distinct variables per branch, every branch locally consistent, and in
// strict mode depth at most n/4
bool validate_tree(const TorusGrid& grid, const TseitinInstance& inst,
                   const DTree& t, LcMode mode = LcMode::Relaxed);

// Branches surviving are those pairwise locally consistent with alpha, with
// assigned and locally implied queries removed.  Throws if no branch
// survives (impossible inside the support/depth budget).
DTree restrict_by_assignment(const TorusGrid& grid,
                             const TseitinInstance& inst, const DTree& t,
                             const PartialAssignment& alpha,
                             LcMode mode = LcMode::Relaxed);

// Restriction of a grid-level tree by a full restriction, producing a tree
// over the variables of the smaller instance.
DTree restrict_by_full(const TorusGrid& big_grid,
                       const TseitinInstance& big_inst, const DTree& t,
                       const AffineMap& sigma, const TorusGrid& small_grid,
                       const TseitinInstance& small_inst);

bool functionally_equivalent(const TorusGrid& grid,
                             const TseitinInstance& inst, const DTree& t1,
                             const DTree& t2, LcMode mode = LcMode::Relaxed);

// T represents the OR of the given trees
bool represents(const TorusGrid& grid, const TseitinInstance& inst,
                const DTree& t, const std::vector<DTree>& ors,
                LcMode mode = LcMode::Relaxed);

DTree negate_leaves(const DTree& t);

std::string tree_to_text(const DTree& t);
DTree tree_from_text(const std::string& text);

} // namespace gsw

#endif

#ifndef GSW_EVALUATION_HPP
#define GSW_EVALUATION_HPP

#include "gsw/decision_tree.hpp"
#include "gsw/formula.hpp"
#include "gsw/frege.hpp"
#include "gsw/restriction.hpp"

namespace gsw {

// A t-evaluation: formulas mapped to shallow locally consistent decision
// trees over the edge variables of a Tseitin instance.
struct Evaluation {
    std::vector<Formula> domain;
    std::vector<DTree> trees;
    int t = 0;

    int find(const Formula& f) const {
        for (int i = 0; i < (int)domain.size(); ++i)
            if (equal(domain[i], f))
                return i;
        return -1;
    }
    DTree tree_of(const Formula& f) const {
        int i = find(f);
        return i < 0 ? nullptr : trees[i];
    }
};

struct EvalCheck {
    bool ok = true;
    std::string reason;
    int offender = -1; // domain index
};

// the four defining properties, with the given formulas as the axioms
EvalCheck check_evaluation(const TorusGrid& grid, const TseitinInstance& inst,
                           const Evaluation& phi,
                           const std::vector<Formula>& axioms);

// the canonical evaluation for the parity axioms of the given nodes: query
// the clause literals in order, exit on the first satisfied one; implied
// variables are never queried, which makes every full clause a 1-tree
Evaluation build_axiom_evaluation(const TorusGrid& grid,
                                  const TseitinInstance& inst,
                                  const std::vector<int>& nodes);

// formula images under the affine map of a full restriction
Formula restrict_formula(const Formula& f, const AffineMap& map);

// phi|sigma with domain {F|sigma} and trees {phi(F)|sigma}
Evaluation restrict_evaluation(const TorusGrid& big_grid,
                               const TseitinInstance& big_inst,
                               const Evaluation& phi,
                               const FullRestriction& sigma);

bool evaluations_functionally_equivalent(const TorusGrid& grid,
                                         const TseitinInstance& inst,
                                         const Evaluation& a,
                                         const Evaluation& b);

struct NoproofCheck {
    bool ok = true;
    int line = -1;
    std::string reason;
};

// verifies line by line that each formula's tree is a 1-tree; on failure
// the rule of the offending line is diagnosed
NoproofCheck check_noproof(const TorusGrid& grid, const TseitinInstance& inst,
                           const Proof& proof,
                           const std::vector<Evaluation>& per_line);

} // namespace gsw

#endif

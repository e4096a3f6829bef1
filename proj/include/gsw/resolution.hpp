#ifndef GSW_RESOLUTION_HPP
#define GSW_RESOLUTION_HPP

#include <iosfwd>
#include <map>

#include "gsw/tseitin.hpp"

namespace gsw {

// The clause representation of a parity equation: all full-width clauses
// forbidding the wrong-parity assignments.  Clause indices point into an
// owning proof.
struct ParityClauseSet {
    std::vector<int> vars; // sorted, 0-based
    int parity = 0;
    std::vector<int> clause_steps; // one per clause, canonical order
};

// explicit clause list in canonical pattern order (1-based literals)
std::vector<Clause> parity_clauses(const std::vector<int>& vars, int parity);

struct ResStep {
    Clause clause;
    bool input = false;
    int parent1 = -1, parent2 = -1;
    int pivot = 0; // 1-based variable
};

struct ResolutionProof {
    std::vector<ResStep> steps;
    int max_width = 0;

    int add_input(Clause c);
    int add_resolvent(Clause c, int p1, int p2, int pivot);
};

// Derives the clause set of L1 xor L2 by resolving over the pivot first
// and the remaining shared variables one at a time; tautologies are
// dropped and duplicates merged.
ParityClauseSet resolve_parities(ResolutionProof& proof,
                                 const ParityClauseSet& l1,
                                 const ParityClauseSet& l2, int pivot_var);

// A refutation of the all-ones Tseitin contradiction: sum the node
// equations of column 0, then fold in the columns left to right until the
// empty clause appears.
ResolutionProof build_grid_refutation(int n);

struct ResolutionCheck {
    bool ok = false;
    int failing_step = -1;
    std::string reason;
    bool refutation = false; // final clause empty
};

ResolutionCheck check_resolution(const ResolutionProof& proof,
                                 const CnfFormula& cnf);

void write_resolution(std::ostream& out, const ResolutionProof& proof);

} // namespace gsw

#endif

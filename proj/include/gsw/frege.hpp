#ifndef GSW_FREGE_HPP
#define GSW_FREGE_HPP

#include <iosfwd>

#include "gsw/formula.hpp"

namespace gsw {

// Schoenfield's system over {or, not}
enum class Rule {
    ExcludedMiddle, // |- p or ~p
    Expansion,      // p |- q or p
    Contraction,    // p or p |- p
    Association,    // p or (q or r) |- (p or q) or r
    Cut,            // p or q, ~p or r |- q or r
};

const char* rule_name(Rule r);
std::optional<Rule> rule_from_name(const std::string& name);

// substitution witness on the schema variables p, q, r
struct SubstitutionWitness {
    std::map<std::string, Formula> map;
};

// structural matching of the rule schema against concrete formulas
std::optional<SubstitutionWitness> check_inference(
    Rule rule, const std::vector<Formula>& premises,
    const Formula& conclusion);

struct ProofLine {
    Formula formula;
    bool is_axiom = false;
    Rule rule = Rule::ExcludedMiddle;
    std::vector<int> premises; // indices of earlier lines
};

struct Proof {
    std::vector<ProofLine> lines;
};

struct ProofCheck {
    bool ok = false;
    int failing_line = -1;
    std::string reason;
};

ProofCheck check_proof(const Proof& proof,
                       const std::vector<Formula>& axioms);

// file format: one line per step, "<id>: <formula> ; <rule> <premise ids>"
// with rule "axiom" for axiom references
void write_proof(std::ostream& out, const Proof& proof);
Proof read_proof(std::istream& in);

} // namespace gsw

#endif

#ifndef GSW_FORMULA_HPP
#define GSW_FORMULA_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace gsw {

struct FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

// Formulas over the basis {or, not}; conjunction is parsed as the usual
// abbreviation not(not A or not B).
struct FormulaNode {
    enum Kind { Var, Const, Not, Or } kind;
    int var = -1;      // Var
    int value = 0;     // Const
    Formula lhs, rhs;  // Not uses lhs only
};

Formula make_var(int v);
Formula make_const(int b);
Formula make_not(Formula f);
Formula make_or(Formula a, Formula b);
Formula make_and(Formula a, Formula b); // sugar

bool equal(const Formula& a, const Formula& b);

// number of connectives
int formula_size(const Formula& f);
// maximum number of alternations of or and not on a root-to-leaf path,
// counting maximal blocks of one connective as one alternation
int formula_depth(const Formula& f);

// isomorphic: equal up to the order of binary or
bool isomorphic(const Formula& a, const Formula& b);

std::string formula_to_text(const Formula& f);
// grammar: '~' negation, '|' or, '&' and, parentheses, x<i>, 0, 1
Formula parse_formula(const std::string& text);

// evaluation under a total assignment keyed by variable index
bool eval_formula(const Formula& f, const std::vector<uint8_t>& assignment);

void collect_subformulas(const Formula& f, std::vector<Formula>& out);
void collect_variables(const Formula& f, std::vector<int>& out);

} // namespace gsw

#endif

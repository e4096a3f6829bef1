#include "gsw/frege.hpp"

#include <istream>
#include <ostream>
#include <sstream>

namespace gsw {

const char* rule_name(Rule r) {
    switch (r) {
    case Rule::ExcludedMiddle: return "excluded-middle";
    case Rule::Expansion: return "expansion";
    case Rule::Contraction: return "contraction";
    case Rule::Association: return "association";
    default: return "cut";
    }
}

std::optional<Rule> rule_from_name(const std::string& name) {
    for (Rule r : {Rule::ExcludedMiddle, Rule::Expansion, Rule::Contraction,
                   Rule::Association, Rule::Cut})
        if (name == rule_name(r))
            return r;
    return std::nullopt;
}

namespace {

// schema formulas use negative variable ids -1, -2, -3 for p, q, r
Formula schema_var(int i) { return make_var(-i); }

struct RuleSchema {
    std::vector<Formula> premises;
    Formula conclusion;
};

RuleSchema schema_of(Rule r) {
    Formula p = schema_var(1), q = schema_var(2), rr = schema_var(3);
    switch (r) {
    case Rule::ExcludedMiddle:
        return {{}, make_or(p, make_not(p))};
    case Rule::Expansion:
        return {{p}, make_or(q, p)};
    case Rule::Contraction:
        return {{make_or(p, p)}, p};
    case Rule::Association:
        return {{make_or(p, make_or(q, rr))}, make_or(make_or(p, q), rr)};
    default:
        return {{make_or(p, q), make_or(make_not(p), rr)},
                make_or(q, rr)};
    }
}

bool match(const Formula& schema, const Formula& actual,
           std::map<int, Formula>& binding) {
    if (schema->kind == FormulaNode::Var && schema->var < 0) {
        auto it = binding.find(schema->var);
        if (it != binding.end())
            return equal(it->second, actual);
        binding[schema->var] = actual;
        return true;
    }
    if (schema->kind != actual->kind)
        return false;
    switch (schema->kind) {
    case FormulaNode::Var: return schema->var == actual->var;
    case FormulaNode::Const: return schema->value == actual->value;
    case FormulaNode::Not: return match(schema->lhs, actual->lhs, binding);
    default:
        return match(schema->lhs, actual->lhs, binding) &&
               match(schema->rhs, actual->rhs, binding);
    }
}

} // namespace

std::optional<SubstitutionWitness> check_inference(
    Rule rule, const std::vector<Formula>& premises,
    const Formula& conclusion) {
    RuleSchema schema = schema_of(rule);
    if (premises.size() != schema.premises.size())
        return std::nullopt;
    std::map<int, Formula> binding;
    if (!match(schema.conclusion, conclusion, binding))
        return std::nullopt;
    for (size_t i = 0; i < premises.size(); ++i)
        if (!match(schema.premises[i], premises[i], binding))
            return std::nullopt;
    SubstitutionWitness w;
    const char* names[3] = {"p", "q", "r"};
    for (auto& [var, f] : binding)
        w.map[names[-var - 1]] = f;
    return w;
}

ProofCheck check_proof(const Proof& proof,
                       const std::vector<Formula>& axioms) {
    for (int i = 0; i < (int)proof.lines.size(); ++i) {
        const ProofLine& line = proof.lines[i];
        if (line.is_axiom) {
            bool found = false;
            for (const Formula& ax : axioms)
                if (equal(ax, line.formula)) {
                    found = true;
                    break;
                }
            if (!found)
                return {false, i, "line is not an axiom"};
            continue;
        }
        std::vector<Formula> premises;
        for (int pi : line.premises) {
            if (pi < 0 || pi >= i)
                return {false, i, "premise does not precede the line"};
            premises.push_back(proof.lines[pi].formula);
        }
        if (!check_inference(line.rule, premises, line.formula))
            return {false, i, std::string("no substitution witness for ") +
                                  rule_name(line.rule)};
    }
    return {true, -1, ""};
}

void write_proof(std::ostream& out, const Proof& proof) {
    for (int i = 0; i < (int)proof.lines.size(); ++i) {
        const ProofLine& line = proof.lines[i];
        out << i << ": " << formula_to_text(line.formula) << " ; ";
        if (line.is_axiom) {
            out << "axiom";
        } else {
            out << rule_name(line.rule);
            for (int p : line.premises)
                out << " " << p;
        }
        out << "\n";
    }
}

Proof read_proof(std::istream& in) {
    Proof proof;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        auto colon = line.find(':');
        auto semi = line.find(';');
        if (colon == std::string::npos || semi == std::string::npos)
            throw std::runtime_error("bad proof line: " + line);
        int id = std::stoi(line.substr(0, colon));
        if (id != (int)proof.lines.size())
            throw std::runtime_error("proof lines out of order");
        ProofLine pl;
        pl.formula =
            parse_formula(line.substr(colon + 1, semi - colon - 1));
        std::istringstream rest(line.substr(semi + 1));
        std::string rule;
        rest >> rule;
        if (rule == "axiom") {
            pl.is_axiom = true;
        } else {
            auto r = rule_from_name(rule);
            if (!r)
                throw std::runtime_error("unknown rule: " + rule);
            pl.rule = *r;
            int p;
            while (rest >> p)
                pl.premises.push_back(p);
        }
        proof.lines.push_back(std::move(pl));
    }
    return proof;
}

} // namespace gsw

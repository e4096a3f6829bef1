#include "gsw/formula.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace gsw {

Formula make_var(int v) {
    auto n = std::make_shared<FormulaNode>();
    n->kind = FormulaNode::Var;
    n->var = v;
    return n;
}

Formula make_const(int b) {
    auto n = std::make_shared<FormulaNode>();
    n->kind = FormulaNode::Const;
    n->value = b;
    return n;
}

Formula make_not(Formula f) {
    auto n = std::make_shared<FormulaNode>();
    n->kind = FormulaNode::Not;
    n->lhs = std::move(f);
    return n;
}

Formula make_or(Formula a, Formula b) {
    auto n = std::make_shared<FormulaNode>();
    n->kind = FormulaNode::Or;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}

Formula make_and(Formula a, Formula b) {
    return make_not(make_or(make_not(std::move(a)), make_not(std::move(b))));
}

bool equal(const Formula& a, const Formula& b) {
    if (a.get() == b.get())
        return true;
    if (a->kind != b->kind)
        return false;
    switch (a->kind) {
    case FormulaNode::Var: return a->var == b->var;
    case FormulaNode::Const: return a->value == b->value;
    case FormulaNode::Not: return equal(a->lhs, b->lhs);
    default: return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
    }
}

int formula_size(const Formula& f) {
    switch (f->kind) {
    case FormulaNode::Var:
    case FormulaNode::Const: return 0;
    case FormulaNode::Not: return 1 + formula_size(f->lhs);
    default: return 1 + formula_size(f->lhs) + formula_size(f->rhs);
    }
}

int formula_depth(const Formula& f) {
    // count maximal same-connective blocks along every root-to-leaf path
    struct Walker {
        static int walk(const Formula& g, int current_kind, int blocks) {
            switch (g->kind) {
            case FormulaNode::Var:
            case FormulaNode::Const:
                return blocks;
            case FormulaNode::Not: {
                int nb = blocks + (current_kind == 1 ? 0 : 1);
                return walk(g->lhs, 1, nb);
            }
            default: {
                int nb = blocks + (current_kind == 0 ? 0 : 1);
                return std::max(walk(g->lhs, 0, nb), walk(g->rhs, 0, nb));
            }
            }
        }
    };
    return Walker::walk(f, -1, 0);
}

bool isomorphic(const Formula& a, const Formula& b) {
    if (a->kind != b->kind)
        return false;
    switch (a->kind) {
    case FormulaNode::Var: return a->var == b->var;
    case FormulaNode::Const: return a->value == b->value;
    case FormulaNode::Not: return isomorphic(a->lhs, b->lhs);
    default: break;
    }
    // compare the or-spines as multisets, recursively
    auto spine = [](const Formula& f, auto&& self) -> std::vector<Formula> {
        if (f->kind != FormulaNode::Or)
            return {f};
        auto l = self(f->lhs, self);
        auto r = self(f->rhs, self);
        l.insert(l.end(), r.begin(), r.end());
        return l;
    };
    std::vector<Formula> sa = spine(a, spine), sb = spine(b, spine);
    if (sa.size() != sb.size())
        return false;
    std::vector<bool> used(sb.size(), false);
    for (const Formula& fa : sa) {
        bool found = false;
        for (size_t i = 0; i < sb.size(); ++i) {
            if (!used[i] && isomorphic(fa, sb[i])) {
                used[i] = true;
                found = true;
                break;
            }
        }
        if (!found)
            return false;
    }
    return true;
}

std::string formula_to_text(const Formula& f) {
    switch (f->kind) {
    case FormulaNode::Var: {
        std::ostringstream out;
        out << "x" << f->var;
        return out.str();
    }
    case FormulaNode::Const:
        return f->value ? "1" : "0";
    case FormulaNode::Not:
        return "~" + formula_to_text(f->lhs);
    default:
        return "(" + formula_to_text(f->lhs) + " | " +
               formula_to_text(f->rhs) + ")";
    }
}

namespace {

struct Parser {
    const std::string& s;
    size_t pos = 0;

    void skip() {
        while (pos < s.size() && isspace((unsigned char)s[pos]))
            ++pos;
    }
    bool eat(char c) {
        skip();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& what) {
        throw std::runtime_error("formula parse error at position " +
                                 std::to_string(pos) + ": " + what);
    }

    // or/and have equal precedence here; parenthesize mixtures
    Formula expr() {
        Formula lhs = unary();
        for (;;) {
            skip();
            if (eat('|'))
                lhs = make_or(lhs, unary());
            else if (eat('&'))
                lhs = make_and(lhs, unary());
            else
                return lhs;
        }
    }

    Formula unary() {
        skip();
        if (eat('~'))
            return make_not(unary());
        if (eat('(')) {
            Formula f = expr();
            if (!eat(')'))
                fail("expected ')'");
            return f;
        }
        if (pos < s.size() && (s[pos] == '0' || s[pos] == '1'))
            return make_const(s[pos++] - '0');
        if (pos < s.size() && s[pos] == 'x') {
            ++pos;
            size_t start = pos;
            while (pos < s.size() && isdigit((unsigned char)s[pos]))
                ++pos;
            if (start == pos)
                fail("expected variable index");
            return make_var(std::stoi(s.substr(start, pos - start)));
        }
        fail("expected formula");
    }
};

} // namespace

Formula parse_formula(const std::string& text) {
    Parser p{text};
    Formula f = p.expr();
    p.skip();
    if (p.pos != text.size())
        p.fail("trailing input");
    return f;
}

bool eval_formula(const Formula& f, const std::vector<uint8_t>& assignment) {
    switch (f->kind) {
    case FormulaNode::Var: return assignment[f->var];
    case FormulaNode::Const: return f->value;
    case FormulaNode::Not: return !eval_formula(f->lhs, assignment);
    default:
        return eval_formula(f->lhs, assignment) ||
               eval_formula(f->rhs, assignment);
    }
}

void collect_subformulas(const Formula& f, std::vector<Formula>& out) {
    for (const Formula& g : out)
        if (equal(g, f))
            return;
    if (f->kind == FormulaNode::Not) {
        collect_subformulas(f->lhs, out);
    } else if (f->kind == FormulaNode::Or) {
        collect_subformulas(f->lhs, out);
        collect_subformulas(f->rhs, out);
    }
    out.push_back(f);
}

void collect_variables(const Formula& f, std::vector<int>& out) {
    switch (f->kind) {
    case FormulaNode::Var:
        if (std::find(out.begin(), out.end(), f->var) == out.end())
            out.push_back(f->var);
        return;
    case FormulaNode::Const: return;
    case FormulaNode::Not: collect_variables(f->lhs, out); return;
    default:
        collect_variables(f->lhs, out);
        collect_variables(f->rhs, out);
    }
}

} // namespace gsw

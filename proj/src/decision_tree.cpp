#include "gsw/decision_tree.hpp"

#include <sstream>
#include <stdexcept>

namespace gsw {

DTree make_leaf(int label) {
    auto n = std::make_shared<DTreeNode>();
    n->var = -1;
    n->label = label;
    return n;
}

DTree make_node(int var, DTree c0, DTree c1) {
    auto n = std::make_shared<DTreeNode>();
    n->var = var;
    n->child0 = std::move(c0);
    n->child1 = std::move(c1);
    return n;
}

int depth(const DTree& t) {
    if (t->is_leaf())
        return 0;
    return 1 + std::max(depth(t->child0), depth(t->child1));
}

bool is_b_tree(const DTree& t, int b) {
    if (t->is_leaf())
        return t->label == b;
    return is_b_tree(t->child0, b) && is_b_tree(t->child1, b);
}

int evaluate(const DTree& t, const std::vector<uint8_t>& assignment) {
    const DTreeNode* n = t.get();
    while (!n->is_leaf()) {
        if (n->var >= (int)assignment.size())
            throw std::invalid_argument("evaluate: assignment misses variable");
        n = assignment[n->var] ? n->child1.get() : n->child0.get();
    }
    return n->label;
}

namespace {

void collect_branches(const DTree& t, PartialAssignment& acc,
                      std::vector<int>& order, std::vector<Branch>& out) {
    if (t->is_leaf()) {
        out.push_back({acc, order, t->label});
        return;
    }
    order.push_back(t->var);
    acc.set(t->var, 0);
    collect_branches(t->child0, acc, order, out);
    acc.set(t->var, 1);
    collect_branches(t->child1, acc, order, out);
    acc.unset(t->var);
    order.pop_back();
}

} // namespace

std::vector<Branch> branches(const DTree& t, int num_vars) {
    std::vector<Branch> out;
    PartialAssignment acc(num_vars);
    std::vector<int> order;
    collect_branches(t, acc, order, out);
    return out;
}

namespace {

bool validate_rec(const TorusGrid& grid, const TseitinInstance& inst,
                  const DTree& t, PartialAssignment& acc, LcMode mode) {
    if (t->is_leaf())
        return is_locally_consistent(grid, inst, acc, mode);
    if (acc.assigns(t->var))
        return false; // repeated query on a branch
    acc.set(t->var, 0);
    bool ok = validate_rec(grid, inst, t->child0, acc, mode);
    if (ok) {
        acc.set(t->var, 1);
        ok = validate_rec(grid, inst, t->child1, acc, mode);
    }
    acc.unset(t->var);
    return ok;
}

} // namespace

bool validate_tree(const TorusGrid& grid, const TseitinInstance& inst,
                   const DTree& t, LcMode mode) {
    if (mode == LcMode::Strict && 4 * depth(t) > grid.n())
        return false;
    PartialAssignment acc(inst.num_vars());
    return validate_rec(grid, inst, t, acc, mode);
}

namespace {

// beta accumulates alpha plus the answers fixed so far; returns null when
// no branch below survives
DTree restrict_rec(const TorusGrid& grid, const TseitinInstance& inst,
                   const DTree& t, PartialAssignment& beta, LcMode mode) {
    if (t->is_leaf())
        return t;
    int x = t->var;
    Implication iv = implied_value(grid, inst, beta, x, mode);
    if (iv == Implication::Dead)
        return nullptr;
    if (iv == Implication::Zero || iv == Implication::One) {
        int v = iv == Implication::One;
        bool had = beta.assigns(x);
        beta.set(x, v);
        DTree r = restrict_rec(grid, inst, v ? t->child1 : t->child0, beta,
                               mode);
        if (!had)
            beta.unset(x);
        return r;
    }
    beta.set(x, 0);
    DTree c0 = restrict_rec(grid, inst, t->child0, beta, mode);
    beta.set(x, 1);
    DTree c1 = restrict_rec(grid, inst, t->child1, beta, mode);
    beta.unset(x);
    if (c0 && c1)
        return make_node(x, std::move(c0), std::move(c1));
    return c0 ? c0 : c1;
}

} // namespace

DTree restrict_by_assignment(const TorusGrid& grid,
                             const TseitinInstance& inst, const DTree& t,
                             const PartialAssignment& alpha, LcMode mode) {
    PartialAssignment beta = alpha;
    DTree r = restrict_rec(grid, inst, t, beta, mode);
    if (!r)
        throw std::runtime_error(
            "restrict_by_assignment: no branch survives the restriction");
    return r;
}

namespace {

DTree restrict_full_rec(const TorusGrid& big_grid,
                        const TseitinInstance& big_inst, const DTree& t,
                        const AffineMap& sigma, const TorusGrid& small_grid,
                        const TseitinInstance& small_inst,
                        PartialAssignment& beta) {
    if (t->is_leaf())
        return t;
    const EdgeImage& img = sigma[t->var];
    if (img.is_const()) {
        return restrict_full_rec(big_grid, big_inst,
                                 img.const_value() ? t->child1 : t->child0,
                                 sigma, small_grid, small_inst, beta);
    }
    int y = img.var;
    bool neg = img.negated();
    if (beta.assigns(y)) {
        int xv = beta.value(y) ^ (neg ? 1 : 0);
        return restrict_full_rec(big_grid, big_inst,
                                 xv ? t->child1 : t->child0, sigma,
                                 small_grid, small_inst, beta);
    }
    Implication iv =
        implied_value(small_grid, small_inst, beta, y, LcMode::Relaxed);
    if (iv == Implication::Dead)
        return nullptr;
    if (iv == Implication::Zero || iv == Implication::One) {
        int yv = iv == Implication::One;
        beta.set(y, yv);
        int xv = yv ^ (neg ? 1 : 0);
        DTree r = restrict_full_rec(big_grid, big_inst,
                                    xv ? t->child1 : t->child0, sigma,
                                    small_grid, small_inst, beta);
        beta.unset(y);
        return r;
    }
    beta.set(y, 0);
    DTree c0 = restrict_full_rec(big_grid, big_inst,
                                 neg ? t->child1 : t->child0, sigma,
                                 small_grid, small_inst, beta);
    beta.set(y, 1);
    DTree c1 = restrict_full_rec(big_grid, big_inst,
                                 neg ? t->child0 : t->child1, sigma,
                                 small_grid, small_inst, beta);
    beta.unset(y);
    if (c0 && c1)
        return make_node(y, std::move(c0), std::move(c1));
    return c0 ? c0 : c1;
}

} // namespace

DTree restrict_by_full(const TorusGrid& big_grid,
                       const TseitinInstance& big_inst, const DTree& t,
                       const AffineMap& sigma, const TorusGrid& small_grid,
                       const TseitinInstance& small_inst) {
    PartialAssignment beta(small_inst.num_vars());
    DTree r = restrict_full_rec(big_grid, big_inst, t, sigma, small_grid,
                                small_inst, beta);
    if (!r)
        throw std::runtime_error(
            "restrict_by_full: no branch survives the restriction");
    return r;
}

bool functionally_equivalent(const TorusGrid& grid,
                             const TseitinInstance& inst, const DTree& t1,
                             const DTree& t2, LcMode mode) {
    if (mode == LcMode::Strict &&
        (8 * depth(t1) > grid.n() || 8 * depth(t2) > grid.n()))
        throw std::invalid_argument("functionally_equivalent: depth over n/8");
    for (const Branch& br : branches(t1, inst.num_vars())) {
        if (!is_b_tree(restrict_by_assignment(grid, inst, t2, br.assignment,
                                              mode),
                       br.label))
            return false;
    }
    for (const Branch& br : branches(t2, inst.num_vars())) {
        if (!is_b_tree(restrict_by_assignment(grid, inst, t1, br.assignment,
                                              mode),
                       br.label))
            return false;
    }
    return true;
}

bool represents(const TorusGrid& grid, const TseitinInstance& inst,
                const DTree& t, const std::vector<DTree>& ors, LcMode mode) {
    for (const Branch& br : branches(t, inst.num_vars())) {
        if (br.label == 1) {
            bool witness = false;
            for (const DTree& ti : ors) {
                if (is_b_tree(restrict_by_assignment(grid, inst, ti,
                                                     br.assignment, mode),
                              1)) {
                    witness = true;
                    break;
                }
            }
            if (!witness)
                return false;
        } else {
            for (const DTree& ti : ors) {
                if (!is_b_tree(restrict_by_assignment(grid, inst, ti,
                                                      br.assignment, mode),
                               0))
                    return false;
            }
        }
    }
    return true;
}

DTree negate_leaves(const DTree& t) {
    if (t->is_leaf())
        return make_leaf(1 - t->label);
    return make_node(t->var, negate_leaves(t->child0),
                     negate_leaves(t->child1));
}

namespace {

void tree_text_rec(const DTree& t, std::ostringstream& out) {
    if (t->is_leaf()) {
        out << "#" << t->label;
        return;
    }
    out << "(x" << t->var << " (0 ";
    tree_text_rec(t->child0, out);
    out << ") (1 ";
    tree_text_rec(t->child1, out);
    out << "))";
}

struct TreeParser {
    const std::string& s;
    size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && isspace((unsigned char)s[pos]))
            ++pos;
    }
    void expect(char c) {
        skip_ws();
        if (pos >= s.size() || s[pos] != c)
            throw std::runtime_error("tree parse error: expected '" +
                                     std::string(1, c) + "'");
        ++pos;
    }
    int number() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && isdigit((unsigned char)s[pos]))
            ++pos;
        if (start == pos)
            throw std::runtime_error("tree parse error: expected number");
        return std::stoi(s.substr(start, pos - start));
    }
    DTree parse() {
        skip_ws();
        if (pos < s.size() && s[pos] == '#') {
            ++pos;
            return make_leaf(number());
        }
        expect('(');
        expect('x');
        int var = number();
        expect('(');
        if (number() != 0)
            throw std::runtime_error("tree parse error: expected 0-child");
        DTree c0 = parse();
        expect(')');
        expect('(');
        if (number() != 1)
            throw std::runtime_error("tree parse error: expected 1-child");
        DTree c1 = parse();
        expect(')');
        expect(')');
        return make_node(var, std::move(c0), std::move(c1));
    }
};

} // namespace

std::string tree_to_text(const DTree& t) {
    std::ostringstream out;
    tree_text_rec(t, out);
    return out.str();
}

DTree tree_from_text(const std::string& text) {
    TreeParser p{text};
    return p.parse();
}

} // namespace gsw

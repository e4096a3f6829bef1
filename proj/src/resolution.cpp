#include "gsw/resolution.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>

namespace gsw {

std::vector<Clause> parity_clauses(const std::vector<int>& vars, int parity) {
    int m = (int)vars.size();
    if (m > 20)
        throw std::invalid_argument("parity_clauses: too many variables");
    std::vector<Clause> out;
    for (uint32_t pattern = 0; pattern < (1u << m); ++pattern) {
        int weight = 0;
        for (int i = 0; i < m; ++i)
            weight ^= (pattern >> i) & 1;
        if (weight == parity)
            continue; // satisfying assignment, nothing to forbid
        Clause c;
        for (int i = 0; i < m; ++i) {
            int var = vars[i] + 1;
            c.lits.push_back((pattern >> i) & 1 ? -var : var);
        }
        out.push_back(std::move(c));
    }
    return out;
}

int ResolutionProof::add_input(Clause c) {
    max_width = std::max(max_width, (int)c.lits.size());
    steps.push_back({std::move(c), true, -1, -1, 0});
    return (int)steps.size() - 1;
}

int ResolutionProof::add_resolvent(Clause c, int p1, int p2, int pivot) {
    max_width = std::max(max_width, (int)c.lits.size());
    steps.push_back({std::move(c), false, p1, p2, pivot});
    return (int)steps.size() - 1;
}

namespace {

// literals sorted by variable; resolvable iff exactly the pivot clashes
std::optional<Clause> resolve(const Clause& a, const Clause& b, int pivot) {
    Clause out;
    std::map<int, int> sign; // var -> lit
    bool pivot_pos = false, pivot_neg = false;
    for (int lit : a.lits) {
        if (lit == pivot)
            pivot_pos = true;
        else if (lit == -pivot)
            pivot_neg = true;
        else
            sign[std::abs(lit)] = lit;
    }
    for (int lit : b.lits) {
        if (lit == pivot) {
            pivot_pos = true;
            continue;
        }
        if (lit == -pivot) {
            pivot_neg = true;
            continue;
        }
        auto it = sign.find(std::abs(lit));
        if (it != sign.end()) {
            if (it->second != lit)
                return std::nullopt; // tautological resolvent
        } else {
            sign[std::abs(lit)] = lit;
        }
    }
    if (!pivot_pos || !pivot_neg)
        return std::nullopt;
    for (auto& [v, lit] : sign)
        out.lits.push_back(lit);
    return out;
}

struct PoolClause {
    Clause clause;
    int step = -1;
};

std::vector<int> sorted_lits(const Clause& c) {
    std::vector<int> l = c.lits;
    std::sort(l.begin(), l.end(),
              [](int a, int b) { return std::abs(a) < std::abs(b); });
    return l;
}

// signs of the given variables inside a clause, as a bit pattern
uint64_t sign_key(const Clause& c, const std::vector<int>& vars) {
    uint64_t key = 0;
    for (size_t i = 0; i < vars.size(); ++i)
        for (int lit : c.lits)
            if (std::abs(lit) == vars[i] + 1) {
                key |= (uint64_t)(lit < 0) << i;
                break;
            }
    return key;
}

} // namespace

ParityClauseSet resolve_parities(ResolutionProof& proof,
                                 const ParityClauseSet& l1,
                                 const ParityClauseSet& l2, int pivot_var) {
    std::vector<int> shared;
    std::set_intersection(l1.vars.begin(), l1.vars.end(), l2.vars.begin(),
                          l2.vars.end(), std::back_inserter(shared));
    if (std::find(shared.begin(), shared.end(), pivot_var) == shared.end())
        throw std::invalid_argument(
            "resolve_parities: pivot not shared by both equations");
    // pivot first, then the rest in ascending order
    shared.erase(std::remove(shared.begin(), shared.end(), pivot_var),
                 shared.end());
    shared.insert(shared.begin(), pivot_var);

    std::vector<int> target_vars;
    std::set_symmetric_difference(l1.vars.begin(), l1.vars.end(),
                                  l2.vars.begin(), l2.vars.end(),
                                  std::back_inserter(target_vars));
    int target_parity = l1.parity ^ l2.parity;

    // phase over the pivot: pairs of the two input sets
    std::vector<PoolClause> pool;
    {
        std::vector<int> rest(shared.begin() + 1, shared.end());
        std::map<std::pair<uint64_t, int>, std::vector<int>> buckets;
        auto side = [&](const ParityClauseSet& l, int tag) {
            for (int step : l.clause_steps) {
                const Clause& c = proof.steps[step].clause;
                int piv_sign = 0;
                for (int lit : c.lits) {
                    if (lit == pivot_var + 1)
                        piv_sign = 1;
                    else if (lit == -(pivot_var + 1))
                        piv_sign = -1;
                }
                buckets[{sign_key(c, rest), tag * piv_sign}].push_back(step);
            }
        };
        side(l1, 1);
        side(l2, 2);
        std::set<std::vector<int>> seen;
        for (auto& [key, steps1] : buckets) {
            auto [signs, tagged] = key;
            if (std::abs(tagged) != 1)
                continue; // iterate from l1's entries only
            int want = tagged > 0 ? -2 : 2;
            auto it = buckets.find({signs, want});
            if (it == buckets.end())
                continue;
            for (int s1 : steps1) {
                for (int s2 : it->second) {
                    auto r = resolve(proof.steps[s1].clause,
                                     proof.steps[s2].clause, pivot_var + 1);
                    if (!r)
                        continue;
                    auto canon = sorted_lits(*r);
                    if (!seen.insert(canon).second)
                        continue;
                    int idx =
                        proof.add_resolvent(std::move(*r), s1, s2,
                                            pivot_var + 1);
                    pool.push_back({proof.steps[idx].clause, idx});
                }
            }
        }
    }

    // eliminate the remaining shared variables one at a time
    for (size_t si = 1; si < shared.size(); ++si) {
        int y = shared[si];
        std::vector<int> rest(shared.begin() + si + 1, shared.end());
        std::map<uint64_t, std::pair<std::vector<int>, std::vector<int>>>
            buckets; // key -> (+y steps, -y steps)
        for (const PoolClause& pc : pool) {
            int ys = 0;
            for (int lit : pc.clause.lits)
                if (std::abs(lit) == y + 1)
                    ys = lit > 0 ? 1 : -1;
            if (ys == 0)
                throw std::logic_error(
                    "resolve_parities: clause lost a shared variable");
            auto& entry = buckets[sign_key(pc.clause, rest)];
            (ys > 0 ? entry.first : entry.second).push_back(pc.step);
        }
        std::vector<PoolClause> next;
        std::set<std::vector<int>> seen;
        for (auto& [key, sides] : buckets) {
            for (int s1 : sides.first) {
                for (int s2 : sides.second) {
                    auto r = resolve(proof.steps[s1].clause,
                                     proof.steps[s2].clause, y + 1);
                    if (!r)
                        continue;
                    auto canon = sorted_lits(*r);
                    if (!seen.insert(canon).second)
                        continue;
                    int idx = proof.add_resolvent(std::move(*r), s1, s2,
                                                  y + 1);
                    next.push_back({proof.steps[idx].clause, idx});
                }
            }
        }
        pool = std::move(next);
    }

    // the surviving clauses must be exactly the clause set of the target
    // parity equation
    ParityClauseSet out;
    out.vars = target_vars;
    out.parity = target_parity;
    std::map<std::vector<int>, int> derived;
    for (const PoolClause& pc : pool)
        derived[sorted_lits(pc.clause)] = pc.step;
    std::vector<Clause> expect = parity_clauses(target_vars, target_parity);
    for (const Clause& c : expect) {
        auto it = derived.find(sorted_lits(c));
        if (it == derived.end())
            throw std::logic_error(
                "resolve_parities: a target clause was not derived");
        out.clause_steps.push_back(it->second);
    }
    if (derived.size() != expect.size())
        throw std::logic_error(
            "resolve_parities: extra clauses beyond the target equation");
    return out;
}

ResolutionProof build_grid_refutation(int n) {
    if (n < 3 || n > 9 || n % 2 == 0)
        throw std::invalid_argument(
            "grid refutation: n must be odd, between 3 and 9");
    TorusGrid grid(n);
    TseitinInstance inst = all_ones_instance(grid);
    CnfFormula cnf = to_cnf(inst);

    ResolutionProof proof;
    // node equations straight from the axioms; to_cnf is node-major with
    // the same pattern order as parity_clauses
    std::vector<ParityClauseSet> node_eq(grid.num_nodes());
    {
        size_t at = 0;
        for (int v = 0; v < grid.num_nodes(); ++v) {
            ParityClauseSet& eq = node_eq[v];
            for (int e : inst.graph.incident[v])
                eq.vars.push_back(e);
            std::sort(eq.vars.begin(), eq.vars.end());
            eq.parity = 1;
            std::vector<Clause> expect = parity_clauses(eq.vars, 1);
            std::map<std::vector<int>, int> canon;
            for (int ci = 0; ci < 8; ++ci, ++at) {
                int idx = proof.add_input(cnf.clauses[at]);
                canon[sorted_lits(cnf.clauses[at])] = idx;
            }
            for (const Clause& c : expect)
                eq.clause_steps.push_back(canon.at(sorted_lits(c)));
        }
    }

    // sum each column; consecutive nodes share their vertical edge
    std::vector<ParityClauseSet> col_eq;
    for (int j = 0; j < n; ++j) {
        ParityClauseSet acc = node_eq[grid.node(0, j)];
        for (int i = 1; i < n; ++i) {
            const ParityClauseSet& next = node_eq[grid.node(i, j)];
            int pivot = grid.down_edge(grid.node(i - 1, j));
            acc = resolve_parities(proof, acc, next, pivot);
        }
        col_eq.push_back(std::move(acc));
    }

    // fold the columns left to right; the final fold leaves the empty clause
    ParityClauseSet acc = col_eq[0];
    for (int j = 1; j < n; ++j) {
        int pivot = grid.right_edge(grid.node(0, j - 1));
        acc = resolve_parities(proof, acc, col_eq[j], pivot);
    }
    if (acc.vars.size() != 0 || acc.parity != 1 ||
        acc.clause_steps.size() != 1 ||
        !proof.steps[acc.clause_steps[0]].clause.lits.empty())
        throw std::logic_error("grid refutation: no empty clause derived");
    return proof;
}

ResolutionCheck check_resolution(const ResolutionProof& proof,
                                 const CnfFormula& cnf) {
    std::set<std::vector<int>> inputs;
    for (const Clause& c : cnf.clauses)
        inputs.insert(sorted_lits(c));
    bool empty_seen = false;
    for (int i = 0; i < (int)proof.steps.size(); ++i) {
        const ResStep& st = proof.steps[i];
        if (st.input) {
            if (!inputs.count(sorted_lits(st.clause)))
                return {false, i, "input clause not in the formula", false};
            continue;
        }
        if (st.parent1 < 0 || st.parent1 >= i || st.parent2 < 0 ||
            st.parent2 >= i)
            return {false, i, "parent does not precede the step", false};
        auto r = resolve(proof.steps[st.parent1].clause,
                         proof.steps[st.parent2].clause, st.pivot);
        if (!r)
            return {false, i, "parents do not resolve on the pivot", false};
        if (sorted_lits(*r) != sorted_lits(st.clause))
            return {false, i, "resolvent differs from the recorded clause",
                    false};
        if (st.clause.lits.empty())
            empty_seen = true;
    }
    return {true, -1, "", empty_seen};
}

void write_resolution(std::ostream& out, const ResolutionProof& proof) {
    for (int i = 0; i < (int)proof.steps.size(); ++i) {
        const ResStep& st = proof.steps[i];
        out << i << ":";
        if (st.input)
            out << " input";
        else
            out << " resolve " << st.parent1 << " " << st.parent2 << " on "
                << st.pivot;
        out << " :";
        for (int lit : st.clause.lits)
            out << " " << lit;
        out << "\n";
    }
}

} // namespace gsw

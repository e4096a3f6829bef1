#include "doctest.h"

#include <cmath>
#include <set>
#include <sstream>

#include "gsw/resolution.hpp"

using namespace gsw;

namespace {

std::set<std::set<int>> clause_set(const std::vector<Clause>& cs) {
    std::set<std::set<int>> out;
    for (const Clause& c : cs)
        out.insert(std::set<int>(c.lits.begin(), c.lits.end()));
    return out;
}

} // namespace

TEST_CASE("parity clause sets") {
    auto two = parity_clauses({0, 1}, 0);
    CHECK(clause_set(two) ==
          clause_set({Clause{{-1, 2}}, Clause{{1, -2}}}));
    auto one = parity_clauses({0}, 1);
    REQUIRE(one.size() == 1);
    CHECK(one[0].lits == std::vector<int>{1});
    auto four = parity_clauses({0, 1, 2, 3}, 1);
    CHECK(four.size() == 8);
    // satisfying assignments are the odd-weight vectors
    for (uint32_t a = 0; a < 16; ++a) {
        bool sat = true;
        for (const Clause& c : four) {
            bool csat = false;
            for (int lit : c.lits)
                if (((a >> (std::abs(lit) - 1)) & 1) == (lit > 0)) {
                    csat = true;
                    break;
                }
            sat = sat && csat;
        }
        CHECK(sat == (__builtin_popcount(a) % 2 == 1));
    }
    CHECK_THROWS(parity_clauses(std::vector<int>(21, 0), 0));
}

TEST_CASE("resolving two equations over one shared variable") {
    // x+y=1 and x+z=1 give y+z=0
    ResolutionProof proof;
    ParityClauseSet l1{{0, 1}, 1, {}}, l2{{0, 2}, 1, {}};
    for (const Clause& c : parity_clauses(l1.vars, 1))
        l1.clause_steps.push_back(proof.add_input(c));
    for (const Clause& c : parity_clauses(l2.vars, 1))
        l2.clause_steps.push_back(proof.add_input(c));
    ParityClauseSet sum = resolve_parities(proof, l1, l2, 0);
    CHECK(sum.vars == std::vector<int>{1, 2});
    CHECK(sum.parity == 0);
    CHECK(sum.clause_steps.size() == 2);

    CnfFormula cnf;
    cnf.num_vars = 3;
    for (const Clause& c : parity_clauses(l1.vars, 1))
        cnf.clauses.push_back(c);
    for (const Clause& c : parity_clauses(l2.vars, 1))
        cnf.clauses.push_back(c);
    ResolutionCheck chk = check_resolution(proof, cnf);
    CHECK(chk.ok);
    // semantic check: derived clauses are exactly the y+z=0 set
    std::vector<Clause> derived;
    for (int s : sum.clause_steps)
        derived.push_back(proof.steps[s].clause);
    CHECK(clause_set(derived) == clause_set(parity_clauses({1, 2}, 0)));
}

TEST_CASE("pairwise resolvent counts on disjoint-besides-pivot equations") {
    ResolutionProof proof;
    ParityClauseSet l1{{0, 1}, 0, {}}, l2{{0, 2}, 0, {}};
    for (const Clause& c : parity_clauses(l1.vars, 0))
        l1.clause_steps.push_back(proof.add_input(c));
    for (const Clause& c : parity_clauses(l2.vars, 0))
        l2.clause_steps.push_back(proof.add_input(c));
    size_t inputs = proof.steps.size();
    ParityClauseSet sum = resolve_parities(proof, l1, l2, 0);
    // 2^(m1-1) * 2^(m2-1) pairs collapse to the 2^(m1+m2-3) target clauses
    CHECK(proof.steps.size() - inputs == 2);
    CHECK(sum.clause_steps.size() == 2);
}

TEST_CASE("an equation against itself cancels completely") {
    ResolutionProof proof;
    ParityClauseSet l{{0, 1}, 1, {}};
    for (const Clause& c : parity_clauses(l.vars, 1))
        l.clause_steps.push_back(proof.add_input(c));
    ParityClauseSet sum = resolve_parities(proof, l, l, 0);
    CHECK(sum.vars.empty());
    CHECK(sum.parity == 0);
    CHECK(sum.clause_steps.empty());
}

TEST_CASE("trivial refutation of x and not-x") {
    ResolutionProof proof;
    ParityClauseSet l1{{0}, 1, {}}, l2{{0}, 0, {}};
    l1.clause_steps.push_back(proof.add_input(Clause{{1}}));
    l2.clause_steps.push_back(proof.add_input(Clause{{-1}}));
    ParityClauseSet sum = resolve_parities(proof, l1, l2, 0);
    REQUIRE(sum.clause_steps.size() == 1);
    CHECK(proof.steps[sum.clause_steps[0]].clause.lits.empty());
}

TEST_CASE("grid refutations check out for n = 3 and 5") {
    std::vector<double> log_sizes;
    for (int n : {3, 5}) {
        ResolutionProof proof = build_grid_refutation(n);
        CnfFormula cnf = to_cnf(all_ones_instance(TorusGrid(n)));
        ResolutionCheck chk = check_resolution(proof, cnf);
        CHECK(chk.ok);
        CHECK(chk.refutation);
        CHECK(proof.max_width <= 4 * n);
        log_sizes.push_back(std::log2((double)proof.steps.size()));
    }
    CHECK(log_sizes[1] > log_sizes[0]);
}

TEST_CASE("even n is rejected") {
    CHECK_THROWS(build_grid_refutation(4));
}

TEST_CASE("checker rejects corrupted steps") {
    ResolutionProof proof;
    int a = proof.add_input(Clause{{1}});
    int b = proof.add_input(Clause{{-1, 2}});
    proof.add_resolvent(Clause{{2}}, a, b, 1);
    CnfFormula cnf;
    cnf.num_vars = 2;
    cnf.clauses = {Clause{{1}}, Clause{{-1, 2}}};
    CHECK(check_resolution(proof, cnf).ok);

    SUBCASE("wrong resolvent") {
        proof.steps[2].clause.lits = {-2};
        CHECK_FALSE(check_resolution(proof, cnf).ok);
    }
    SUBCASE("two complementary pairs") {
        ResolutionProof p2;
        int c = p2.add_input(Clause{{1, 2}});
        int d = p2.add_input(Clause{{-1, -2}});
        p2.add_resolvent(Clause{{2, -2}}, c, d, 1);
        CnfFormula cnf2;
        cnf2.num_vars = 2;
        cnf2.clauses = {Clause{{1, 2}}, Clause{{-1, -2}}};
        CHECK_FALSE(check_resolution(p2, cnf2).ok);
    }
    SUBCASE("foreign input clause") {
        proof.steps[0].clause.lits = {2};
        CHECK_FALSE(check_resolution(proof, cnf).ok);
    }
}

TEST_CASE("resolution text output") {
    ResolutionProof proof;
    int a = proof.add_input(Clause{{1}});
    int b = proof.add_input(Clause{{-1}});
    proof.add_resolvent(Clause{}, a, b, 1);
    std::stringstream ss;
    write_resolution(ss, proof);
    CHECK(ss.str().find("resolve 0 1 on 1") != std::string::npos);
}

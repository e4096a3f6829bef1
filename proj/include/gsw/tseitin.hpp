#ifndef GSW_TSEITIN_HPP
#define GSW_TSEITIN_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "gsw/grid.hpp"
#include "gsw/rng.hpp"

namespace gsw {

using BigInt = boost::multiprecision::cpp_int;

// charge alpha_v per node, the right-hand side of the parity constraints
using ChargeVector = std::vector<uint8_t>;

// One variable x_e per edge; constraint per node v: sum of incident edge
// variables = alpha_v (mod 2).
struct TseitinInstance {
    Graph graph;
    ChargeVector charges;

    TseitinInstance(Graph g, ChargeVector a);

    bool charge_sum_odd() const;
    int num_vars() const { return (int)graph.edges.size(); }

    bool satisfies(const std::vector<uint8_t>& assignment) const;
};

TseitinInstance all_ones_instance(const TorusGrid& grid);

struct Clause {
    std::vector<int> lits; // DIMACS style: +v / -v, 1-based
};

struct CnfFormula {
    int num_vars = 0;
    std::vector<Clause> clauses;
};

// 2^(d-1) clauses of width d per node of degree d, each forbidding one
// wrong-parity local assignment; node-major, forbidden patterns in
// lexicographic order.
CnfFormula to_cnf(const TseitinInstance& inst);

bool is_contradiction(const TseitinInstance& inst);

// 2^(|E|-|V|+1) when the charge sum is even, else 0
BigInt solution_count(const TseitinInstance& inst);
int cycle_space_dim(const TseitinInstance& inst);

// Uniform over all solutions: non-tree edges drawn at random, tree edges
// determined by peeling leaves of a BFS spanning tree.
std::vector<uint8_t> sample_solution(const TseitinInstance& inst, Rng& rng);

// exhaustive oracle, guarded to |E| <= 24
std::vector<std::vector<uint8_t>> brute_force_solutions(
    const TseitinInstance& inst);

void write_dimacs(std::ostream& out, const CnfFormula& cnf,
                  const std::string& comment_header);
CnfFormula read_dimacs(std::istream& in);

} // namespace gsw

#endif

#include "gsw/tseitin.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace gsw {

TseitinInstance::TseitinInstance(Graph g, ChargeVector a)
    : graph(std::move(g)), charges(std::move(a)) {
    if ((int)charges.size() != graph.num_nodes)
        throw std::invalid_argument("charge vector size mismatch");
}

bool TseitinInstance::charge_sum_odd() const {
    int s = 0;
    for (uint8_t c : charges)
        s ^= c;
    return s;
}

bool TseitinInstance::satisfies(const std::vector<uint8_t>& assignment) const {
    for (int v = 0; v < graph.num_nodes; ++v) {
        int parity = 0;
        for (int e : graph.incident[v])
            parity ^= assignment[e];
        if (parity != charges[v])
            return false;
    }
    return true;
}

TseitinInstance all_ones_instance(const TorusGrid& grid) {
    return TseitinInstance(grid.as_graph(),
                           ChargeVector(grid.num_nodes(), 1));
}

CnfFormula to_cnf(const TseitinInstance& inst) {
    CnfFormula cnf;
    cnf.num_vars = inst.num_vars();
    for (int v = 0; v < inst.graph.num_nodes; ++v) {
        const auto& inc = inst.graph.incident[v];
        int d = (int)inc.size();
        for (uint32_t pattern = 0; pattern < (1u << d); ++pattern) {
            int parity = 0;
            for (int i = 0; i < d; ++i)
                parity ^= (pattern >> i) & 1;
            if (parity == inst.charges[v])
                continue; // satisfying local pattern, nothing to forbid
            Clause c;
            for (int i = 0; i < d; ++i) {
                int var = inc[i] + 1;
                c.lits.push_back((pattern >> i) & 1 ? -var : var);
            }
            cnf.clauses.push_back(std::move(c));
        }
    }
    return cnf;
}

bool is_contradiction(const TseitinInstance& inst) {
    if (!inst.graph.connected())
        throw std::invalid_argument("instance graph must be connected");
    return inst.charge_sum_odd();
}

int cycle_space_dim(const TseitinInstance& inst) {
    return (int)inst.graph.edges.size() - inst.graph.num_nodes + 1;
}

BigInt solution_count(const TseitinInstance& inst) {
    if (!inst.graph.connected())
        throw std::invalid_argument("instance graph must be connected");
    if (inst.charge_sum_odd())
        return 0;
    return BigInt(1) << cycle_space_dim(inst);
}

std::vector<uint8_t> sample_solution(const TseitinInstance& inst, Rng& rng) {
    if (inst.charge_sum_odd())
        throw std::invalid_argument("odd total charge: no solutions");
    const Graph& g = inst.graph;
    int n = g.num_nodes;

    // BFS spanning tree from node 0
    std::vector<int> tree_edge(n, -1), parent(n, -1), order;
    std::vector<uint8_t> in_tree(g.edges.size(), 0), seen(n, 0);
    order.reserve(n);
    std::vector<int> queue = {0};
    seen[0] = 1;
    for (size_t head = 0; head < queue.size(); ++head) {
        int v = queue[head];
        order.push_back(v);
        for (int e : g.incident[v]) {
            int w = g.other_end(e, v);
            if (!seen[w]) {
                seen[w] = 1;
                parent[w] = v;
                tree_edge[w] = e;
                in_tree[e] = 1;
                queue.push_back(w);
            }
        }
    }
    if ((int)order.size() != n)
        throw std::invalid_argument("instance graph must be connected");

    std::vector<uint8_t> x(g.edges.size(), 0);
    for (size_t e = 0; e < g.edges.size(); ++e)
        if (!in_tree[e])
            x[e] = (uint8_t)rng.bit();

    // peel from the leaves: in reverse BFS order each node fixes the edge
    // to its parent
    std::vector<uint8_t> need(n);
    for (int v = 0; v < n; ++v)
        need[v] = inst.charges[v];
    for (int i = n - 1; i >= 1; --i) {
        int v = order[i];
        int parity = 0;
        for (int e : g.incident[v])
            if (e != tree_edge[v])
                parity ^= x[e];
        x[tree_edge[v]] = (uint8_t)(parity ^ need[v]);
    }
    return x;
}

std::vector<std::vector<uint8_t>> brute_force_solutions(
    const TseitinInstance& inst) {
    int m = inst.num_vars();
    if (m > 24)
        throw std::invalid_argument("brute force limited to 24 variables");
    std::vector<std::vector<uint8_t>> out;
    for (uint32_t a = 0; a < (1u << m); ++a) {
        std::vector<uint8_t> x(m);
        for (int e = 0; e < m; ++e)
            x[e] = (a >> e) & 1;
        if (inst.satisfies(x))
            out.push_back(std::move(x));
    }
    return out;
}

void write_dimacs(std::ostream& out, const CnfFormula& cnf,
                  const std::string& comment_header) {
    if (!comment_header.empty()) {
        std::istringstream lines(comment_header);
        std::string line;
        while (std::getline(lines, line))
            out << "c " << line << "\n";
    }
    out << "p cnf " << cnf.num_vars << " " << cnf.clauses.size() << "\n";
    for (const Clause& c : cnf.clauses) {
        for (int lit : c.lits)
            out << lit << " ";
        out << "0\n";
    }
}

CnfFormula read_dimacs(std::istream& in) {
    CnfFormula cnf;
    std::string tok;
    int expected_clauses = -1;
    while (in >> tok) {
        if (tok == "c") {
            std::string rest;
            std::getline(in, rest);
        } else if (tok == "p") {
            std::string fmt;
            in >> fmt >> cnf.num_vars >> expected_clauses;
            if (fmt != "cnf")
                throw std::runtime_error("unsupported DIMACS format " + fmt);
        } else {
            Clause c;
            int lit = std::stoi(tok);
            while (lit != 0) {
                c.lits.push_back(lit);
                if (!(in >> lit))
                    throw std::runtime_error("unterminated clause");
            }
            cnf.clauses.push_back(std::move(c));
        }
    }
    if (expected_clauses >= 0 && (int)cnf.clauses.size() != expected_clauses)
        throw std::runtime_error("clause count mismatch in DIMACS input");
    return cnf;
}

} // namespace gsw

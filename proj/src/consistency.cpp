#include "gsw/consistency.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "gsw/gf2.hpp"

namespace gsw {

std::vector<int> PartialAssignment::support(const Graph& g) const {
    std::vector<uint8_t> mark(g.num_nodes, 0);
    for (int e = 0; e < (int)values_.size(); ++e) {
        if (values_[e] >= 0) {
            mark[g.edges[e].first] = 1;
            mark[g.edges[e].second] = 1;
        }
    }
    std::vector<int> out;
    for (int v = 0; v < g.num_nodes; ++v)
        if (mark[v])
            out.push_back(v);
    return out;
}

std::optional<PartialAssignment> PartialAssignment::merged_with(
    const PartialAssignment& other) const {
    PartialAssignment m = *this;
    for (int e = 0; e < (int)values_.size(); ++e) {
        if (other.values_[e] >= 0) {
            if (m.values_[e] >= 0 && m.values_[e] != other.values_[e])
                return std::nullopt;
            m.values_[e] = other.values_[e];
        }
    }
    return m;
}

std::string PartialAssignment::to_text() const {
    std::ostringstream out;
    for (int e = 0; e < (int)values_.size(); ++e)
        if (values_[e] >= 0)
            out << e << "=" << (int)values_[e] << "\n";
    return out.str();
}

PartialAssignment PartialAssignment::from_text(const std::string& text,
                                               int num_edges) {
    PartialAssignment a(num_edges);
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("bad assignment line: " + line);
        a.set(std::stoi(line.substr(0, eq)), std::stoi(line.substr(eq + 1)));
    }
    return a;
}

ClosureResult closure(const TorusGrid& grid, const std::vector<int>& nodes,
                      LcMode mode) {
    int n = grid.n();
    if (mode == LcMode::Strict && 3 * (int)nodes.size() > 2 * n)
        throw std::invalid_argument("closure: node set larger than 2n/3");

    std::vector<uint8_t> in_u(grid.num_nodes(), 0);
    for (int v : nodes)
        in_u[v] = 1;

    // connected components of the complement
    std::vector<int> comp(grid.num_nodes(), -1);
    std::vector<std::vector<int>> comps;
    for (int v = 0; v < grid.num_nodes(); ++v) {
        if (in_u[v] || comp[v] >= 0)
            continue;
        int id = (int)comps.size();
        comps.push_back({});
        std::vector<int> stack = {v};
        comp[v] = id;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            comps[id].push_back(u);
            for (Dir d : kAllDirs) {
                int w = grid.neighbor(u, d);
                if (!in_u[w] && comp[w] < 0) {
                    comp[w] = id;
                    stack.push_back(w);
                }
            }
        }
    }

    // the giant component is the one containing a full untouched row
    int giant = -1;
    for (int r = 0; r < n && giant < 0; ++r) {
        bool full = true;
        for (int c = 0; c < n; ++c)
            if (in_u[grid.node(r, c)]) {
                full = false;
                break;
            }
        if (full)
            giant = comp[grid.node(r, 0)];
    }
    if (giant < 0) {
        if (mode == LcMode::Strict)
            throw std::runtime_error(
                "closure: no full untouched row; giant component undefined");
        size_t best = 0;
        for (size_t i = 1; i < comps.size(); ++i)
            if (comps[i].size() > comps[best].size())
                best = i;
        if (!comps.empty())
            giant = (int)best;
    }

    ClosureResult res;
    res.closure.assign(nodes.begin(), nodes.end());
    for (int i = 0; i < (int)comps.size(); ++i) {
        if (i == giant)
            continue;
        res.small_components.push_back(comps[i]);
        res.closure.insert(res.closure.end(), comps[i].begin(),
                           comps[i].end());
    }
    if (giant >= 0)
        res.giant = comps[giant];
    std::sort(res.closure.begin(), res.closure.end());
    std::sort(res.giant.begin(), res.giant.end());
    return res;
}

namespace {

// GF(2) feasibility of "extend tau to an assignment complete on the given
// node set, satisfying the parity constraints there"
bool subsystem_solvable(const TorusGrid& grid, const TseitinInstance& inst,
                        const PartialAssignment& tau,
                        const std::vector<int>& constraint_nodes) {
    std::vector<uint8_t> in_set(grid.num_nodes(), 0);
    for (int v : constraint_nodes)
        in_set[v] = 1;

    std::vector<int> var_of_edge(inst.num_vars(), -1);
    int nvars = 0;
    for (int v : constraint_nodes) {
        for (int e : inst.graph.incident[v])
            if (!tau.assigns(e) && var_of_edge[e] < 0)
                var_of_edge[e] = nvars++;
    }

    Gf2System sys(nvars);
    std::vector<int> row;
    for (int v : constraint_nodes) {
        row.clear();
        int rhs = inst.charges[v];
        for (int e : inst.graph.incident[v]) {
            if (tau.assigns(e))
                rhs ^= tau.value(e);
            else
                row.push_back(var_of_edge[e]);
        }
        sys.add_row(row, rhs);
    }
    return sys.solvable();
}

} // namespace

bool is_locally_consistent(const TorusGrid& grid, const TseitinInstance& inst,
                           const PartialAssignment& tau, LcMode mode) {
    std::vector<int> supp = tau.support(inst.graph);
    if (mode == LcMode::Strict && 3 * (int)supp.size() > 2 * grid.n())
        throw std::invalid_argument(
            "is_locally_consistent: support larger than 2n/3");
    if (supp.empty())
        return true;
    ClosureResult cl = closure(grid, supp, mode);
    return subsystem_solvable(grid, inst, tau, cl.closure);
}

Implication implied_value(const TorusGrid& grid, const TseitinInstance& inst,
                          const PartialAssignment& tau, int edge,
                          LcMode mode) {
    if (tau.assigns(edge))
        return tau.value(edge) ? Implication::One : Implication::Zero;
    PartialAssignment t = tau;
    t.set(edge, 0);
    bool zero_ok = is_locally_consistent(grid, inst, t, mode);
    t.set(edge, 1);
    bool one_ok = is_locally_consistent(grid, inst, t, mode);
    if (zero_ok && one_ok)
        return Implication::Free;
    if (zero_ok)
        return Implication::Zero;
    if (one_ok)
        return Implication::One;
    return Implication::Dead;
}

std::optional<int> locally_implied(const TorusGrid& grid,
                                   const TseitinInstance& inst,
                                   const PartialAssignment& tau, int edge) {
    switch (implied_value(grid, inst, tau, edge)) {
    case Implication::Zero: return 0;
    case Implication::One: return 1;
    case Implication::Free: return std::nullopt;
    default:
        throw std::runtime_error(
            "locally_implied: no consistent extension exists");
    }
}

PartialAssignment extend_with_variable(const TorusGrid& grid,
                                       const TseitinInstance& inst,
                                       const PartialAssignment& tau,
                                       int edge) {
    std::vector<int> supp = tau.support(inst.graph);
    if (2 * (int)supp.size() > grid.n())
        throw std::invalid_argument(
            "extend_with_variable: support larger than n/2");
    if (tau.assigns(edge))
        return tau;

    ClosureResult cl_u = closure(grid, supp, LcMode::Strict);
    std::vector<int> v_nodes = supp;
    auto [a, b] = inst.graph.edges[edge];
    v_nodes.push_back(a);
    v_nodes.push_back(b);
    std::sort(v_nodes.begin(), v_nodes.end());
    v_nodes.erase(std::unique(v_nodes.begin(), v_nodes.end()), v_nodes.end());
    ClosureResult cl_v = closure(grid, v_nodes, LcMode::Strict);

    std::vector<uint8_t> in_cl_u(grid.num_nodes(), 0), in_cl_v(grid.num_nodes(), 0);
    for (int v : cl_u.closure)
        in_cl_u[v] = 1;
    for (int v : cl_v.closure)
        in_cl_v[v] = 1;

    // complete tau on closure(U), satisfying the constraints there
    std::vector<int> var_of_edge(inst.num_vars(), -1);
    std::vector<int> edge_of_var;
    for (int v : cl_u.closure)
        for (int e : inst.graph.incident[v])
            if (!tau.assigns(e) && var_of_edge[e] < 0) {
                var_of_edge[e] = (int)edge_of_var.size();
                edge_of_var.push_back(e);
            }
    Gf2System sys((int)edge_of_var.size());
    std::vector<int> row;
    for (int v : cl_u.closure) {
        row.clear();
        int rhs = inst.charges[v];
        for (int e : inst.graph.incident[v]) {
            if (tau.assigns(e))
                rhs ^= tau.value(e);
            else
                row.push_back(var_of_edge[e]);
        }
        sys.add_row(row, rhs);
    }
    std::vector<uint8_t> sol;
    if (!sys.solve(sol))
        throw std::invalid_argument(
            "extend_with_variable: input assignment is not locally consistent");

    PartialAssignment gamma = tau;
    for (size_t i = 0; i < edge_of_var.size(); ++i)
        gamma.set(edge_of_var[i], sol[i]);

    // grow to everything incident to closure(V); fresh variables get 0
    for (int v : cl_v.closure)
        for (int e : inst.graph.incident[v])
            if (!gamma.assigns(e))
                gamma.set(e, 0);

    // repair: flip along a path from a violated node into the giant part,
    // avoiding closure(U); each pass fixes one node and breaks none
    auto violated = [&](int v) {
        int parity = 0;
        for (int e : inst.graph.incident[v])
            parity ^= gamma.value(e);
        return parity != inst.charges[v];
    };
    for (;;) {
        int bad = -1;
        for (int v : cl_v.closure)
            if (!in_cl_u[v] && violated(v)) {
                bad = v;
                break;
            }
        if (bad < 0)
            break;
        // BFS from bad through nodes outside closure(U), stopping at the
        // first node outside closure(V)
        std::vector<int> prev_edge(grid.num_nodes(), -1),
            prev_node(grid.num_nodes(), -1);
        std::vector<uint8_t> seen(grid.num_nodes(), 0);
        std::vector<int> queue = {bad};
        seen[bad] = 1;
        int exit_node = -1;
        for (size_t head = 0; head < queue.size() && exit_node < 0; ++head) {
            int v = queue[head];
            for (Dir d : kAllDirs) {
                int w = grid.neighbor(v, d);
                if (seen[w] || in_cl_u[w])
                    continue;
                seen[w] = 1;
                prev_edge[w] = grid.edge_from(v, d);
                prev_node[w] = v;
                if (!in_cl_v[w]) {
                    exit_node = w;
                    break;
                }
                queue.push_back(w);
            }
        }
        if (exit_node < 0)
            throw std::runtime_error(
                "extend_with_variable: no escape path to the giant component");
        for (int v = exit_node; v != bad; v = prev_node[v])
            gamma.set(prev_edge[v], 1 - gamma.value(prev_edge[v]));
    }

    PartialAssignment out = tau;
    out.set(edge, gamma.value(edge));
    return out;
}

bool pairwise_locally_consistent(const TorusGrid& grid,
                                 const TseitinInstance& inst,
                                 const PartialAssignment& t1,
                                 const PartialAssignment& t2, LcMode mode) {
    auto merged = t1.merged_with(t2);
    if (!merged)
        return false;
    return is_locally_consistent(grid, inst, *merged, mode);
}

} // namespace gsw

#include "gsw/restriction.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace gsw {

bool RestrictionBase::path_alive(int path_id) const {
    const PathSpec& p = part->paths()[path_id];
    return alive[part->center_id(p.from)] && alive[part->center_id(p.to)];
}

bool PartialRestriction::edge_on_alive_path(int edge) const {
    int v = part->associated_center(edge);
    if (v < 0 || !alive[v])
        return false;
    for (int w : part->covering_partners(edge))
        if (alive[w])
            return true;
    return false;
}

ChargeVector charges_for_centers(const SubSquarePartition& part,
                                 const std::vector<int>& center_nodes) {
    ChargeVector charges(part.grid().num_nodes(), 1);
    for (int node : center_nodes)
        charges[node] = 0;
    return charges;
}

std::vector<int> chosen_from_alive(const SubSquarePartition& part,
                                   const std::vector<uint8_t>& alive) {
    // centers are numbered by row inside a square, so the lowest-row alive
    // center is the alive one with the smallest index
    std::vector<int> chosen(part.num_squares(), -1);
    for (int sq = 0; sq < part.num_squares(); ++sq) {
        for (int ell = 0; ell < part.delta(); ++ell) {
            int cid = sq * part.delta() + ell;
            if (alive[cid]) {
                chosen[sq] = cid;
                break;
            }
        }
    }
    return chosen;
}

namespace {

// per-square counts admissible for the regular space: within one percent of
// k/n2^2, rounded outward so that the band is never empty at small scale
bool admissible_count(long long c, long long k, long long squares) {
    if (100 * c * squares >= 99 * k && 100 * c * squares <= 101 * k)
        return true;
    return c == k / squares || c == (k + squares - 1) / squares;
}

} // namespace

std::vector<uint8_t> sample_alive(const SubSquarePartition& part, int k,
                                  Rng& rng) {
    int m = part.num_centers();
    int squares = part.num_squares();
    if (k % 2 == 0)
        throw std::invalid_argument("number of alive centers must be odd");
    if (k < squares || k > m)
        throw std::invalid_argument("alive count outside [n2^2, m]");
    // feasibility of the per-square band
    {
        long long lo = -1, hi = -1;
        for (long long c = 0; c <= part.delta(); ++c) {
            if (admissible_count(c, k, squares)) {
                if (lo < 0)
                    lo = c;
                hi = c;
            }
        }
        if (lo < 0 || lo * squares > k || hi * squares < k)
            throw std::invalid_argument(
                "no admissible per-square distribution for this k");
    }

    std::vector<int> perm(m);
    std::vector<uint8_t> alive(m);
    std::vector<int> counts(squares);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        for (int i = 0; i < m; ++i)
            perm[i] = i;
        // partial Fisher-Yates: a uniform k-subset
        std::fill(alive.begin(), alive.end(), 0);
        std::fill(counts.begin(), counts.end(), 0);
        for (int i = 0; i < k; ++i) {
            int j = i + (int)rng.below(m - i);
            std::swap(perm[i], perm[j]);
            alive[perm[i]] = 1;
            counts[part.square_of_center(perm[i])]++;
        }
        bool ok = true;
        for (int sq = 0; sq < squares && ok; ++sq)
            ok = admissible_count(counts[sq], k, squares);
        if (!ok)
            continue;
        // sigma = sigma(rho, pi) needs the pairing to exist; at desk scale
        // not every regular alive set admits one, so the distribution is
        // conditioned on pairability (automatic in the asymptotic regime)
        if (k > squares) {
            try {
                build_pairing(part, alive, chosen_from_alive(part, alive));
            } catch (const std::runtime_error&) {
                continue;
            }
        }
        return alive;
    }
    throw std::runtime_error(
        "sample_alive: retry cap hit; (k, delta) combination too tight");
}

std::vector<uint8_t> sample_alive_direct(const SubSquarePartition& part,
                                         int lo, int hi, Rng& rng) {
    if (lo < 1 || hi > part.delta() || lo > hi)
        throw std::invalid_argument("bad per-square count range");
    int squares = part.num_squares();
    for (;;) {
        std::vector<int> counts(squares);
        int total = 0;
        for (int sq = 0; sq < squares; ++sq) {
            counts[sq] = lo + (int)rng.below(hi - lo + 1);
            total += counts[sq];
        }
        if (total % 2 == 0)
            continue; // need an odd number of alive centers
        std::vector<uint8_t> alive(part.num_centers(), 0);
        for (int sq = 0; sq < squares; ++sq) {
            // uniform counts[sq]-subset of the square's centers
            std::vector<int> ells(part.delta());
            for (int i = 0; i < part.delta(); ++i)
                ells[i] = i;
            for (int i = 0; i < counts[sq]; ++i) {
                int j = i + (int)rng.below(part.delta() - i);
                std::swap(ells[i], ells[j]);
                alive[sq * part.delta() + ells[i]] = 1;
            }
        }
        return alive;
    }
}

namespace {

std::vector<int> center_nodes_of(const SubSquarePartition& part,
                                 const std::vector<int>& cids) {
    std::vector<int> nodes;
    nodes.reserve(cids.size());
    for (int cid : cids)
        if (cid >= 0)
            nodes.push_back(part.center_node(cid));
    return nodes;
}

std::vector<int> alive_ids(const std::vector<uint8_t>& alive) {
    std::vector<int> ids;
    for (int cid = 0; cid < (int)alive.size(); ++cid)
        if (alive[cid])
            ids.push_back(cid);
    return ids;
}

} // namespace

AffineMap build_affine_map(const SubSquarePartition& part,
                           const std::vector<uint8_t>& sigma0,
                           const std::vector<int>& chosen) {
    AffineMap map(part.grid().num_edges());
    std::vector<uint8_t> is_chosen(part.num_centers(), 0);
    for (int cid : chosen)
        if (cid >= 0)
            is_chosen[cid] = 1;
    for (int e = 0; e < part.grid().num_edges(); ++e) {
        int v = part.associated_center(e);
        map[e] = EdgeImage::constant(sigma0[e]);
        if (v < 0 || !is_chosen[v])
            continue;
        Dir d = part.associated_dir(e);
        int nbr_sq = part.neighbor_square(part.square_of_center(v), d);
        int w = chosen[nbr_sq];
        // is e on the chosen path between v and w?
        const auto& partners = part.covering_partners(e);
        if (!std::binary_search(partners.begin(), partners.end(), w))
            continue;
        int y = part.small_grid().edge_from(part.square_of_center(v), d);
        map[e] = EdgeImage::variable(y, sigma0[e] == 0);
    }
    return map;
}

PartialRestriction partial_from_alive(const SubSquarePartition& part,
                                      std::vector<uint8_t> alive, Rng& rng) {
    PartialRestriction rho;
    rho.part = &part;
    rho.alive = std::move(alive);
    rho.chosen = chosen_from_alive(part, rho.alive);
    TseitinInstance inst(
        part.grid().as_graph(),
        charges_for_centers(part, center_nodes_of(part, alive_ids(rho.alive))));
    rho.base = sample_solution(inst, rng);
    return rho;
}

FullRestriction full_from_alive(const SubSquarePartition& part,
                                std::vector<uint8_t> alive, Rng& rng) {
    FullRestriction sigma;
    sigma.part = &part;
    sigma.alive = std::move(alive);
    sigma.chosen = chosen_from_alive(part, sigma.alive);
    TseitinInstance inst(
        part.grid().as_graph(),
        charges_for_centers(part, center_nodes_of(part, sigma.chosen)));
    sigma.base = sample_solution(inst, rng);
    sigma.map = build_affine_map(part, sigma.base, sigma.chosen);
    return sigma;
}

PartialRestriction sample_partial(const SubSquarePartition& part, int k,
                                  Rng& rng) {
    return partial_from_alive(part, sample_alive(part, k, rng), rng);
}

FullRestriction sample_full(const SubSquarePartition& part, int k, Rng& rng) {
    return full_from_alive(part, sample_alive(part, k, rng), rng);
}

namespace {

// true when the clause over at most a handful of y-literals is satisfied
// under every assignment
bool clause_tautological(const std::vector<int>& ylits) {
    std::set<int> vars;
    for (int lit : ylits)
        vars.insert(std::abs(lit));
    std::vector<int> vlist(vars.begin(), vars.end());
    if (vlist.size() > 16)
        throw std::logic_error("unexpectedly wide restricted clause");
    for (uint32_t a = 0; a < (1u << vlist.size()); ++a) {
        bool sat = false;
        for (int lit : ylits) {
            int idx =
                (int)(std::find(vlist.begin(), vlist.end(), std::abs(lit)) -
                      vlist.begin());
            bool val = (a >> idx) & 1;
            if ((lit > 0) == val) {
                sat = true;
                break;
            }
        }
        if (!sat)
            return false;
    }
    return true;
}

std::vector<std::vector<int>> canonical_clauses(const CnfFormula& cnf) {
    std::vector<std::vector<int>> cs;
    for (const Clause& c : cnf.clauses) {
        std::vector<int> lits = c.lits;
        std::sort(lits.begin(), lits.end());
        cs.push_back(std::move(lits));
    }
    std::sort(cs.begin(), cs.end());
    return cs;
}

} // namespace

ApplyAudit apply_full(const FullRestriction& sigma) {
    const SubSquarePartition& part = *sigma.part;
    const TorusGrid& grid = part.grid();
    TseitinInstance inst = all_ones_instance(grid);
    CnfFormula cnf = to_cnf(inst);

    ApplyAudit audit;
    audit.fate.assign(grid.num_nodes(), NodeFate::Satisfied);

    // clauses are emitted node-major by to_cnf: 8 per degree-4 node
    size_t at = 0;
    for (int v = 0; v < grid.num_nodes(); ++v) {
        int nclauses = 8;
        bool any_tautology = false, any_open = false;
        for (int ci = 0; ci < nclauses; ++ci, ++at) {
            const Clause& c = cnf.clauses[at];
            bool satisfied = false;
            std::vector<int> ylits;
            for (int lit : c.lits) {
                int e = std::abs(lit) - 1;
                const EdgeImage& img = sigma.map[e];
                if (img.is_const()) {
                    bool val = img.const_value();
                    if ((lit > 0) == val) {
                        satisfied = true;
                        break;
                    }
                } else {
                    bool neg = (lit < 0) ^ img.negated();
                    ylits.push_back(neg ? -(img.var + 1) : img.var + 1);
                }
            }
            if (satisfied)
                continue;
            if (clause_tautological(ylits)) {
                any_tautology = true;
                continue;
            }
            any_open = true;
            Clause out;
            out.lits = ylits;
            audit.restricted.clauses.push_back(std::move(out));
        }
        if (any_open)
            audit.fate[v] = NodeFate::NewAxiom;
        else if (any_tautology)
            audit.fate[v] = NodeFate::Tautology;
    }
    audit.restricted.num_vars = part.small_grid().num_edges();

    // the surviving clauses must be exactly the small instance's CNF
    CnfFormula small_cnf = to_cnf(all_ones_instance(part.small_grid()));
    audit.matches_small_instance =
        canonical_clauses(audit.restricted) == canonical_clauses(small_cnf);

    // new axioms may appear only at chosen centers, one batch per square
    if (audit.matches_small_instance) {
        std::set<int> axiom_nodes;
        for (int v = 0; v < grid.num_nodes(); ++v)
            if (audit.fate[v] == NodeFate::NewAxiom)
                axiom_nodes.insert(v);
        std::set<int> chosen_nodes;
        for (int cid : sigma.chosen)
            if (cid >= 0)
                chosen_nodes.insert(part.center_node(cid));
        if (axiom_nodes != chosen_nodes)
            audit.matches_small_instance = false;
    }
    return audit;
}

FullRestriction compose(const PartialRestriction& rho,
                        const GraphicalPairing& pairing) {
    const SubSquarePartition& part = *rho.part;
    FullRestriction sigma;
    sigma.part = rho.part;
    sigma.alive = rho.alive;
    sigma.chosen = rho.chosen;
    sigma.base = rho.base;

    // an edge of the pairing flips the base assignment along its path
    for (auto [a, b] : pairing.all_edges()) {
        int pid = part.path_between_ids(a, b);
        for (int e : part.paths()[pid].edges)
            sigma.base[e] ^= 1;
    }
    sigma.map = build_affine_map(part, sigma.base, sigma.chosen);

    // cross-check against the substitution pi(rho(x_e)) edge by edge: the
    // pairing turns the XOR over alive paths through e into a constant or a
    // single surviving y-literal
    std::set<std::pair<int, int>> pairing_edges;
    for (auto [a, b] : pairing.all_edges())
        pairing_edges.insert({std::min(a, b), std::max(a, b)});
    for (int e = 0; e < part.grid().num_edges(); ++e) {
        int v = part.associated_center(e);
        int flips = 0;
        int y = -1;
        if (v >= 0 && rho.alive[v]) {
            for (int w : part.covering_partners(e)) {
                if (!rho.alive[w])
                    continue;
                bool chosen_path = rho.is_chosen(v) && rho.is_chosen(w);
                if (chosen_path) {
                    y = part.small_grid().edge_from(
                        part.square_of_center(v), part.associated_dir(e));
                } else if (pairing_edges.count(
                               {std::min(v, w), std::max(v, w)})) {
                    flips ^= 1;
                }
            }
        }
        EdgeImage expect;
        if (y < 0)
            expect = EdgeImage::constant(rho.base[e] ^ flips);
        else
            expect = EdgeImage::variable(y, (rho.base[e] ^ flips) == 0);
        const EdgeImage& got = sigma.map[e];
        if (expect.kind != got.kind || expect.var != got.var)
            throw std::logic_error("compose: substitution mismatch");
    }
    return sigma;
}

void write_restriction(std::ostream& out, const RestrictionBase& r,
                       const GraphicalPairing* pairing, int k,
                       uint64_t seed) {
    out << "restriction " << r.part->n1() << " " << r.part->n2() << " " << k
        << " " << seed << "\n";
    out << "alive";
    for (int cid = 0; cid < (int)r.alive.size(); ++cid)
        if (r.alive[cid])
            out << " " << cid;
    out << "\nbase ";
    for (uint8_t b : r.base)
        out << (int)b;
    out << "\npairing";
    if (pairing)
        for (auto [a, b] : pairing->all_edges())
            out << " " << a << "-" << b;
    out << "\n";
}

RestrictionFile read_restriction(std::istream& in) {
    RestrictionFile f;
    std::string tag;
    in >> tag;
    if (tag != "restriction")
        throw std::runtime_error("bad restriction file");
    in >> f.n1 >> f.n2 >> f.k >> f.seed;
    in >> tag;
    if (tag != "alive")
        throw std::runtime_error("bad restriction file: alive");
    std::string line;
    std::getline(in, line);
    {
        std::istringstream ls(line);
        int cid;
        while (ls >> cid)
            f.alive_ids.push_back(cid);
    }
    in >> tag;
    if (tag != "base")
        throw std::runtime_error("bad restriction file: base");
    std::string bits;
    in >> bits;
    f.base.reserve(bits.size());
    for (char c : bits)
        f.base.push_back(c == '1');
    in >> tag;
    if (tag != "pairing")
        throw std::runtime_error("bad restriction file: pairing");
    std::getline(in, line);
    std::istringstream ls(line);
    std::string pairstr;
    while (ls >> pairstr) {
        auto dash = pairstr.find('-');
        f.pairing_edges.push_back({std::stoi(pairstr.substr(0, dash)),
                                   std::stoi(pairstr.substr(dash + 1))});
    }
    return f;
}

} // namespace gsw

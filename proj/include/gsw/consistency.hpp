#ifndef GSW_CONSISTENCY_HPP
#define GSW_CONSISTENCY_HPP

#include <optional>
#include <vector>

#include "gsw/grid.hpp"
#include "gsw/tseitin.hpp"

namespace gsw {

// Partial assignment to edge variables; -1 means unassigned.
class PartialAssignment {
public:
    PartialAssignment() = default;
    explicit PartialAssignment(int num_edges) : values_(num_edges, -1) {}

    int size() const { return (int)values_.size(); }
    bool assigns(int edge) const { return values_[edge] >= 0; }
    int value(int edge) const { return values_[edge]; }
    void set(int edge, int v) { values_[edge] = (int8_t)v; }
    void unset(int edge) { values_[edge] = -1; }

    int assigned_count() const {
        int c = 0;
        for (int8_t v : values_)
            c += v >= 0;
        return c;
    }

    // nodes incident to assigned variables, sorted
    std::vector<int> support(const Graph& g) const;

    // union; nullopt on a direct value conflict
    std::optional<PartialAssignment> merged_with(
        const PartialAssignment& other) const;

    bool operator==(const PartialAssignment& o) const {
        return values_ == o.values_;
    }

    std::string to_text() const;                  // sparse "var=value" lines
    static PartialAssignment from_text(const std::string& text,
                                       int num_edges);

private:
    std::vector<int8_t> values_;
};

struct ClosureResult {
    std::vector<int> closure;              // sorted node ids
    std::vector<int> giant;                // sorted node ids
    std::vector<std::vector<int>> small_components;
};

// In the guaranteed regime (|U| <= 2n/3) the giant component is the unique
// one containing a full untouched row.  Relaxed mode falls back to the
// largest component so the notion stays total on tiny grids, where no row
// may survive.
enum class LcMode { Strict, Relaxed };

ClosureResult closure(const TorusGrid& grid, const std::vector<int>& nodes,
                      LcMode mode = LcMode::Strict);

// Extendability of tau to an assignment complete on closure(supp(tau))
// satisfying all parity constraints there; decided by GF(2) elimination on
// the induced subsystem.
bool is_locally_consistent(const TorusGrid& grid, const TseitinInstance& inst,
                           const PartialAssignment& tau,
                           LcMode mode = LcMode::Strict);

enum class Implication { Zero, One, Free, Dead };

Implication implied_value(const TorusGrid& grid, const TseitinInstance& inst,
                          const PartialAssignment& tau, int edge,
                          LcMode mode = LcMode::Strict);

// {0,1} if exactly one extension is consistent (or tau assigns the edge),
// nullopt if both are
std::optional<int> locally_implied(const TorusGrid& grid,
                                   const TseitinInstance& inst,
                                   const PartialAssignment& tau, int edge);

// The extension procedure behind the one-variable extension lemma: complete
// tau on the closure of its support, then grow towards the edge, repairing
// violated nodes by flipping along paths into the giant component.
PartialAssignment extend_with_variable(const TorusGrid& grid,
                                       const TseitinInstance& inst,
                                       const PartialAssignment& tau, int edge);

bool pairwise_locally_consistent(const TorusGrid& grid,
                                 const TseitinInstance& inst,
                                 const PartialAssignment& t1,
                                 const PartialAssignment& t2,
                                 LcMode mode = LcMode::Strict);

} // namespace gsw

#endif

#ifndef GSW_ECDT_HPP
#define GSW_ECDT_HPP

#include <set>

#include "gsw/info.hpp"

namespace gsw {

// Everything a switching run needs: the partial restriction, its pairing,
// the composed full restriction, and the pairing components as closed
// information sets.
struct SwitchContext {
    const SubSquarePartition* part = nullptr;
    PartialRestriction rho;
    GraphicalPairing pairing;
    FullRestriction sigma;

    TseitinInstance big_inst;   // all-ones on the big grid
    TseitinInstance small_inst; // all-ones on the small grid

    std::vector<int> comp_of_center; // -1 when not in a pairing component
    std::vector<InfoSet> comp_closures;

    SwitchContext(const SubSquarePartition& p, PartialRestriction r,
                  GraphicalPairing pi);

    const TorusGrid& big_grid() const { return part->grid(); }
    const TorusGrid& small_grid() const { return part->small_grid(); }
};

SwitchContext make_context(const SubSquarePartition& part,
                           PartialRestriction rho);

// the branch's image on the small grid, or nullopt when it contradicts the
// constants of sigma or maps two grid variables inconsistently
std::optional<PartialAssignment> induced_small_assignment(
    const SwitchContext& ctx, const Branch& psi);

// pairwise local consistency of a grid-level branch with sigma
bool branch_consistent_with_sigma(const SwitchContext& ctx,
                                  const Branch& psi);

// canonical minimal forcing information for psi given the collected info
// and the current branch answers
InfoSet find_forcing_info(const SwitchContext& ctx, const Branch& psi,
                          const InfoSet& info,
                          const PartialAssignment& tau_full);

bool info_traverses_branch(const SwitchContext& ctx, const InfoSet& info,
                           const Branch& psi);

struct StageRecord {
    int tree_index = -1;
    Branch psi;
    InfoSet forcing;             // J
    std::vector<int> disappearing; // odd-edge centers of J, ascending
    std::set<int> exposed_before;  // S*_{j-1}
    std::set<int> exposed_added;   // S_j
    InfoSet info_added;            // the branch answers + pi components
    int a = 0, b = 0;              // per-stage disappearing split
};

struct EcdtResult {
    DTree tree;      // over small-grid edges; null when the cap was hit
    bool cap_hit = false;
    // the global cap halts before the stage's queries, a round budget only
    // after a completed stage
    bool capped_with_answers = false;

    // state of the capped branch
    std::vector<StageRecord> stages;
    PartialAssignment capped_queries;  // tau as queried
    PartialAssignment capped_full;     // queried plus implied
    InfoSet capped_info;
    std::set<int> capped_exposed;

    int stage_count() const { return (int)stages.size(); }
};

// cap on exposed centers equivalent to depth cap s: ceil(s/4)
inline int exposure_cap(int s) { return (s + 3) / 4; }

// The extended canonical decision tree of the OR of the given trees under
// sigma; stops as soon as some branch exposes cap_exposed centers (the
// first stage g with |S*_g| >= cap_exposed) and returns that branch's stage
// records.  Seeding supports the common-tree construction.
EcdtResult build_ecdt(const SwitchContext& ctx,
                      const std::vector<DTree>& trees, int cap_exposed,
                      const PartialAssignment* seed_tau = nullptr,
                      const InfoSet* seed_info = nullptr,
                      const std::set<int>* seed_exposed = nullptr,
                      int round_budget = 0);

// the invariants of the construction, checked after every stage in tests
void assert_stage_invariants(const SwitchContext& ctx,
                             const PartialAssignment& tau_full,
                             const InfoSet& info, const std::set<int>& exposed);

} // namespace gsw

#endif

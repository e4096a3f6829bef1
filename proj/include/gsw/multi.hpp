#ifndef GSW_MULTI_HPP
#define GSW_MULTI_HPP

#include "gsw/encode.hpp"

namespace gsw {

// Common partial decision tree: a top tree over small-grid variables and,
// per formula and top-tree branch, a completion tree.
struct CommonPdt {
    DTree top;
    // completions[branch-index][formula-index]; branch indexing follows the
    // canonical depth-first order of the top tree
    std::vector<std::vector<DTree>> completions;
};

struct RoundRecord {
    int formula_index = -1;
    std::vector<StageRecord> stages;
    std::vector<int> lambda_vars;       // top-tree queries this round added
    PartialAssignment lambda_values;    // the capped branch's answers
};

struct CommonPdtResult {
    bool cap_hit = false;
    CommonPdt cpdt; // when no cap was hit

    // cap-hit bookkeeping for the encoder
    std::vector<RoundRecord> rounds;
    PartialAssignment capped_tau;  // 𝒯-branch answers
    InfoSet capped_info;
    std::set<int> capped_exposed;
};

// Builds the l-common partial decision tree of the given ORs under sigma.
// Rounds process the first formula whose OR is not representable within
// the round exposure budget ceil(l/4); the construction caps once
// exposure_cap(s) centers are exposed in total.
CommonPdtResult build_common_pdt(const SwitchContext& ctx,
                                 const std::vector<std::vector<DTree>>& ors,
                                 int ell, int s);

// full verification pass over a common partial decision tree
bool check_common_pdt(const TorusGrid& small_grid,
                      const TseitinInstance& small_inst, const CommonPdt& cpdt,
                      const std::vector<std::vector<DTree>>& restricted_ors,
                      int ell);

struct MultiEncodeResult {
    PartialRestriction rho_star;
    BitStream stream;
    int rounds = 0;
};

MultiEncodeResult multi_encode(const SwitchContext& ctx,
                               const std::vector<std::vector<DTree>>& ors,
                               int ell, int s, int t,
                               const CommonPdtResult& run);

PartialRestriction multi_decode(const SubSquarePartition& part,
                                const std::vector<std::vector<DTree>>& ors,
                                int ell, int s, int t,
                                const PartialRestriction& rho_star,
                                BitStream stream);

} // namespace gsw

#endif

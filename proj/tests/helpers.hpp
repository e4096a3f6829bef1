#ifndef GSW_TEST_HELPERS_HPP
#define GSW_TEST_HELPERS_HPP

#include "gsw/ecdt.hpp"
#include "gsw/experiment.hpp"
#include "gsw/rng.hpp"

namespace gsw::testing {

inline std::vector<DTree> random_forest(const SubSquarePartition& part,
                                        const TseitinInstance& inst, int m,
                                        int depth, Rng& rng,
                                        bool adversarial) {
    std::vector<DTree> out;
    for (int i = 0; i < m; ++i) {
        if (adversarial)
            out.push_back(parity_path_tree(part, inst, depth, rng));
        else
            out.push_back(random_grid_tree(part, inst, depth, rng));
    }
    return out;
}

} // namespace gsw::testing

#endif

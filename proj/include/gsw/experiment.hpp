#ifndef GSW_EXPERIMENT_HPP
#define GSW_EXPERIMENT_HPP

#include <iosfwd>

#include "gsw/multi.hpp"

namespace gsw {

// tree generators for switching experiments: typical trees with queries
// biased towards path edges, and adversarial trees computing parities of
// edges along one inter-center path
DTree random_grid_tree(const SubSquarePartition& part,
                       const TseitinInstance& inst, int max_depth, Rng& rng);
DTree parity_path_tree(const SubSquarePartition& part,
                       const TseitinInstance& inst, int depth, Rng& rng);

struct SwitchConfig {
    int n1 = 135, n2 = 3;
    int k = 11;
    int t = 2;     // input tree depth
    int s = 8;     // switching depth parameter
    int ell = 8;   // completion depth (multi)
    int m = 4;     // trees per formula
    int formulas = 1;
    int trials = 100;
    uint64_t seed = 1;
    bool adversarial = false;
    bool direct_sampler = false; // per-square counts instead of rejection
    // display-only constants of the probability bound
    double bound_A = 1.0, bound_c1 = 4.0, bound_c2 = 76.0;
};

struct TrialRecord {
    uint64_t trial = 0;
    bool cap_hit = false;
    bool verified = false;
    int depth_reached = 0;
    int stages = 0, exposed = 0;
    int a = 0, b = 0, c = 0;
    size_t transcript_bits = 0;
    double measured_A = 0.0;
};

struct ExperimentReport {
    SwitchConfig config;
    std::vector<TrialRecord> records;
    int cap_hits = 0;
    int verified = 0;
    double tail = 0.0; // empirical Pr[cap]
    double wilson_lo = 0.0, wilson_hi = 0.0;
    double bound_value = 0.0; // display-only formula at the config constants

    bool all_verified() const { return verified == (int)records.size(); }
};

ExperimentReport run_switch_experiment(const SwitchConfig& config);
ExperimentReport run_multi_experiment(const SwitchConfig& config);

void write_report_csv(std::ostream& out, const ExperimentReport& report);
void write_report_json(std::ostream& out, const ExperimentReport& report);

} // namespace gsw

#endif

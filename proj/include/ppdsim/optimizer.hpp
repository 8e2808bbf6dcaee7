#pragma once

#include <string>
#include <vector>

#include "ppdsim/simulator.hpp"
#include "ppdsim/stats.hpp"

namespace ppdsim {

enum class TensorSampler : std::uint8_t {
    dirichlet_uniform,          // iid Exp(1) entries, normalized (flat Dirichlet)
    independent_then_normalize, // iid U(0,1) entries, normalized
};

enum class SearchDimensions : std::uint8_t {
    status_only,       // time x clinical-status classes
    socio_demographic, // time x (age bucket, gender, ses)
};

struct MCSearchConfig {
    int num_samples = 10000;
    int replicates_per_evaluation = 5;
    int time_block_length = 28;
    TensorSampler sampler = TensorSampler::dirichlet_uniform;
    std::uint64_t seed = 1;
    /// Common random numbers: all candidates are evaluated on the same
    /// replicate seeds. When false every candidate draws fresh seeds.
    bool common_random_numbers = true;
    /// Number of status classes for status_only searches: 5 (H, R1..R4) or 1
    /// (all eligible pooled, which collapses to the group-free search space).
    int status_class_count = 5;

    void validate() const;
};

struct SearchTracePoint {
    int sample = 0;
    double mr = 0.0;      // evaluated mean over replicates
    double best_mr = 0.0; // best-so-far after this sample
};

struct SearchResult {
    CampaignStrategy best;
    double best_mr = 0.0;
    int best_sample = -1;
    std::vector<SearchTracePoint> trace;
};

/// Draws one allocation tensor from the sampler (entries non-negative,
/// normalized to sum 1).
AllocationTensor sample_tensor(PartitionKind partition, int num_cells, int block_length,
                               int horizon, TensorSampler sampler, Rng& rng);

/// Monte Carlo search over campaign tensors minimising evaluated mean
/// mortality rate. Candidate evaluations run on the worker pool; the outcome
/// is independent of scheduling (ties break to the lower sample index).
SearchResult mc_optimize(const ScenarioConfig& scenario, const MCSearchConfig& search,
                         SearchDimensions dimensions,
                         void (*progress)(int done, int total) = nullptr);

/// Brute-force companion for small instances: evaluates every tensor in
/// `candidates` with the same evaluation scheme and returns the argmin index.
int evaluate_argmin(const ScenarioConfig& scenario, const MCSearchConfig& search,
                    const std::vector<AllocationTensor>& candidates,
                    std::vector<double>* out_mrs = nullptr);

// ---------------------------------------------------------------------------
// Campaign comparison
// ---------------------------------------------------------------------------

struct StrategyOutcome {
    std::string name;
    SampleStats mr;
    std::vector<double> samples;
    double mean_spent = 0.0;
};

struct PairwiseTest {
    std::string other;
    TTestResult test; // H1: best < other
};

struct CompareReport {
    std::vector<StrategyOutcome> outcomes;
    int best_index = -1; // lowest mean MR
    AnovaResult anova;
    std::vector<PairwiseTest> pairwise; // best vs every other strategy
    bool exact_tie = false;
};

/// Runs every strategy n times on shared per-replicate seeds and compares
/// mean mortality rates (one-way ANOVA plus one-sided t-tests of the best
/// strategy against each alternative).
CompareReport compare_campaigns(const ScenarioConfig& scenario,
                                const std::vector<CampaignStrategy>& strategies,
                                int n_replicates, std::uint64_t seed_base);

void save_compare_csv(const CompareReport& report, const std::string& path);
void save_compare_json(const CompareReport& report, const std::string& path);
void save_trace_csv(const std::vector<SearchTracePoint>& trace, const std::string& path);

} // namespace ppdsim

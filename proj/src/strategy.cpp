#include "ppdsim/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ppdsim {

std::string CampaignStrategy::name() const {
    switch (variant) {
    case CampaignVariant::none: return "none";
    case CampaignVariant::naive: return "naive";
    case CampaignVariant::greedy: return "greedy";
    case CampaignVariant::mc:
        switch (tensor.partition) {
        case PartitionKind::groups: return "mc-socio";
        case PartitionKind::status_classes: return "mc-status";
        case PartitionKind::all: return "mc-flat";
        }
    }
    return "?";
}

std::vector<std::int64_t> proportional_split(const std::vector<double>& weights,
                                             std::int64_t total) {
    std::size_t n = weights.size();
    std::vector<std::int64_t> out(n, 0);
    if (n == 0 || total <= 0)
        return out;
    double wsum = 0.0;
    for (double w : weights)
        wsum += w;
    std::vector<double> shares(n);
    if (wsum <= 0.0) {
        for (std::size_t i = 0; i < n; ++i)
            shares[i] = static_cast<double>(total) / static_cast<double>(n);
    } else {
        for (std::size_t i = 0; i < n; ++i)
            shares[i] = static_cast<double>(total) * (weights[i] / wsum);
    }
    std::int64_t assigned = 0;
    std::vector<std::pair<double, std::size_t>> rem(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = static_cast<std::int64_t>(std::floor(shares[i] + 1e-9));
        assigned += out[i];
        rem[i] = {shares[i] - static_cast<double>(out[i]), i};
    }
    std::sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first)
            return a.first > b.first;
        return a.second < b.second;
    });
    for (std::int64_t k = 0; k < total - assigned; ++k)
        out[rem[static_cast<std::size_t>(k) % n].second]++;
    return out;
}

namespace {

class NoneExecutor final : public CampaignExecutor {
  public:
    PartitionKind partition() const override { return PartitionKind::all; }
    void plan_round(const CampaignObservation&, std::vector<std::int64_t>& q) override {
        q.assign(1, 0);
    }
    void note_sent(int, std::int64_t, std::int64_t) override {}
};

/// Whole budget spread uniformly over rounds, recipients drawn uniformly from
/// the single pool of eligible individuals. Undeliverable quota rolls to the
/// next round and is forfeited at the horizon.
class NaiveExecutor final : public CampaignExecutor {
  public:
    PartitionKind partition() const override { return PartitionKind::all; }

    void plan_round(const CampaignObservation& obs, std::vector<std::int64_t>& q) override {
        double per_round = obs.budget / obs.sms_cost /
                           static_cast<double>(obs.tf - obs.t0);
        acc_ += per_round;
        std::int64_t units = static_cast<std::int64_t>(std::floor(acc_ + 1e-9));
        acc_ -= static_cast<double>(units);
        q.assign(1, units + carry_);
        carry_ = 0;
    }

    void note_sent(int, std::int64_t requested, std::int64_t sent) override {
        carry_ += requested - sent;
    }

    std::int64_t take_forfeited() override {
        std::int64_t f = forfeited_;
        forfeited_ = 0;
        return f;
    }

    void finish() override {
        forfeited_ += carry_;
        carry_ = 0;
    }

  private:
    double acc_ = 0.0;
    std::int64_t carry_ = 0;
    std::int64_t forfeited_ = 0;
};

/// Uniform per-round budget share, split across groups proportionally to each
/// group's share of cumulative disease deaths (uniformly while all are zero).
class GreedyExecutor final : public CampaignExecutor {
  public:
    PartitionKind partition() const override { return PartitionKind::groups; }

    void plan_round(const CampaignObservation& obs, std::vector<std::int64_t>& q) override {
        double per_round = obs.budget / obs.sms_cost /
                           static_cast<double>(obs.tf - obs.t0);
        acc_ += per_round;
        std::int64_t units = static_cast<std::int64_t>(std::floor(acc_ + 1e-9));
        acc_ -= static_cast<double>(units);
        units += carry_;
        carry_ = 0;

        const auto& deaths = *obs.disease_deaths_per_group;
        std::vector<double> weights(deaths.size());
        for (std::size_t i = 0; i < deaths.size(); ++i)
            weights[i] = static_cast<double>(deaths[i]);
        q = proportional_split(weights, units);

        // Cap by eligibility up front so the surplus can roll as one pot.
        const auto& elig = *obs.eligible_per_cell;
        for (std::size_t i = 0; i < q.size(); ++i) {
            if (q[i] > elig[i]) {
                carry_ += q[i] - elig[i];
                q[i] = elig[i];
            }
        }
    }

    void note_sent(int, std::int64_t requested, std::int64_t sent) override {
        carry_ += requested - sent;
    }

    std::int64_t take_forfeited() override {
        std::int64_t f = forfeited_;
        forfeited_ = 0;
        return f;
    }

    void finish() override {
        forfeited_ += carry_;
        carry_ = 0;
    }

  private:
    double acc_ = 0.0;
    std::int64_t carry_ = 0;
    std::int64_t forfeited_ = 0;
};

/// Tensor-driven allocation: each cell's block budget is spread evenly over
/// the block's rounds (fractional remainders accumulate per cell); quota that
/// exceeds the cell's eligible membership rolls to the next round within the
/// block and is forfeited when the block ends.
class TensorExecutor final : public CampaignExecutor {
  public:
    TensorExecutor(AllocationTensor tensor, int t0, int tf)
        : tensor_(std::move(tensor)), t0_(t0), tf_(tf) {
        acc_.assign(static_cast<std::size_t>(tensor_.num_cells), 0.0);
        carry_.assign(static_cast<std::size_t>(tensor_.num_cells), 0);
    }

    PartitionKind partition() const override { return tensor_.partition; }

    void plan_round(const CampaignObservation& obs, std::vector<std::int64_t>& q) override {
        int offset = obs.round - t0_;
        int block = std::min(tensor_.block_of_round(offset), tensor_.num_blocks - 1);
        if (block != current_block_) {
            for (auto& c : carry_) { // surplus does not cross block boundaries
                forfeited_ += c;
                c = 0;
            }
            // fractional accumulators restart with the block's own budget
            std::fill(acc_.begin(), acc_.end(), 0.0);
            current_block_ = block;
        }
        int block_start = t0_ + block * tensor_.block_length;
        int block_len = std::min(tf_, block_start + tensor_.block_length) - block_start;
        double unit_budget = obs.budget / obs.sms_cost;
        q.assign(static_cast<std::size_t>(tensor_.num_cells), 0);
        for (int c = 0; c < tensor_.num_cells; ++c) {
            double per_round = tensor_.at(block, c) * unit_budget /
                               static_cast<double>(block_len);
            auto ci = static_cast<std::size_t>(c);
            acc_[ci] += per_round;
            std::int64_t units = static_cast<std::int64_t>(std::floor(acc_[ci] + 1e-9));
            acc_[ci] -= static_cast<double>(units);
            q[ci] = units + carry_[ci];
            carry_[ci] = 0;
        }
    }

    void note_sent(int cell, std::int64_t requested, std::int64_t sent) override {
        carry_[static_cast<std::size_t>(cell)] += requested - sent;
    }

    std::int64_t take_forfeited() override {
        std::int64_t f = forfeited_;
        forfeited_ = 0;
        return f;
    }

    void finish() override {
        for (auto& c : carry_) {
            forfeited_ += c;
            c = 0;
        }
    }

  private:
    AllocationTensor tensor_;
    int t0_;
    int tf_;
    int current_block_ = 0;
    std::vector<double> acc_;
    std::vector<std::int64_t> carry_;
    std::int64_t forfeited_ = 0;
};

} // namespace

std::unique_ptr<CampaignExecutor> make_executor(const CampaignStrategy& strategy,
                                                const ScenarioConfig& scenario) {
    switch (strategy.variant) {
    case CampaignVariant::none:
        return std::make_unique<NoneExecutor>();
    case CampaignVariant::naive:
        return std::make_unique<NaiveExecutor>();
    case CampaignVariant::greedy:
        return std::make_unique<GreedyExecutor>();
    case CampaignVariant::mc: {
        const AllocationTensor& t = strategy.tensor;
        t.validate();
        if (t.num_cells != partition_cell_count(t.partition, scenario.grid))
            throw ConfigError("campaign tensor does not match the scenario's grid");
        int blocks_needed = (scenario.horizon() + t.block_length - 1) / t.block_length;
        if (t.num_blocks != blocks_needed)
            throw ConfigError("campaign tensor does not cover the scenario horizon");
        return std::make_unique<TensorExecutor>(t, scenario.t0, scenario.tf);
    }
    }
    throw SimError("unknown campaign variant");
}

void campaign_round(PopulationState& pop, CampaignExecutor& exec,
                    const CampaignConfig& config, int t0, int tf, BudgetLedger& ledger,
                    Rng& rng, std::vector<Event>* log) {
    PartitionKind part = exec.partition();
    int cells = partition_cell_count(part, pop.grid);

    static thread_local std::vector<std::int64_t> eligible;
    eligible.assign(static_cast<std::size_t>(cells), 0);
    for (int c = 0; c < cells; ++c)
        eligible[static_cast<std::size_t>(c)] = cell_eligible(pop, part, c);

    CampaignObservation obs;
    obs.round = static_cast<int>(pop.round);
    obs.t0 = t0;
    obs.tf = tf;
    obs.budget = ledger.budget;
    obs.spent = ledger.spent();
    obs.sms_cost = config.sms_cost;
    obs.eligible_per_cell = &eligible;
    obs.disease_deaths_per_group = &pop.disease_deaths_per_group;

    static thread_local std::vector<std::int64_t> quotas;
    exec.plan_round(obs, quotas);
    if (quotas.size() != static_cast<std::size_t>(cells))
        throw SimError("campaign plan has wrong cell count");

    for (int c = 0; c < cells; ++c) {
        std::int64_t want = quotas[static_cast<std::size_t>(c)];
        if (want <= 0)
            continue;
        std::int64_t sent = dispatch_cell(pop, part, c, want, config, ledger, rng, log);
        exec.note_sent(c, want, sent);
    }
    ledger.forfeited += exec.take_forfeited();
}

} // namespace ppdsim

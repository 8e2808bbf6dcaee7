#include "ppdsim/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "ppdsim/csv.hpp"

namespace ppdsim {

const char* to_string(PartitionKind p) {
    switch (p) {
    case PartitionKind::all: return "all";
    case PartitionKind::status_classes: return "status";
    case PartitionKind::groups: return "groups";
    }
    return "?";
}

int partition_cell_count(PartitionKind p, const GroupGrid& grid) {
    switch (p) {
    case PartitionKind::all: return 1;
    case PartitionKind::status_classes: return kNumEligClasses;
    case PartitionKind::groups: return grid.size();
    }
    return 0;
}

AllocationTensor AllocationTensor::zeros(PartitionKind p, int block_length, int horizon,
                                         int num_cells) {
    if (block_length < 1)
        throw ConfigError("tensor: block length must be >= 1");
    AllocationTensor t;
    t.partition = p;
    t.block_length = block_length;
    t.num_blocks = (horizon + block_length - 1) / block_length;
    t.num_cells = num_cells;
    t.values.assign(static_cast<std::size_t>(t.num_blocks * t.num_cells), 0.0);
    return t;
}

double AllocationTensor::sum() const {
    double s = 0.0;
    for (double v : values)
        s += v;
    return s;
}

void AllocationTensor::validate() const {
    if (num_blocks < 1 || num_cells < 1)
        throw ConfigError("tensor: empty dimensions");
    if (values.size() != static_cast<std::size_t>(num_blocks * num_cells))
        throw ConfigError("tensor: value count does not match dimensions");
    for (double v : values)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw ConfigError("tensor: entries must be non-negative and finite");
    if (sum() > 1.0 + 1e-9)
        throw ConfigError("tensor: entries sum to more than 1");
}

void save_tensor_csv(const AllocationTensor& t, const GroupGrid& grid,
                     const std::string& path) {
    CsvWriter w(path);
    if (t.partition == PartitionKind::groups) {
        w.row("block", "age_bucket", "gender", "ses", "fraction");
        for (int b = 0; b < t.num_blocks; ++b)
            for (int c = 0; c < t.num_cells; ++c) {
                GroupKey k = grid.key_of(c);
                w.row(b, k.age_bucket, to_string(k.gender), k.ses, t.at(b, c));
            }
    } else {
        w.row("block", "cell", "fraction");
        for (int b = 0; b < t.num_blocks; ++b)
            for (int c = 0; c < t.num_cells; ++c)
                w.row(b, c, t.at(b, c));
    }
}

AllocationTensor load_tensor_csv(const std::string& path, const GroupGrid& grid,
                                 int horizon) {
    auto rows = read_csv(path);
    if (rows.empty())
        throw ConfigError("tensor CSV is empty: " + path);
    const auto& header = rows.front();
    bool socio = header.size() == 5 && header[1] == "age_bucket";
    bool flat = header.size() == 3 && header[1] == "cell";
    if (!socio && !flat)
        throw ConfigError("tensor CSV has an unrecognised header: " + path);

    int max_block = 0;
    for (std::size_t i = 1; i < rows.size(); ++i)
        max_block = std::max(max_block, std::stoi(rows[i][0]));

    // Infer block length from the horizon so that blocks tile [t0, tf).
    int num_blocks = max_block + 1;
    int block_length = (horizon + num_blocks - 1) / num_blocks;

    AllocationTensor t;
    if (socio) {
        t = AllocationTensor::zeros(PartitionKind::groups, block_length, horizon,
                                    grid.size());
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const auto& r = rows[i];
            if (r.size() != 5)
                throw ConfigError("tensor CSV row has wrong arity: " + path);
            GroupKey k{std::stoi(r[1]), gender_from_string(r[2]), std::stoi(r[3])};
            t.at(std::stoi(r[0]), grid.index_of(k)) = std::stod(r[4]);
        }
    } else {
        int max_cell = 0;
        for (std::size_t i = 1; i < rows.size(); ++i)
            max_cell = std::max(max_cell, std::stoi(rows[i][1]));
        PartitionKind p = max_cell == 0 ? PartitionKind::all : PartitionKind::status_classes;
        t = AllocationTensor::zeros(p, block_length, horizon,
                                    p == PartitionKind::all ? 1 : kNumEligClasses);
        for (std::size_t i = 1; i < rows.size(); ++i)
            t.at(std::stoi(rows[i][0]), std::stoi(rows[i][1])) = std::stod(rows[i][2]);
    }
    t.validate();
    return t;
}

void BudgetLedger::init(double budget_, double sms_cost_, int num_groups, int t0_,
                        int horizon_, bool detail) {
    budget = budget_;
    sms_cost = sms_cost_;
    total_sms = 0;
    forfeited = 0;
    sms_per_group.assign(static_cast<std::size_t>(num_groups), 0);
    track_detail = detail;
    t0 = t0_;
    horizon = horizon_;
    per_round.clear();
    if (detail)
        per_round.assign(static_cast<std::size_t>(horizon_),
                         std::vector<std::uint32_t>(static_cast<std::size_t>(num_groups), 0));
}

void BudgetLedger::record_send(int group, int round, std::int64_t n) {
    total_sms += n;
    if (spent() > budget + 1e-6)
        throw SimError("budget ledger breach: spent " + std::to_string(spent()) +
                       " exceeds budget " + std::to_string(budget));
    sms_per_group[static_cast<std::size_t>(group)] += n;
    if (track_detail)
        per_round[static_cast<std::size_t>(round - t0)][static_cast<std::size_t>(group)] +=
            static_cast<std::uint32_t>(n);
}

std::int64_t BudgetLedger::remaining_units() const {
    double rem = (budget - spent()) / sms_cost;
    return rem <= 0.0 ? 0 : static_cast<std::int64_t>(std::floor(rem + 1e-9));
}

void apply_sms(Individual& ind, const CampaignConfig& config) {
    std::uint32_t n = ++ind.sms_count;
    double delta;
    if (n == 1)
        delta = ind.rho * config.c1;
    else
        delta = ind.rho * (config.c1 + config.c2 * std::log10(static_cast<double>(n) /
                                                              static_cast<double>(n - 1)));
    ind.mu = std::clamp(ind.mu + delta, 0.0, 1.0);
}

double campaign_cost(const BudgetLedger& ledger) { return ledger.spent(); }

double campaign_cost(const AllocationTensor& t, const CampaignConfig& config,
                     double effective_budget) {
    double total = 0.0;
    for (double v : t.values) {
        double units = std::floor(v * effective_budget / config.sms_cost + 1e-12);
        total += units * config.sms_cost;
    }
    return total;
}

namespace {

/// The eligibility lists making up one cell, in a fixed deterministic order.
void cell_lists(const PopulationState& pop, PartitionKind partition, int cell,
                std::vector<const std::vector<std::uint32_t>*>& out) {
    out.clear();
    switch (partition) {
    case PartitionKind::all:
        for (int g = 0; g < pop.grid.size(); ++g)
            for (int c = 0; c < kNumEligClasses; ++c)
                out.push_back(&pop.elig_list(g, c));
        break;
    case PartitionKind::status_classes:
        for (int g = 0; g < pop.grid.size(); ++g)
            out.push_back(&pop.elig_list(g, cell));
        break;
    case PartitionKind::groups:
        for (int c = 0; c < kNumEligClasses; ++c)
            out.push_back(&pop.elig_list(cell, c));
        break;
    }
}

} // namespace

std::int64_t cell_eligible(const PopulationState& pop, PartitionKind partition, int cell) {
    std::vector<const std::vector<std::uint32_t>*> lists;
    cell_lists(pop, partition, cell, lists);
    std::int64_t n = 0;
    for (const auto* l : lists)
        n += static_cast<std::int64_t>(l->size());
    return n;
}

std::int64_t dispatch_cell(PopulationState& pop, PartitionKind partition, int cell,
                           std::int64_t count, const CampaignConfig& config,
                           BudgetLedger& ledger, Rng& rng, std::vector<Event>* log) {
    if (count <= 0)
        return 0;
    static thread_local std::vector<const std::vector<std::uint32_t>*> lists;
    cell_lists(pop, partition, cell, lists);
    std::int64_t total = 0;
    for (const auto* l : lists)
        total += static_cast<std::int64_t>(l->size());
    if (total == 0)
        return 0;

    std::int64_t k = std::min(count, total);
    if (k > ledger.remaining_units())
        throw SimError("campaign plan would exceed the budget");

    auto send_to = [&](std::uint32_t id) {
        Individual& ind = pop.individuals[id];
        apply_sms(ind, config);
        ledger.record_send(ind.group, static_cast<int>(pop.round), 1);
        if (log) {
            Event e;
            e.round = pop.round;
            e.individual = id;
            e.kind = EventKind::sms;
            log->push_back(e);
        }
    };

    if (k == total) {
        for (const auto* l : lists)
            for (std::uint32_t id : *l)
                send_to(id);
        return k;
    }

    // Floyd's sampling of k distinct virtual indices in [0, total).
    std::unordered_set<std::int64_t> chosen;
    chosen.reserve(static_cast<std::size_t>(k) * 2);
    std::vector<std::int64_t> picks;
    picks.reserve(static_cast<std::size_t>(k));
    for (std::int64_t i = total - k; i < total; ++i) {
        std::int64_t j = static_cast<std::int64_t>(
            rng.uniform_int(static_cast<std::uint64_t>(i + 1)));
        if (chosen.count(j)) {
            chosen.insert(i);
            picks.push_back(i);
        } else {
            chosen.insert(j);
            picks.push_back(j);
        }
    }
    std::sort(picks.begin(), picks.end());

    // Walk lists once, resolving virtual indices to members.
    std::size_t li = 0;
    std::int64_t base = 0;
    for (std::int64_t v : picks) {
        while (v >= base + static_cast<std::int64_t>(lists[li]->size())) {
            base += static_cast<std::int64_t>(lists[li]->size());
            ++li;
        }
        send_to((*lists[li])[static_cast<std::size_t>(v - base)]);
    }
    return k;
}

} // namespace ppdsim

#include "crowdcap/policy.hpp"

#include "crowdcap/central.hpp"
#include "crowdcap/decentral.hpp"

#include <stdexcept>
#include <utility>

namespace crowdcap {

namespace {

class MwtaPolicy : public Policy {
public:
    MwtaPolicy(const Scenario& sc, MaxWeightOptions opts) : sc_(&sc), opts_(opts) {
        if (sc.job_class == SystemClass::ID)
            throw std::invalid_argument(
                "MWTA does not accept ID systems; route them through jltt-mwta");
    }
    const std::string& id() const override {
        static const std::string name = "mwta";
        return name;
    }
    int pools() const override { return 1; }
    AllocationPlan step(const QueueState& qs, const std::vector<int64_t>& arrivals,
                        const AvailabilityDraw& u, uint64_t seed, int64_t epoch) override {
        (void)seed;
        (void)epoch;
        auto split = maxweight_solve(qs, arrivals, u, *sc_, opts_);
        return task_allocation(std::move(split), qs, arrivals, u, *sc_);
    }

private:
    const Scenario* sc_;
    MaxWeightOptions opts_;
};

class JlttMwtaPolicy : public Policy {
public:
    JlttMwtaPolicy(const Scenario& sc, MaxWeightOptions opts) : sc_(&sc), opts_(opts) {
        if (is_flexible(sc.job_class))
            throw std::invalid_argument("jltt-mwta targets inflexible (ID/IND) systems");
    }
    const std::string& id() const override {
        static const std::string name = "jltt-mwta";
        return name;
    }
    int pools() const override { return sc_->num_categories; }
    AllocationPlan step(const QueueState& qs, const std::vector<int64_t>& arrivals,
                        const AvailabilityDraw& u, uint64_t seed, int64_t epoch) override {
        (void)seed;
        (void)epoch;
        return jltt_mwta_step(qs, arrivals, u, *sc_, opts_);
    }

private:
    const Scenario* sc_;
    MaxWeightOptions opts_;
};

class GreedyAgentPolicy : public Policy {
public:
    GreedyAgentPolicy(const Scenario& sc, TaskPickMode mode) : sc_(&sc), mode_(mode) {
        if (sc.num_categories != 1)
            throw std::invalid_argument("greedy-agent requires a single-category scenario");
        if (mode == TaskPickMode::Fifo && sc.job_class != SystemClass::FD)
            throw std::invalid_argument("greedy-agent (fifo) requires an FD scenario");
        if (mode != TaskPickMode::Fifo && sc.job_class != SystemClass::FND)
            throw std::invalid_argument("greedy-agent job-pick modes require an FND scenario");
    }
    const std::string& id() const override {
        static const std::string name = "greedy-agent";
        return name;
    }
    int pools() const override { return 1; }
    AllocationPlan step(const QueueState& qs, const std::vector<int64_t>& arrivals,
                        const AvailabilityDraw& u, uint64_t seed, int64_t epoch) override {
        return greedy_agent_step(qs, arrivals, u, *sc_, seed, epoch, mode_);
    }

private:
    const Scenario* sc_;
    TaskPickMode mode_;
};

class GreedyJobPolicy : public Policy {
public:
    explicit GreedyJobPolicy(const Scenario& sc) : sc_(&sc) {
        if (sc.num_categories != 1)
            throw std::invalid_argument("greedy-job requires a single-category scenario");
        if (!is_flexible(sc.job_class))
            throw std::invalid_argument("greedy-job supports FD and FND scenarios");
    }
    const std::string& id() const override {
        static const std::string name = "greedy-job";
        return name;
    }
    int pools() const override { return 1; }
    AllocationPlan step(const QueueState& qs, const std::vector<int64_t>& arrivals,
                        const AvailabilityDraw& u, uint64_t seed, int64_t epoch) override {
        return greedy_job_step(qs, arrivals, u, *sc_, seed, epoch);
    }

private:
    const Scenario* sc_;
};

class ImprovisedJlttGreedyJobPolicy : public Policy {
public:
    explicit ImprovisedJlttGreedyJobPolicy(const Scenario& sc) : sc_(&sc) {
        if (is_flexible(sc.job_class))
            throw std::invalid_argument("ijltt-greedyjob targets inflexible (ID/IND) systems");
    }
    const std::string& id() const override {
        static const std::string name = "ijltt-greedyjob";
        return name;
    }
    int pools() const override { return sc_->num_categories; }
    AllocationPlan step(const QueueState& qs, const std::vector<int64_t>& arrivals,
                        const AvailabilityDraw& u, uint64_t seed, int64_t epoch) override {
        return improvised_jltt_greedyjob_step(qs, arrivals, u, *sc_, seed, epoch);
    }

private:
    const Scenario* sc_;
};

} // namespace

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const Scenario& sc) {
    MaxWeightOptions opts;
    opts.node_budget = spec.node_budget;
    opts.use_exact = spec.use_exact;
    if (spec.id == "mwta") return std::make_unique<MwtaPolicy>(sc, opts);
    if (spec.id == "jltt-mwta") return std::make_unique<JlttMwtaPolicy>(sc, opts);
    if (spec.id == "greedy-agent")
        return std::make_unique<GreedyAgentPolicy>(sc, parse_task_pick(spec.task_pick));
    if (spec.id == "greedy-job") return std::make_unique<GreedyJobPolicy>(sc);
    if (spec.id == "ijltt-greedyjob") return std::make_unique<ImprovisedJlttGreedyJobPolicy>(sc);
    throw std::invalid_argument("unknown policy id: " + spec.id);
}

} // namespace crowdcap

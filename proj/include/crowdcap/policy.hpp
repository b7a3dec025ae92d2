#pragma once

#include "crowdcap/model.hpp"
#include "crowdcap/plan.hpp"

#include <memory>
#include <string>

namespace crowdcap {

/// A policy is a deterministic pure transformation of (state, draw, seed,
/// epoch) into an AllocationPlan. The engine owns all mutable state.
class Policy {
public:
    virtual ~Policy() = default;
    virtual const std::string& id() const = 0;
    /// Number of queue pools this policy maintains (1, or L for JLTT-style).
    virtual int pools() const = 0;
    virtual AllocationPlan step(const QueueState& qs, const std::vector<int64_t>& arrivals,
                                const AvailabilityDraw& u, uint64_t seed, int64_t epoch) = 0;
};

/// Builds a policy and rejects class/structure mismatches up front
/// (e.g. plain MWTA on ID, GreedyAgent on multi-category scenarios).
std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const Scenario& sc);

} // namespace crowdcap

#pragma once

#include "crowdcap/capacity.hpp"
#include "crowdcap/model.hpp"
#include "crowdcap/plan.hpp"

#include <stdexcept>

namespace crowdcap::detail {

// Declaration-order cursor over the agent instances of one (category, skill),
// used wherever "agents fill in fixed order" applies.
struct AgentCursor {
    const Scenario* sc = nullptr;
    const AvailabilityDraw* u = nullptr;
    int category = 0, skill = 0;
    int type = 0;
    int64_t copy = -1; // before the first instance
    Rational remaining{0};

    bool next_agent() {
        while (type < sc->types_per_category[category]) {
            ++copy;
            if (copy >= (*u)[category][type]) {
                ++type;
                copy = -1;
                continue;
            }
            int64_t h = sc->agent_types[sc->agent_type_index(category, type)].availability[skill];
            if (h > 0) {
                remaining = Rational(h);
                return true;
            }
        }
        remaining = 0;
        return false;
    }

    void draw(Rational left, int job_type, int64_t task_index, std::vector<HourGrant>& grants) {
        while (left > 0) {
            if (remaining <= 0 && !next_agent())
                throw std::logic_error("agent hours exhausted mid-fill");
            Rational take = left < remaining ? left : remaining;
            grants.push_back({category, type, copy, job_type, task_index, skill, take});
            remaining -= take;
            left -= take;
        }
    }

    // Integer-hours variant for the whole-task paths; falls back to the
    // rational draw when a fractional remainder is in front.
    void draw_int(int64_t left, int job_type, int64_t task_index,
                  std::vector<HourGrant>& grants) {
        while (left > 0) {
            if (remaining <= 0 && !next_agent())
                throw std::logic_error("agent hours exhausted mid-fill");
            if (!is_integer(remaining)) {
                draw(Rational(left), job_type, task_index, grants);
                return;
            }
            int64_t rem = numerator(remaining).convert_to<int64_t>();
            int64_t take = left < rem ? left : rem;
            grants.push_back({category, type, copy, job_type, task_index, skill, Rational(take)});
            remaining = Rational(rem - take);
            left -= take;
        }
    }
};

} // namespace crowdcap::detail

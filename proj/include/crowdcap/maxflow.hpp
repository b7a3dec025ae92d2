#pragma once

#include "crowdcap/rational.hpp"

#include <vector>

namespace crowdcap {

/// Dinic max-flow on exact integer capacities. Graphs here are tiny
/// (jobs + categories + 2), so BigInt arithmetic costs nothing and keeps
/// region verdicts exact after denominators are cleared.
class MaxFlow {
public:
    explicit MaxFlow(int nodes);

    /// Returns the edge id; capacities must be >= 0.
    int add_edge(int from, int to, BigInt capacity);

    BigInt run(int source, int sink);

    /// Flow currently on edge id (after run).
    BigInt flow(int edge_id) const;

    /// Nodes reachable from `source` in the residual graph (min-cut side).
    std::vector<bool> reachable(int source) const;

private:
    struct Edge {
        int to;
        BigInt cap;
        int rev;
    };
    std::vector<std::vector<Edge>> adj_;
    std::vector<std::pair<int, int>> edge_pos_; // (node, offset)
    std::vector<BigInt> original_cap_;
    std::vector<int> level_, iter_;

    bool bfs(int s, int t);
    BigInt dfs(int v, int t, BigInt f);
};

} // namespace crowdcap

#include "crowdcap/maxflow.hpp"

#include <limits>
#include <queue>
#include <stdexcept>

namespace crowdcap {

MaxFlow::MaxFlow(int nodes) : adj_(nodes) {}

int MaxFlow::add_edge(int from, int to, BigInt capacity) {
    if (capacity < 0) throw std::invalid_argument("negative capacity");
    adj_[from].push_back({to, capacity, static_cast<int>(adj_[to].size())});
    adj_[to].push_back({from, BigInt(0), static_cast<int>(adj_[from].size()) - 1});
    edge_pos_.emplace_back(from, static_cast<int>(adj_[from].size()) - 1);
    original_cap_.push_back(capacity);
    return static_cast<int>(edge_pos_.size()) - 1;
}

bool MaxFlow::bfs(int s, int t) {
    level_.assign(adj_.size(), -1);
    std::queue<int> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (const auto& e : adj_[v]) {
            if (e.cap > 0 && level_[e.to] < 0) {
                level_[e.to] = level_[v] + 1;
                q.push(e.to);
            }
        }
    }
    return level_[t] >= 0;
}

BigInt MaxFlow::dfs(int v, int t, BigInt f) {
    if (v == t) return f;
    for (int& i = iter_[v]; i < static_cast<int>(adj_[v].size()); ++i) {
        Edge& e = adj_[v][i];
        if (e.cap > 0 && level_[v] < level_[e.to]) {
            BigInt d = dfs(e.to, t, f < e.cap ? f : e.cap);
            if (d > 0) {
                e.cap -= d;
                adj_[e.to][e.rev].cap += d;
                return d;
            }
        }
    }
    return BigInt(0);
}

BigInt MaxFlow::run(int source, int sink) {
    BigInt total = 0;
    BigInt inf = 1;
    for (const auto& c : original_cap_) inf += c;
    while (bfs(source, sink)) {
        iter_.assign(adj_.size(), 0);
        for (;;) {
            BigInt f = dfs(source, sink, inf);
            if (f == 0) break;
            total += f;
        }
    }
    return total;
}

BigInt MaxFlow::flow(int edge_id) const {
    auto [node, off] = edge_pos_[edge_id];
    return original_cap_[edge_id] - adj_[node][off].cap;
}

std::vector<bool> MaxFlow::reachable(int source) const {
    std::vector<bool> seen(adj_.size(), false);
    std::queue<int> q;
    seen[source] = true;
    q.push(source);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (const auto& e : adj_[v]) {
            if (e.cap > 0 && !seen[e.to]) {
                seen[e.to] = true;
                q.push(e.to);
            }
        }
    }
    return seen;
}

} // namespace crowdcap

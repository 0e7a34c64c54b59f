#include "stochnewton/markov.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <queue>

#include "stochnewton/errors.hpp"

namespace stochnewton {

namespace {

// Strongly connected components by Kosaraju's two-pass DFS.
std::vector<int> scc_of(const std::vector<std::vector<char>>& adj) {
    int n = static_cast<int>(adj.size());
    std::vector<int> order;
    order.reserve(n);
    std::vector<char> seen(n, 0);

    for (int s = 0; s < n; ++s) {
        if (seen[s]) continue;
        // iterative DFS recording finish order
        std::vector<std::pair<int, int>> stack{{s, 0}};
        seen[s] = 1;
        while (!stack.empty()) {
            auto& [v, i] = stack.back();
            bool advanced = false;
            for (; i < n; ++i) {
                if (adj[v][i] && !seen[i]) {
                    seen[i] = 1;
                    stack.push_back({i, 0});
                    advanced = true;
                    break;
                }
            }
            if (!advanced) {
                order.push_back(v);
                stack.pop_back();
            }
        }
    }

    std::vector<int> comp(n, -1);
    int n_comp = 0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        if (comp[*it] >= 0) continue;
        std::vector<int> stack{*it};
        comp[*it] = n_comp;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int u = 0; u < n; ++u)
                if (adj[u][v] && comp[u] < 0) {  // reverse edge
                    comp[u] = n_comp;
                    stack.push_back(u);
                }
        }
        ++n_comp;
    }
    return comp;
}

// Solve w^T M = w^T, sum w = 1 for a stochastic matrix M by Gaussian
// elimination with partial pivoting.
std::vector<double> stationary_of(const std::vector<std::vector<double>>& m) {
    int n = static_cast<int>(m.size());
    // rows of A are equations: (M^T - I) w = 0, last equation sum w = 1
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
    for (int r = 0; r < n - 1; ++r)
        for (int c = 0; c < n; ++c)
            a[r][c] = m[c][r] - (r == c ? 1.0 : 0.0);
    for (int c = 0; c < n; ++c) a[n - 1][c] = 1.0;
    a[n - 1][n] = 1.0;

    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        std::swap(a[piv], a[col]);
        if (std::abs(a[col][col]) < 1e-14)
            throw Error("singular system while solving for a stationary measure");
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (int c = col; c <= n; ++c) a[r][c] -= f * a[col][c];
        }
    }
    std::vector<double> w(n);
    for (int r = 0; r < n; ++r) w[r] = a[r][n] / a[r][r];
    // clamp tiny negatives from roundoff
    double total = 0.0;
    for (double& v : w) {
        if (v < 0.0 && v > -1e-12) v = 0.0;
        total += v;
    }
    for (double& v : w) v /= total;
    return w;
}

}  // namespace

ChainDecomposition decompose_chain(const LabeledChain& chain) {
    const int n = chain.state_count();
    const int L = chain.label_count();
    if (n == 0 || L == 0) throw BadConfig("empty chain");
    double psum = 0.0;
    for (double p : chain.label_probs) {
        if (!(p > 0.0)) throw BadConfig("label probabilities must be positive");
        psum += p;
    }
    if (std::abs(psum - 1.0) > 1e-12)
        throw BadConfig("label probabilities must sum to 1");
    if (static_cast<int>(chain.label_probs.size()) != L)
        throw BadConfig("label count mismatch");

    ChainDecomposition out;
    out.one_step.assign(n, std::vector<double>(n, 0.0));
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    for (int j = 0; j < L; ++j)
        for (int s = 0; s < n; ++s) {
            int t = chain.label_maps[j][s];
            if (t < 0 || t >= n) throw BadConfig("label map leaves the state space");
            out.one_step[s][t] += chain.label_probs[j];
            adj[s][t] = 1;
        }

    std::vector<int> comp = scc_of(adj);
    int n_comp = *std::max_element(comp.begin(), comp.end()) + 1;
    std::vector<char> closed(n_comp, 1);
    for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t)
            if (adj[s][t] && comp[t] != comp[s]) closed[comp[s]] = 0;

    std::vector<std::vector<int>> members(n_comp);
    for (int s = 0; s < n; ++s) members[comp[s]].push_back(s);

    for (int c = 0; c < n_comp; ++c) {
        if (!closed[c]) {
            for (int s : members[c]) out.transient_states.push_back(s);
            continue;
        }
        ChainClass cls;
        cls.states = members[c];
        std::sort(cls.states.begin(), cls.states.end());
        const int k = static_cast<int>(cls.states.size());
        std::vector<int> local(n, -1);
        for (int i = 0; i < k; ++i) local[cls.states[i]] = i;

        // Period: gcd of (dist[u] + 1 - dist[v]) over internal edges, with
        // BFS levels from an arbitrary base state.
        std::vector<int> dist(k, -1);
        std::queue<int> q;
        dist[0] = 0;
        q.push(0);
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int t = 0; t < n; ++t) {
                if (!adj[cls.states[u]][t]) continue;
                int v = local[t];
                if (v < 0) continue;
                if (dist[v] < 0) {
                    dist[v] = dist[u] + 1;
                    q.push(v);
                }
            }
        }
        int g = 0;
        for (int u = 0; u < k; ++u)
            for (int t = 0; t < n; ++t) {
                if (!adj[cls.states[u]][t]) continue;
                int v = local[t];
                if (v < 0) continue;
                g = std::gcd(g, std::abs(dist[u] + 1 - dist[v]));
            }
        cls.period = std::max(g, 1);

        cls.cyclic_classes.assign(cls.period, {});
        for (int u = 0; u < k; ++u) {
            int r = dist[u] % cls.period;
            cls.cyclic_classes[r].push_back(cls.states[u]);
        }
        for (auto& cc : cls.cyclic_classes) std::sort(cc.begin(), cc.end());

        // Stationary vector of the period-step chain on cyclic class 0,
        // then push forward one step at a time.
        std::vector<std::vector<double>> pclass(k, std::vector<double>(k, 0.0));
        for (int u = 0; u < k; ++u)
            for (int t = 0; t < n; ++t)
                if (local[t] >= 0) pclass[u][local[t]] = out.one_step[cls.states[u]][t];
        std::vector<std::vector<double>> pstep = pclass;
        for (int e = 1; e < cls.period; ++e) {
            std::vector<std::vector<double>> nxt(k, std::vector<double>(k, 0.0));
            for (int i = 0; i < k; ++i)
                for (int j2 = 0; j2 < k; ++j2) {
                    if (pstep[i][j2] == 0.0) continue;
                    for (int t = 0; t < k; ++t)
                        nxt[i][t] += pstep[i][j2] * pclass[j2][t];
                }
            pstep = std::move(nxt);
        }

        const auto& base_class = cls.cyclic_classes[0];
        const int b = static_cast<int>(base_class.size());
        std::vector<std::vector<double>> pk(b, std::vector<double>(b, 0.0));
        for (int i = 0; i < b; ++i)
            for (int j2 = 0; j2 < b; ++j2)
                pk[i][j2] = pstep[local[base_class[i]]][local[base_class[j2]]];
        std::vector<double> omega = stationary_of(pk);

        cls.stationary.assign(cls.period, {});
        cls.stationary[0] = omega;
        for (int e = 0; e + 1 < cls.period; ++e) {
            const auto& from = cls.cyclic_classes[e];
            const auto& to = cls.cyclic_classes[e + 1];
            std::vector<double> nxt(to.size(), 0.0);
            for (std::size_t i = 0; i < from.size(); ++i)
                for (std::size_t j2 = 0; j2 < to.size(); ++j2)
                    nxt[j2] += cls.stationary[e][i] * out.one_step[from[i]][to[j2]];
            cls.stationary[e + 1] = std::move(nxt);
        }

        out.closed_classes.push_back(std::move(cls));
    }

    std::sort(out.transient_states.begin(), out.transient_states.end());
    std::sort(out.closed_classes.begin(), out.closed_classes.end(),
              [](const ChainClass& a, const ChainClass& b) {
                  return a.states.front() < b.states.front();
              });
    return out;
}

bool enumerate_simple_cycles(const std::vector<std::vector<char>>& adjacency,
                             const std::vector<int>& states, long budget,
                             std::vector<std::vector<int>>& out) {
    out.clear();
    long work = 0;
    std::vector<int> path;
    std::vector<char> on_path(adjacency.size(), 0);

    // Cycles whose minimal vertex is states[i]: DFS restricted to
    // states[i..] with an edge back to the start closing the cycle.
    for (std::size_t i = 0; i < states.size(); ++i) {
        int start = states[i];
        std::vector<int> allowed(states.begin() + i, states.end());

        std::function<bool(int)> dfs = [&](int v) -> bool {
            if (++work > budget) return false;
            path.push_back(v);
            on_path[v] = 1;
            for (int u : allowed) {
                if (!adjacency[v][u]) continue;
                if (u == start) {
                    out.push_back(path);
                    if (static_cast<long>(out.size()) > budget) return false;
                } else if (!on_path[u]) {
                    if (!dfs(u)) return false;
                }
            }
            path.pop_back();
            on_path[v] = 0;
            return true;
        };
        if (!dfs(start)) return false;
    }
    return true;
}

}  // namespace stochnewton

#pragma once

#include <compare>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "nbsat/ossp.hpp"
#include "nbsat/solver.hpp"

namespace nbsat {

// An action the policy can score: either assigning a literal (x = variable,
// y = +1 or -1) or ordering two operations (x before y).
struct ActionId {
  enum class Kind { assign_literal, order_ops };
  Kind kind = Kind::assign_literal;
  int x = 0;
  int y = 0;
  friend auto operator<=>(const ActionId&, const ActionId&) = default;
};

// Graph observation fed to the policy network. Nodes and edges carry dense
// feature rows; every scoreable action points at the node slot or edge whose
// decoded output is its Q value.
struct GraphObservation {
  struct Edge {
    int a = 0;  // variable node (bipartite form) or source vertex
    int b = 0;  // clause node or destination vertex
    std::vector<double> features;
  };
  struct Action {
    ActionId id;
    int node = -1;  // decoded node output index, -1 when edge-scored
    int slot = 0;   // which node output column
    int edge = -1;  // decoded edge output index, -1 when node-scored
  };

  std::vector<std::vector<double>> node_features;
  std::vector<Edge> edges;
  std::vector<double> global_features;
  std::vector<Action> actions;
  int num_var_nodes = 0;
};

// Bipartite variable-clause graph of a solver state. Variable nodes come
// first in ascending variable order with features [1, 0], then one node per
// reduced clause with features [0, 1]. Each literal occurrence becomes an
// edge labeled [0, 1] for a positive occurrence and [1, 0] for a negated
// one. Actions enumerate (var, positive) then (var, negative) per variable;
// slot 0 of a variable node's decoded output scores the positive literal.
inline GraphObservation build_sat_graph(const MdpState& state) {
  GraphObservation obs;
  obs.num_var_nodes = static_cast<int>(state.variables.size());
  std::unordered_map<int, int> node_of;
  node_of.reserve(state.variables.size());
  for (size_t i = 0; i < state.variables.size(); ++i) {
    node_of[state.variables[i]] = static_cast<int>(i);
    obs.node_features.push_back({1.0, 0.0});
  }
  for (size_t ci = 0; ci < state.clauses.size(); ++ci) {
    const int cnode = obs.num_var_nodes + static_cast<int>(ci);
    obs.node_features.push_back({0.0, 1.0});
    for (int lit : state.clauses[ci]) {
      const auto it = node_of.find(lit > 0 ? lit : -lit);
      if (it == node_of.end())
        throw std::invalid_argument("build_sat_graph: clause mentions assigned variable");
      obs.edges.push_back(GraphObservation::Edge{
          it->second, cnode,
          lit > 0 ? std::vector<double>{0.0, 1.0} : std::vector<double>{1.0, 0.0}});
    }
  }
  obs.global_features = {0.0};
  for (size_t i = 0; i < state.variables.size(); ++i) {
    const int v = state.variables[i];
    obs.actions.push_back({ActionId{ActionId::Kind::assign_literal, v, 1},
                           static_cast<int>(i), 0, -1});
    obs.actions.push_back({ActionId{ActionId::Kind::assign_literal, v, -1},
                           static_cast<int>(i), 1, -1});
  }
  return obs;
}

// Operation graph observation. One node per operation in flat index order
// with features (duration/T, (est+1)/T, lct/T); one edge per open ordering
// choice with the constant feature [1]; each edge is itself an action.
inline GraphObservation build_ossp_graph(const OpGraph& g) {
  if (g.horizon < 1) throw std::invalid_argument("build_ossp_graph: bad horizon");
  GraphObservation obs;
  obs.num_var_nodes = static_cast<int>(g.vertices.size());
  const double T = static_cast<double>(g.horizon);
  for (size_t i = 0; i < g.vertices.size(); ++i) {
    const auto lbl = g.label(static_cast<int>(i));
    obs.node_features.push_back(
        {lbl[0] / T, lbl[1] / T, lbl[2] / T});
  }
  obs.global_features = {0.0};
  for (size_t e = 0; e < g.edges.size(); ++e) {
    const auto [i, j] = g.edges[e];
    obs.edges.push_back(GraphObservation::Edge{i, j, {1.0}});
    obs.actions.push_back({ActionId{ActionId::Kind::order_ops, i, j}, -1, 0,
                           static_cast<int>(e)});
  }
  return obs;
}

}  // namespace nbsat

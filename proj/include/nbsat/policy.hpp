#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include "nbsat/graph.hpp"
#include "nbsat/rng.hpp"

namespace nbsat {

class WeightsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GnnHyper {
  int node_in = 2;
  int edge_in = 2;
  int global_in = 1;
  int hidden = 64;
  int core_layers = 4;
  int mlp_depth = 1;
  bool shared_core = false;
  bool release_head = true;
  friend bool operator==(const GnnHyper&, const GnnHyper&) = default;
};

inline GnnHyper sat_hyper() { return GnnHyper{}; }

inline GnnHyper ossp_hyper() {
  GnnHyper h;
  h.node_in = 3;
  h.edge_in = 1;
  return h;
}

struct Tensor {
  std::string name;
  int rows = 0;
  int cols = 0;
  std::vector<double> v;  // row-major, rows*cols entries

  double at(int r, int c) const {
    return v[static_cast<size_t>(r) * static_cast<size_t>(cols) +
             static_cast<size_t>(c)];
  }
  friend bool operator==(const Tensor&, const Tensor&) = default;
};

struct Linear {
  Tensor w;  // out × in
  Tensor b;  // out × 1
  friend bool operator==(const Linear&, const Linear&) = default;

  void apply(const std::vector<double>& x, std::vector<double>& out) const {
    out.resize(static_cast<size_t>(w.rows));
    for (int r = 0; r < w.rows; ++r) {
      double acc = b.v[static_cast<size_t>(r)];
      const double* row = w.v.data() + static_cast<size_t>(r) * static_cast<size_t>(w.cols);
      for (int c = 0; c < w.cols; ++c) acc += row[c] * x[static_cast<size_t>(c)];
      out[static_cast<size_t>(r)] = acc;
    }
  }
};

// mlp_depth stacked (linear, ReLU) blocks; the first maps the concatenated
// input down to the hidden width.
struct Mlp {
  std::vector<Linear> layers;
  friend bool operator==(const Mlp&, const Mlp&) = default;

  std::vector<double> apply(const std::vector<double>& x) const {
    std::vector<double> cur = x, next;
    for (const Linear& l : layers) {
      l.apply(cur, next);
      for (double& d : next) d = d > 0.0 ? d : 0.0;
      cur.swap(next);
    }
    return cur;
  }
};

struct CoreLayer {
  Mlp phi_e;  // (u, e, v_src, v_dst) -> e
  Mlp phi_v;  // (u, v, mean incident e) -> v
  Mlp phi_u;  // (u, mean e, mean v) -> u
  friend bool operator==(const CoreLayer&, const CoreLayer&) = default;
};

// Encoder-core-decoder network. Tensor order (used by random_init draws and
// the weights file alike): encoder node/edge/global, then each stored core
// layer's phi_e, phi_v, phi_u layers in sequence, then decoder node/edge,
// then the two release layers; within each linear map, weight before bias.
struct PolicyWeights {
  GnnHyper hyper;
  Linear enc_node, enc_edge, enc_global;
  std::vector<CoreLayer> core;  // one entry when shared_core
  Linear dec_node;              // hidden -> 2
  Linear dec_edge;              // hidden -> 1
  Linear rel1, rel2;            // hidden -> hidden, hidden -> 1
  friend bool operator==(const PolicyWeights&, const PolicyWeights&) = default;
};

struct QOutput {
  std::vector<ActionId> actions;
  std::vector<double> q;  // aligned with actions
  std::optional<double> release;

  // Lowest index wins ties.
  size_t argmax() const {
    if (q.empty()) throw std::logic_error("QOutput::argmax: no actions");
    size_t best = 0;
    for (size_t i = 1; i < q.size(); ++i)
      if (q[i] > q[best]) best = i;
    return best;
  }
};

namespace detail {

// Allocates the nested core vectors to match the hyperparameters so the
// visitor below can hand out references.
inline void shape_weights(PolicyWeights& w) {
  const int stored = w.hyper.shared_core ? 1 : w.hyper.core_layers;
  w.core.resize(static_cast<size_t>(stored));
  for (CoreLayer& cl : w.core) {
    cl.phi_e.layers.resize(static_cast<size_t>(w.hyper.mlp_depth));
    cl.phi_v.layers.resize(static_cast<size_t>(w.hyper.mlp_depth));
    cl.phi_u.layers.resize(static_cast<size_t>(w.hyper.mlp_depth));
  }
}

// Enumerates every linear map in canonical order as (linear, name, out, in).
// `w` must already be shaped.
template <typename PW, typename Fn>
void visit_linears(PW& w, Fn&& fn) {
  const int h = w.hyper.hidden;
  fn(w.enc_node, std::string("enc_node"), h, w.hyper.node_in);
  fn(w.enc_edge, std::string("enc_edge"), h, w.hyper.edge_in);
  fn(w.enc_global, std::string("enc_global"), h, w.hyper.global_in);
  const int stored = w.hyper.shared_core ? 1 : w.hyper.core_layers;
  for (int l = 0; l < stored; ++l) {
    auto& cl = w.core[static_cast<size_t>(l)];
    const std::string base = "core" + std::to_string(l);
    for (int k = 0; k < w.hyper.mlp_depth; ++k)
      fn(cl.phi_e.layers[static_cast<size_t>(k)],
         base + ".phi_e." + std::to_string(k), h, k == 0 ? 4 * h : h);
    for (int k = 0; k < w.hyper.mlp_depth; ++k)
      fn(cl.phi_v.layers[static_cast<size_t>(k)],
         base + ".phi_v." + std::to_string(k), h, k == 0 ? 3 * h : h);
    for (int k = 0; k < w.hyper.mlp_depth; ++k)
      fn(cl.phi_u.layers[static_cast<size_t>(k)],
         base + ".phi_u." + std::to_string(k), h, k == 0 ? 3 * h : h);
  }
  fn(w.dec_node, std::string("dec_node"), 2, h);
  fn(w.dec_edge, std::string("dec_edge"), 1, h);
  if (w.hyper.release_head) {
    fn(w.rel1, std::string("release.0"), h, h);
    fn(w.rel2, std::string("release.1"), 1, h);
  }
}

inline void validate_hyper(const GnnHyper& h) {
  if (h.node_in < 1 || h.edge_in < 1 || h.global_in < 1 || h.hidden < 1 ||
      h.core_layers < 1 || h.mlp_depth < 1)
    throw WeightsError("hyperparameters must all be >= 1");
}

inline std::string render_double(double d) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, d);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& tok) {
  double d = 0.0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), d);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw WeightsError("bad float token '" + tok + "'");
  return d;
}

}  // namespace detail

inline PolicyWeights random_init(const GnnHyper& hyper, RngSeed seed) {
  detail::validate_hyper(hyper);
  PolicyWeights w;
  w.hyper = hyper;
  detail::shape_weights(w);
  SplitMix64 rng(seed);
  detail::visit_linears(w, [&](Linear& lin, const std::string& name, int out, int in) {
    const double s = 1.0 / std::sqrt(static_cast<double>(in));
    lin.w = Tensor{name + ".w", out, in, {}};
    lin.w.v.resize(static_cast<size_t>(out) * static_cast<size_t>(in));
    for (double& d : lin.w.v) d = (2.0 * rng.unit() - 1.0) * s;
    lin.b = Tensor{name + ".b", out, 1, {}};
    lin.b.v.resize(static_cast<size_t>(out));
    for (double& d : lin.b.v) d = (2.0 * rng.unit() - 1.0) * s;
  });
  return w;
}

inline void save_weights(const PolicyWeights& weights, std::ostream& out) {
  const GnnHyper& h = weights.hyper;
  out << "GQW 1\n";
  out << h.node_in << ' ' << h.edge_in << ' ' << h.global_in << ' ' << h.hidden
      << ' ' << h.core_layers << ' ' << h.mlp_depth << ' '
      << (h.shared_core ? 1 : 0) << ' ' << (h.release_head ? 1 : 0) << '\n';
  detail::visit_linears(weights, [&](const Linear& lin, const std::string&, int, int) {
    for (const Tensor* t : {&lin.w, &lin.b}) {
      out << t->name << ' ' << t->rows << ' ' << t->cols << '\n';
      for (size_t i = 0; i < t->v.size(); ++i)
        out << detail::render_double(t->v[i]) << (i + 1 == t->v.size() ? '\n' : ' ');
    }
  });
}

inline std::string save_weights(const PolicyWeights& weights) {
  std::ostringstream out;
  save_weights(weights, out);
  return out.str();
}

inline PolicyWeights load_weights(std::istream& in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "GQW")
    throw WeightsError("not a GQW weights stream");
  if (version != 1)
    throw WeightsError("unsupported weights version " + std::to_string(version));
  GnnHyper h;
  int shared = 0, release = 0;
  if (!(in >> h.node_in >> h.edge_in >> h.global_in >> h.hidden >>
        h.core_layers >> h.mlp_depth >> shared >> release))
    throw WeightsError("truncated hyperparameter line");
  h.shared_core = shared != 0;
  h.release_head = release != 0;
  detail::validate_hyper(h);
  PolicyWeights w;
  w.hyper = h;
  detail::shape_weights(w);
  detail::visit_linears(w, [&](Linear& lin, const std::string& name, int out, int cin) {
    const auto read_tensor = [&](Tensor& t, const std::string& want, int rows, int cols) {
      std::string got;
      int r = 0, c = 0;
      if (!(in >> got >> r >> c)) throw WeightsError("truncated stream at " + want);
      if (got != want) throw WeightsError("expected tensor " + want + ", found " + got);
      if (r != rows || c != cols)
        throw WeightsError("shape mismatch for " + want);
      t.name = want;
      t.rows = rows;
      t.cols = cols;
      t.v.resize(static_cast<size_t>(rows) * static_cast<size_t>(cols));
      std::string tok;
      for (double& d : t.v) {
        if (!(in >> tok)) throw WeightsError("truncated values for " + want);
        d = detail::parse_double(tok);
      }
    };
    read_tensor(lin.w, name + ".w", out, cin);
    read_tensor(lin.b, name + ".b", out, 1);
  });
  return w;
}

inline PolicyWeights load_weights(const std::string& text) {
  std::istringstream in(text);
  return load_weights(in);
}

// One full forward pass. Encoding applies a linear map plus ReLU per role
// with no aggregation; each core iteration updates edges, then nodes (from
// the mean of their incident updated edges), then the global vector (from
// the means of all updated edges and nodes); the decoder reads raw affine
// scores off the final embeddings. Accumulation always runs in index order
// so results are reproducible.
inline QOutput forward(const GraphObservation& obs, const PolicyWeights& w) {
  const GnnHyper& h = w.hyper;
  const size_t H = static_cast<size_t>(h.hidden);
  const size_t n_nodes = obs.node_features.size();
  const size_t n_edges = obs.edges.size();

  for (const auto& f : obs.node_features)
    if (static_cast<int>(f.size()) != h.node_in)
      throw std::invalid_argument("forward: node feature width mismatch");
  for (const auto& e : obs.edges) {
    if (static_cast<int>(e.features.size()) != h.edge_in)
      throw std::invalid_argument("forward: edge feature width mismatch");
    if (e.a < 0 || e.b < 0 || e.a >= static_cast<int>(n_nodes) ||
        e.b >= static_cast<int>(n_nodes))
      throw std::invalid_argument("forward: edge endpoint out of range");
  }
  if (static_cast<int>(obs.global_features.size()) != h.global_in)
    throw std::invalid_argument("forward: global feature width mismatch");

  const auto relu = [](std::vector<double>& x) {
    for (double& d : x) d = d > 0.0 ? d : 0.0;
  };

  std::vector<std::vector<double>> v(n_nodes), e(n_edges);
  for (size_t i = 0; i < n_nodes; ++i) {
    w.enc_node.apply(obs.node_features[i], v[i]);
    relu(v[i]);
  }
  for (size_t i = 0; i < n_edges; ++i) {
    w.enc_edge.apply(obs.edges[i].features, e[i]);
    relu(e[i]);
  }
  std::vector<double> u;
  w.enc_global.apply(obs.global_features, u);
  relu(u);

  std::vector<double> cat;
  for (int l = 0; l < h.core_layers; ++l) {
    const CoreLayer& cl = w.core[h.shared_core ? 0 : static_cast<size_t>(l)];
    for (size_t i = 0; i < n_edges; ++i) {
      cat.clear();
      cat.insert(cat.end(), u.begin(), u.end());
      cat.insert(cat.end(), e[i].begin(), e[i].end());
      const auto& va = v[static_cast<size_t>(obs.edges[i].a)];
      const auto& vb = v[static_cast<size_t>(obs.edges[i].b)];
      cat.insert(cat.end(), va.begin(), va.end());
      cat.insert(cat.end(), vb.begin(), vb.end());
      e[i] = cl.phi_e.apply(cat);
    }
    // Mean of incident edges per node; an edge touches both its endpoints.
    std::vector<std::vector<double>> agg(n_nodes, std::vector<double>(H, 0.0));
    std::vector<int> deg(n_nodes, 0);
    for (size_t i = 0; i < n_edges; ++i) {
      for (int end : {obs.edges[i].a, obs.edges[i].b}) {
        auto& acc = agg[static_cast<size_t>(end)];
        for (size_t k = 0; k < H; ++k) acc[k] += e[i][k];
        ++deg[static_cast<size_t>(end)];
      }
    }
    for (size_t i = 0; i < n_nodes; ++i) {
      auto& acc = agg[i];
      if (deg[i] > 0)
        for (double& d : acc) d /= deg[i];
      cat.clear();
      cat.insert(cat.end(), u.begin(), u.end());
      cat.insert(cat.end(), v[i].begin(), v[i].end());
      cat.insert(cat.end(), acc.begin(), acc.end());
      v[i] = cl.phi_v.apply(cat);
    }
    std::vector<double> emean(H, 0.0), vmean(H, 0.0);
    for (size_t i = 0; i < n_edges; ++i)
      for (size_t k = 0; k < H; ++k) emean[k] += e[i][k];
    if (n_edges > 0)
      for (double& d : emean) d /= static_cast<double>(n_edges);
    for (size_t i = 0; i < n_nodes; ++i)
      for (size_t k = 0; k < H; ++k) vmean[k] += v[i][k];
    if (n_nodes > 0)
      for (double& d : vmean) d /= static_cast<double>(n_nodes);
    cat.clear();
    cat.insert(cat.end(), u.begin(), u.end());
    cat.insert(cat.end(), emean.begin(), emean.end());
    cat.insert(cat.end(), vmean.begin(), vmean.end());
    u = cl.phi_u.apply(cat);
  }

  QOutput out;
  out.actions.reserve(obs.actions.size());
  out.q.reserve(obs.actions.size());
  std::vector<double> scores;
  for (const auto& a : obs.actions) {
    double q = 0.0;
    if (a.edge >= 0) {
      if (a.edge >= static_cast<int>(n_edges))
        throw std::invalid_argument("forward: action edge out of range");
      w.dec_edge.apply(e[static_cast<size_t>(a.edge)], scores);
      q = scores[0];
    } else {
      if (a.node < 0 || a.node >= static_cast<int>(n_nodes))
        throw std::invalid_argument("forward: action node out of range");
      if (a.slot < 0 || a.slot >= w.dec_node.w.rows)
        throw std::invalid_argument("forward: action slot out of range");
      w.dec_node.apply(v[static_cast<size_t>(a.node)], scores);
      q = scores[static_cast<size_t>(a.slot)];
    }
    out.actions.push_back(a.id);
    out.q.push_back(q);
  }
  if (h.release_head) {
    std::vector<double> hid;
    w.rel1.apply(u, hid);
    relu(hid);
    w.rel2.apply(hid, scores);
    out.release = scores[0];
  }
  return out;
}

}  // namespace nbsat

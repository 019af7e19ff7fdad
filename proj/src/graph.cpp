#include "ricci/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <queue>
#include <sstream>

#include <json.hpp>

#include "ricci/error.hpp"

namespace ricci {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string edge_name(Vertex a, Vertex b) {
  return "(" + std::to_string(a) + "," + std::to_string(b) + ")";
}

}  // namespace

WeightedGraph::WeightedGraph(int vertex_slots, std::vector<Edge> edges)
    : alive_(static_cast<std::size_t>(std::max(vertex_slots, 0)), true), edges_(std::move(edges)) {
  build();
}

WeightedGraph::WeightedGraph(std::vector<bool> alive, std::vector<Edge> edges)
    : alive_(std::move(alive)), edges_(std::move(edges)) {
  build();
}

void WeightedGraph::build() {
  const int n = vertex_slots();
  for (auto& e : edges_) {
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n || !alive_[e.u] || !alive_[e.v])
      throw ParseError("edge " + edge_name(e.u, e.v) + " references an unknown vertex");
    if (e.u == e.v) throw ParseError("self-loop at vertex " + std::to_string(e.u));
    if (!(e.w > 0.0) || !std::isfinite(e.w))
      throw NonPositiveWeight("edge " + edge_name(e.u, e.v) + " has non-positive weight");
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges_.begin(), edges_.end(),
            [](const Edge& a, const Edge& b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });
  for (std::size_t i = 1; i < edges_.size(); ++i)
    if (edges_[i].u == edges_[i - 1].u && edges_[i].v == edges_[i - 1].v)
      throw ParseError("parallel edge " + edge_name(edges_[i].u, edges_[i].v));

  adjacency_.assign(static_cast<std::size_t>(n), {});
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    adjacency_[edges_[i].u].push_back({edges_[i].v, i});
    adjacency_[edges_[i].v].push_back({edges_[i].u, i});
  }
  for (auto& adj : adjacency_)
    std::sort(adj.begin(), adj.end(), [](const Incidence& a, const Incidence& b) { return a.to < b.to; });

  live_count_ = static_cast<int>(std::count(alive_.begin(), alive_.end(), true));
  if (live_count_ == 0) throw ParseError("graph has no vertices");
  if (!connected()) throw DisconnectedGraph("graph is not connected");
}

std::vector<Vertex> WeightedGraph::vertices() const {
  std::vector<Vertex> out;
  out.reserve(static_cast<std::size_t>(live_count_));
  for (int v = 0; v < vertex_slots(); ++v)
    if (alive_[v]) out.push_back(v);
  return out;
}

std::optional<std::size_t> WeightedGraph::find_edge(Vertex a, Vertex b) const {
  if (!alive(a) || !alive(b)) return std::nullopt;
  const auto& adj = adjacency_[a];
  auto it = std::lower_bound(adj.begin(), adj.end(), b,
                             [](const Incidence& inc, Vertex t) { return inc.to < t; });
  if (it == adj.end() || it->to != b) return std::nullopt;
  return it->edge;
}

double WeightedGraph::weight(Vertex a, Vertex b) const {
  auto e = find_edge(a, b);
  if (!e) throw std::out_of_range("no edge " + edge_name(a, b));
  return edges_[*e].w;
}

std::vector<double> WeightedGraph::weights() const {
  std::vector<double> w(edges_.size());
  for (std::size_t i = 0; i < edges_.size(); ++i) w[i] = edges_[i].w;
  return w;
}

double WeightedGraph::total_weight() const {
  double s = 0.0;
  for (const auto& e : edges_) s += e.w;
  return s;
}

double WeightedGraph::max_weight() const {
  double m = 0.0;
  for (const auto& e : edges_) m = std::max(m, e.w);
  return m;
}

WeightedGraph WeightedGraph::with_weights(std::span<const double> w) const {
  if (w.size() != edges_.size()) throw std::invalid_argument("weight vector size mismatch");
  WeightedGraph g = *this;
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (!(w[i] > 0.0) || !std::isfinite(w[i]))
      throw NonPositiveWeight("edge " + edge_name(edges_[i].u, edges_[i].v) + " has non-positive weight");
    g.edges_[i].w = w[i];
  }
  return g;
}

bool WeightedGraph::connected(std::optional<std::size_t> skip_edge) const {
  const int n = vertex_slots();
  Vertex start = -1;
  for (int v = 0; v < n && start < 0; ++v)
    if (alive_[v]) start = v;
  if (start < 0) return true;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<Vertex> stack{start};
  seen[start] = 1;
  int reached = 1;
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    for (const auto& inc : adjacency_[v]) {
      if (skip_edge && inc.edge == *skip_edge) continue;
      if (!seen[inc.to]) {
        seen[inc.to] = 1;
        ++reached;
        stack.push_back(inc.to);
      }
    }
  }
  return reached == live_count_;
}

// ---------------------------------------------------------------------------

DistanceMatrix::DistanceMatrix(int slots)
    : n_(slots), d_(static_cast<std::size_t>(slots) * static_cast<std::size_t>(slots), kInf) {}

std::vector<double> shortest_paths_from(const WeightedGraph& g, Vertex source) {
  std::vector<double> dist(static_cast<std::size_t>(g.vertex_slots()), kInf);
  using Item = std::pair<double, Vertex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[source] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (d > dist[v]) continue;
    for (const auto& inc : g.neighbors(v)) {
      double nd = d + g.edge(inc.edge).w;
      if (nd < dist[inc.to]) {
        dist[inc.to] = nd;
        heap.emplace(nd, inc.to);
      }
    }
  }
  return dist;
}

namespace {

void fill_row(const WeightedGraph& g, DistanceMatrix& dm, Vertex s) {
  auto dist = shortest_paths_from(g, s);
  std::copy(dist.begin(), dist.end(), dm.row(s).begin());
}

// Separate Dijkstra runs can disagree in the last bit; keep the matrix exactly symmetric.
void symmetrize(DistanceMatrix& dm, int n) {
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      const double m = std::min(dm(a, b), dm(b, a));
      dm.row(a)[b] = m;
      dm.row(b)[a] = m;
    }
}

}  // namespace

DistanceMatrix all_pairs_distances(const WeightedGraph& g) {
  const int n = g.vertex_slots();
  DistanceMatrix dm(n);
  // Small graphs dominate the flow loop; forking a team there costs more than the work.
#pragma omp parallel for schedule(dynamic) if (n >= 64)
  for (int s = 0; s < n; ++s)
    if (g.alive(s)) fill_row(g, dm, s);
  symmetrize(dm, n);
  return dm;
}

DistanceMatrix all_pairs_distances_serial(const WeightedGraph& g) {
  const int n = g.vertex_slots();
  DistanceMatrix dm(n);
  for (int s = 0; s < n; ++s)
    if (g.alive(s)) fill_row(g, dm, s);
  symmetrize(dm, n);
  return dm;
}

// ---------------------------------------------------------------------------

MergeMap::MergeMap(int slots) : parent_(static_cast<std::size_t>(slots)) {
  for (int v = 0; v < slots; ++v) parent_[v] = v;
}

Vertex MergeMap::representative(Vertex v) const {
  while (parent_[v] != v) v = parent_[v];
  return v;
}

void MergeMap::merge(Vertex survivor, Vertex absorbed) {
  Vertex root_s = representative(survivor);
  Vertex root_a = representative(absorbed);
  if (root_s == root_a) return;
  parent_[root_a] = root_s;
  // keep every chain one hop long
  for (auto& p : parent_) p = representative(p);
}

WeightedGraph delete_edge(const WeightedGraph& g, Vertex a, Vertex b) {
  auto idx = g.find_edge(a, b);
  if (!idx) throw std::out_of_range("no edge " + edge_name(a, b));
  if (!g.connected(*idx)) throw WouldDisconnect("deleting " + edge_name(a, b) + " disconnects the graph");
  std::vector<Edge> edges;
  edges.reserve(g.edge_count() - 1);
  for (std::size_t i = 0; i < g.edge_count(); ++i)
    if (i != *idx) edges.push_back(g.edge(i));
  std::vector<bool> alive(static_cast<std::size_t>(g.vertex_slots()));
  for (int v = 0; v < g.vertex_slots(); ++v) alive[v] = g.alive(v);
  return WeightedGraph(std::move(alive), std::move(edges));
}

Contraction contract_edge(const WeightedGraph& g, Vertex survivor, Vertex absorbed, MergeMap merges) {
  if (!g.find_edge(survivor, absorbed))
    throw std::out_of_range("no edge " + edge_name(survivor, absorbed));
  std::vector<Edge> edges;
  edges.reserve(g.edge_count());
  for (const auto& e : g.edges()) {
    Edge r = e;
    if (r.u == absorbed) r.u = survivor;
    if (r.v == absorbed) r.v = survivor;
    if (r.u == r.v) continue;
    if (r.u > r.v) std::swap(r.u, r.v);
    auto dup = std::find_if(edges.begin(), edges.end(),
                            [&](const Edge& x) { return x.u == r.u && x.v == r.v; });
    if (dup != edges.end())
      dup->w = std::min(dup->w, r.w);
    else
      edges.push_back(r);
  }
  std::vector<bool> alive(static_cast<std::size_t>(g.vertex_slots()));
  for (int v = 0; v < g.vertex_slots(); ++v) alive[v] = g.alive(v);
  alive[absorbed] = false;
  merges.merge(survivor, absorbed);
  return {WeightedGraph(std::move(alive), std::move(edges)), std::move(merges)};
}

// ---------------------------------------------------------------------------

WeightedGraph parse_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  int max_id = -1;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string su, sv, sw;
    if (!(ls >> su)) continue;
    std::string extra;
    if (!(ls >> sv >> sw) || (ls >> extra))
      throw ParseError("line " + std::to_string(lineno) + ": expected 'u v w'");
    Edge e;
    try {
      std::size_t pu = 0, pv = 0, pw = 0;
      long u = std::stol(su, &pu);
      long v = std::stol(sv, &pv);
      e.w = std::stod(sw, &pw);
      if (pu != su.size() || pv != sv.size() || pw != sw.size()) throw std::invalid_argument("trailing");
      if (u < 0 || v < 0 || u > std::numeric_limits<int>::max() / 2 || v > std::numeric_limits<int>::max() / 2)
        throw std::invalid_argument("range");
      e.u = static_cast<Vertex>(u);
      e.v = static_cast<Vertex>(v);
    } catch (const std::logic_error&) {
      throw ParseError("line " + std::to_string(lineno) + ": malformed triple '" + line + "'");
    }
    max_id = std::max({max_id, e.u, e.v});
    edges.push_back(e);
  }
  if (edges.empty()) throw ParseError("edge list is empty");
  return WeightedGraph(max_id + 1, std::move(edges));
}

WeightedGraph parse_edge_list(const std::string& text) {
  std::istringstream in(text);
  return parse_edge_list(in);
}

WeightedGraph parse_graph_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  try {
    int n = doc.at("vertices").get<int>();
    if (n <= 0) throw ParseError("'vertices' must be positive");
    std::vector<Edge> edges;
    for (const auto& item : doc.at("edges")) {
      Edge e;
      e.u = item.at("u").get<int>();
      e.v = item.at("v").get<int>();
      e.w = item.at("w").get<double>();
      edges.push_back(e);
    }
    if (doc.contains("alive")) {
      std::vector<bool> alive(static_cast<std::size_t>(n), false);
      for (const auto& v : doc.at("alive")) {
        int id = v.get<int>();
        if (id < 0 || id >= n) throw ParseError("'alive' lists unknown vertex " + std::to_string(id));
        alive[static_cast<std::size_t>(id)] = true;
      }
      return WeightedGraph(std::move(alive), std::move(edges));
    }
    return WeightedGraph(n, std::move(edges));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed graph document: ") + e.what());
  }
}

WeightedGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return parse_graph_json(text);
  return parse_edge_list(text);
}

std::string graph_to_json(const WeightedGraph& g) {
  nlohmann::json doc;
  doc["vertices"] = g.vertex_slots();
  if (g.vertex_count() != g.vertex_slots()) doc["alive"] = g.vertices();  // surgery left tombstones
  doc["edges"] = nlohmann::json::array();
  for (const auto& e : g.edges()) doc["edges"].push_back({{"u", e.u}, {"v", e.v}, {"w", e.w}});
  return doc.dump();
}

}  // namespace ricci

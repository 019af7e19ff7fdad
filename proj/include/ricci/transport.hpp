#pragma once

#include <cstddef>
#include <vector>

#include "ricci/graph.hpp"

namespace ricci {

struct Mass {
  Vertex vertex = 0;
  double mass = 0.0;
};

// Balanced transportation instance between two finitely supported measures.
// Carries the metric restricted to the joint support: the primal only reads
// source-sink costs, the Lipschitz dual needs every pair.
class TransportProblem {
 public:
  TransportProblem() = default;
  // `metric` is row-major over `support` (sorted, unique, covering both sides).
  TransportProblem(std::vector<Mass> sources, std::vector<Mass> sinks, std::vector<Vertex> support,
                   std::vector<double> metric);

  static TransportProblem from_distances(std::vector<Mass> sources, std::vector<Mass> sinks,
                                         const DistanceMatrix& dm);

  const std::vector<Mass>& sources() const { return sources_; }
  const std::vector<Mass>& sinks() const { return sinks_; }
  const std::vector<Vertex>& support() const { return support_; }

  std::size_t index_of(Vertex v) const;
  double distance(Vertex a, Vertex b) const;
  // cost between sources()[i] and sinks()[j]
  double cost(std::size_t i, std::size_t j) const { return cost_[i * sinks_.size() + j]; }

 private:
  std::vector<Mass> sources_;
  std::vector<Mass> sinks_;
  std::vector<Vertex> support_;
  std::vector<double> metric_;
  std::vector<double> cost_;
};

struct TransportPlan {
  // coupling[i][j] = A(sources[i], sinks[j])
  std::vector<std::vector<double>> coupling;
  double cost = 0.0;
};

// Throws Unbalanced when a mass is negative or a side does not sum to 1.
void check_balanced(const TransportProblem& p);

// Exact optimal coupling by successive shortest augmenting paths on the
// bipartite support graph.
TransportPlan min_cost_transport(const TransportProblem& p);

// Kantorovich dual: sup over 1-Lipschitz f on the joint support of
// sum f (mu1 - mu2), solved with solve_lp.
double w1_dual(const TransportProblem& p);

}  // namespace ricci

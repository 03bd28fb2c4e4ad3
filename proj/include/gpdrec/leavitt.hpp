#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gpdrec/algebra.hpp"
#include "gpdrec/groupoid.hpp"
#include "gpdrec/ring.hpp"

namespace gpdrec {

class DirectedGraph {
 public:
  using Vertex = std::uint32_t;
  using Edge = std::uint32_t;

  struct EdgeSpec {
    std::string name;
    Vertex src;
    Vertex dst;
  };

  // Validates endpoints and name uniqueness.
  static DirectedGraph from_parts(std::vector<std::string> vertices, std::vector<EdgeSpec> edges);

  std::size_t vertex_count() const noexcept { return vertices_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::string const& vertex_name(Vertex v) const { return vertices_[v]; }
  EdgeSpec const& edge(Edge e) const { return edges_[e]; }
  Vertex src(Edge e) const { return edges_[e].src; }
  Vertex dst(Edge e) const { return edges_[e].dst; }
  std::vector<Edge> const& out_edges(Vertex v) const { return out_[v]; }
  bool is_sink(Vertex v) const { return out_[v].empty(); }
  std::vector<std::string> const& vertices() const noexcept { return vertices_; }
  std::vector<EdgeSpec> const& edges() const noexcept { return edges_; }

 private:
  std::vector<std::string> vertices_;
  std::vector<EdgeSpec> edges_;
  std::vector<std::vector<Edge>> out_;
};

// A finite path: its initial vertex and its edges (r(e_i) = s(e_i+1)).
// The empty path at v has vertex v and no edges.
struct Path {
  DirectedGraph::Vertex vertex = 0;
  std::vector<DirectedGraph::Edge> edges;

  friend auto operator<=>(Path const&, Path const&) = default;
};

DirectedGraph::Vertex terminal(DirectedGraph const& g, Path const& p);
bool is_path(DirectedGraph const& g, Path const& p);
std::string format_path(DirectedGraph const& g, Path const& p);

struct Cycle {
  std::vector<DirectedGraph::Edge> edges;
  bool has_exit = false;
};

constexpr std::size_t kMaxCycles = 10'000;

// Simple directed cycles, each listed once starting from its least vertex.
std::vector<Cycle> simple_cycles(DirectedGraph const& g);
bool is_acyclic(DirectedGraph const& g);
// Every cycle has an exit (a vertex on it with out-degree at least 2).
bool condition_l(DirectedGraph const& g);

// Finite paths ending at sinks, grouped by sink, then by length and edges.
// InvalidInput for a graph with a cycle.
std::vector<Path> boundary_paths(DirectedGraph const& g);

struct PathGroupoid {
  FiniteGroupoid groupoid;  // objects follow boundary_paths order
  Cocycle cocycle;          // (eta, k, xi) -> k in Z
  std::vector<Path> paths;
  // arrow index of (eta, xi) by object indices, or kNone
  std::vector<std::vector<FiniteGroupoid::Arrow>> arrow_of;
};

PathGroupoid path_groupoid(DirectedGraph const& g);

// Z(alpha, beta) = {(alpha gamma, |alpha| - |beta|, beta gamma)}; checked to
// be a homogeneous local bisection.  InvalidInput when r(alpha) != r(beta).
std::vector<FiniteGroupoid::Arrow> cylinder_bisection(DirectedGraph const& g, PathGroupoid const& pg,
                                                      Path const& alpha, Path const& beta);

struct RelationCheck {
  std::string relation;
  std::string instance;
  bool passed = true;
};

struct CkReport {
  std::size_t checked = 0;
  std::vector<RelationCheck> failures;
  bool ok() const { return failures.empty(); }
};

// Images v -> chi Z(eps_v, eps_v), e -> chi Z(e, eps_r(e)), e* -> chi
// Z(eps_r(e), e) in RG_E; checks the four relation families, vertex
// orthogonality and the grades of the generators by exact convolution.
CkReport verify_ck_relations(DirectedGraph const& g, Ring const& r);

struct HypothesisReport {
  bool condition_l = false;
  bool indecomposable = false;
  bool reduced = false;
  bool applies = false;
  std::vector<Cycle> cycles;
  // Vertices from which a cycle can be reached: boundary paths through them
  // may be eventually periodic (infinite cyclic isotropy).
  std::vector<DirectedGraph::Vertex> periodic_sources;
};

HypothesisReport leavitt_hypothesis_check(DirectedGraph const& g, Ring const& r);

}  // namespace gpdrec

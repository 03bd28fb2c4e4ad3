#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "gpdrec/groupoid.hpp"
#include "gpdrec/io.hpp"
#include "gpdrec/ring.hpp"

namespace testing {

using gpdrec::Vec;

inline std::string corpus_path(std::string const& name) {
  return std::string(GPDREC_CORPUS_DIR) + "/" + name;
}

inline std::string read_file(std::string const& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline gpdrec::io::InstanceSpec load(std::string const& name) {
  return gpdrec::io::parse_instance_text(read_file(corpus_path(name)), name);
}

inline gpdrec::io::GradedGroupoid load_groupoid(std::string const& name) { return *load(name).groupoid; }

inline gpdrec::DirectedGraph load_graph(std::string const& name) { return *load(name).graph; }

// Groupoid instances of the corpus, in a fixed order.
inline std::vector<std::string> const& groupoid_files() {
  static std::vector<std::string> const files = {
      "pair2.json",        "pair3.json",          "unit3.json",         "c2.json",
      "c3.json",           "c2_graded.json",      "c2_mod6.json",       "bundle_c2_c2.json",
      "bundle_c2_triv.json", "pair2_union_c2.json", "pair2_z.json"};
  return files;
}

inline std::vector<std::string> const& acyclic_graph_files() {
  static std::vector<std::string> const files = {"graph_a2.json", "graph_parallel.json", "graph_converge.json",
                                                 "graph_chain.json"};
  return files;
}

// All vectors of length n over Z/m, in lexicographic order.
inline void for_each_vector(std::size_t n, std::uint32_t m, std::function<void(Vec const&)> const& f) {
  Vec v(n, 0);
  while (true) {
    f(v);
    std::size_t i = 0;
    while (i < n && ++v[i] == m) v[i++] = 0;
    if (i == n) return;
  }
}

// Convolution straight from the formula
//   (f * h)(c) = sum over arrows b with dom(b) = dom(c) of f(c b^-1) h(b),
// with ring arithmetic done on residues modulo n (Z/n only).
inline Vec oracle_convolve(gpdrec::FiniteGroupoid const& g, std::uint32_t n, Vec const& f, Vec const& h) {
  Vec out(g.arrow_count(), 0);
  for (std::uint32_t c = 0; c < g.arrow_count(); ++c) {
    std::uint64_t acc = 0;
    for (std::uint32_t b = 0; b < g.arrow_count(); ++b) {
      if (g.dom(b) != g.dom(c)) continue;
      std::uint32_t a = g.compose(c, g.inv(b));
      acc += std::uint64_t(f[a]) * h[b];
    }
    out[c] = std::uint32_t(acc % n);
  }
  return out;
}

inline bool supported_on_units(gpdrec::FiniteGroupoid const& g, Vec const& f) {
  for (std::uint32_t a = 0; a < g.arrow_count(); ++a)
    if (f[a] != 0 && !g.is_unit(a)) return false;
  return true;
}

inline bool is_bisection_oracle(gpdrec::FiniteGroupoid const& g, std::vector<std::uint32_t> const& arrows) {
  std::vector<int> d(g.object_count(), 0), r(g.object_count(), 0);
  for (auto a : arrows)
    if (d[g.dom(a)]++ || r[g.cod(a)]++) return false;
  return true;
}

// Every local bisection, by filtering all subsets of the arrow set.
inline std::vector<std::vector<std::uint32_t>> oracle_bisections(gpdrec::FiniteGroupoid const& g) {
  std::vector<std::vector<std::uint32_t>> out;
  std::size_t n = g.arrow_count();
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
    std::vector<std::uint32_t> s;
    for (std::uint32_t a = 0; a < n; ++a)
      if (mask >> a & 1) s.push_back(a);
    if (is_bisection_oracle(g, s)) out.push_back(s);
  }
  return out;
}

}  // namespace testing

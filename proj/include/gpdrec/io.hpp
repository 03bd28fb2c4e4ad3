#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "gpdrec/algebra.hpp"
#include "gpdrec/germ.hpp"
#include "gpdrec/group.hpp"
#include "gpdrec/groupoid.hpp"
#include "gpdrec/inverse_semigroup.hpp"
#include "gpdrec/leavitt.hpp"
#include "gpdrec/ring.hpp"

namespace gpdrec::io {

using Json = nlohmann::ordered_json;

// Errors name their location as a JSON pointer, e.g. "/groupoid/arrows/2/dom".
Ring ring_from_json(Json const& j, std::string const& at = "/ring");
Json ring_to_json(Ring const& r);
// "mod6", "prod2x3", or inline JSON.
Ring ring_from_text(std::string const& text);

// {"cyclic": n}, {"table": [[...]], "names": [...]}, {"product": [g, h]}.
FiniteGroup group_from_json(Json const& j, std::string const& at = "/group");
Json group_to_json(FiniteGroup const& g);
// "trivial", "cyclic4", "cyclic2xcyclic2", or inline JSON.
FiniteGroup group_from_text(std::string const& text);

// "trivial", "integers", or a group.
GradingGroup grading_group_from_json(Json const& j, std::string const& at);
Json grading_group_to_json(GradingGroup const& g);

// {"vertices": [...], "edges": [{"name", "src", "dst"}]} with endpoint names.
DirectedGraph graph_from_json(Json const& j, std::string const& at = "/graph");
Json graph_to_json(DirectedGraph const& g);

struct GradedGroupoid {
  FiniteGroupoid groupoid;
  Cocycle cocycle;
};

// Constructor forms {"pair": n}, {"unit": n}, {"group": G}, {"bundle": [G...]},
// {"leavitt": graph}, {"union": [a, b]}, {"product": [a, b]}, or the explicit
// form {"objects", "arrows": [{"name", "dom", "cod", "grade"?}], "compose"}
// where compose[a][b] is the index of a after b or null.  `grading`, when
// given, is {"group": ..., "grades": [...]} and overrides the implied one.
GradedGroupoid groupoid_from_json(Json const& j, Json const* grading = nullptr,
                                  std::string const& at = "/groupoid");
// {"groupoid": explicit form with inline grades, "grading": {"group"}}.
Json groupoid_to_json(FiniteGroupoid const& g, Cocycle const& c);

// {"elements", "table", "zero"?, "grading"?: {"group", "grades"}}.  Table
// entries are element indices; grades of the zero are written as null.
InvSemigroup semigroup_from_json(Json const& j, std::string const& at = "/semigroup");
Json semigroup_to_json(InvSemigroup const& s);

// {"points": [...], "map": {"<element>": [target or null per point]}}.
Action action_from_json(InvSemigroup const& s, Json const& j, std::string const& at = "/action");

// {"ring", "dim", "labels", "grading": {"group", "grades"}, "diagonal",
// "products": [[i, j, k, c], ...]} with nonzero triples sorted by (i, j, k).
// Coefficients are ring element indices.  Validated on read.
AlgebraPresentation presentation_from_json(Json const& j, std::string const& at = "");
Json presentation_to_json(AlgebraPresentation const& p);

// Canonical text: two-space indentation and a trailing newline.
std::string dump(Json const& j);
// InvalidInput on a syntax error, with the byte offset.
Json parse_text(std::string const& text, std::string const& origin);

struct InstanceSpec {
  Json source;
  std::optional<Ring> ring;
  std::optional<FiniteGroup> group;
  std::optional<GradedGroupoid> groupoid;
  std::optional<DirectedGraph> graph;
  std::optional<InvSemigroup> semigroup;
  std::optional<Json> action;  // resolved against the semigroup on use
  std::optional<AlgebraPresentation> presentation;
  std::optional<std::size_t> cap;
  std::optional<std::uint64_t> seed;
};

// Accepts an instance bundle, a bare presentation (has "products"), a bare
// graph (has "vertices") or a bare semigroup (has "table").  Every violation
// found is listed in the InvalidInput message, one per line.
InstanceSpec parse_instance(Json const& j);
InstanceSpec parse_instance_text(std::string const& text, std::string const& origin = "<input>");

}  // namespace gpdrec::io

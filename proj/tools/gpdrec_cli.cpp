#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gpdrec/gpdrec.h"

namespace {

struct SessionDeleter {
  void operator()(gpdrec_session* s) const { gpdrec_session_free(s); }
};
using Session = std::unique_ptr<gpdrec_session, SessionDeleter>;

std::optional<std::string> read_file(std::string const& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool write_file(std::string const& path, char const* text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  return bool(out);
}

struct Args {
  std::vector<std::string> files;
  std::string ring, group, engine, emit, out;
  std::optional<std::uint64_t> seeds;
  bool build_groupoid = false, verify_ck = false, hypothesis = false;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gpdrec: graded groupoids from diagonal-preserving algebra data"};
  app.set_version_flag("--version", std::string(gpdrec_version()));
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::optional<std::uint64_t> cap, seed;
  std::string format = "text";
  app.add_option("--cap", cap, "Candidate cap per normalizer fiber (default 10000)");
  app.add_option("--seed", seed, "Seed for scrambling (default 1)");
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"text", "machine"}));

  Args a;
  auto files = [&](CLI::App* sub, char const* what, bool required = true) {
    auto* opt = sub->add_option("files", a.files, what);
    if (required) opt->required();
  };
  auto ring = [&](CLI::App* sub) { sub->add_option("--ring", a.ring, "Coefficient ring, e.g. mod4 or prod2x3"); };

  auto* check_ring = app.add_subcommand("check-ring", "Units, idempotents and nilpotents of a ring");
  ring(check_ring);
  files(check_ring, "Optional instance file", false);

  auto* units = app.add_subcommand("units", "Exhaustive unit census of R[G]");
  ring(units);
  units->add_option("--group", a.group, "Group, e.g. cyclic2 or cyclic2xcyclic2");
  files(units, "Optional instance file", false);

  auto* info = app.add_subcommand("groupoid-info", "Orbits, isotropy, effectiveness and the diagonal centralizer");
  ring(info);
  files(info, "Instance file");

  auto* bis = app.add_subcommand("bisections", "Homogeneous local bisections and the binary meet check");
  files(bis, "Instance file");

  auto* norm = app.add_subcommand("normalizer", "Graded normalizer of the diagonal");
  ring(norm);
  norm->add_option("--engine", a.engine, "brute, generated or both")
      ->check(CLI::IsMember({"brute", "generated", "both"}));
  files(norm, "Presentation or instance file");

  auto* lbh = app.add_subcommand("lbh", "Local bisection hypothesis");
  ring(lbh);
  files(lbh, "Presentation or instance file");

  auto* scr = app.add_subcommand("scramble", "Seeded diagonal-preserving scramble of a presentation");
  ring(scr);
  scr->add_option("--out", a.out, "Write the scrambled presentation here");
  files(scr, "Presentation or instance file");

  auto* rec = app.add_subcommand("reconstruct", "Recover the graded groupoid from a presentation");
  ring(rec);
  rec->add_option("--emit", a.emit, "Write the reconstructed groupoid here");
  files(rec, "Presentation or instance file");

  auto* rt = app.add_subcommand("roundtrip", "Scramble, reconstruct and compare over several seeds");
  ring(rt);
  rt->add_option("--seeds", a.seeds, "Number of seeds (default 5)");
  files(rt, "Instance file, optionally followed by a ring");

  auto* germ = app.add_subcommand("germ", "Spectrum, action and germ groupoid of an inverse semigroup");
  germ->add_option("--emit", a.emit, "Write the germ groupoid here");
  files(germ, "Semigroup file (or instance), optional action file");

  auto* lv = app.add_subcommand("leavitt", "Path groupoid, Cuntz-Krieger relations and hypotheses for a graph");
  ring(lv);
  lv->add_flag("--build-groupoid", a.build_groupoid, "Build the path groupoid");
  lv->add_flag("--verify-ck", a.verify_ck, "Verify the Cuntz-Krieger relations");
  lv->add_flag("--hypothesis", a.hypothesis, "Evaluate condition (L), indecomposability and reducedness");
  files(lv, "Graph or instance file");

  auto* vw = app.add_subcommand("verify-witness", "Re-validate the witness of a failing report");
  files(vw, "Report (machine format) or witness file");

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  auto* sub = app.get_subcommands().front();
  std::string command = sub->get_name();
  if (command == "roundtrip" && a.files.size() == 2 && a.ring.empty()) {
    a.ring = a.files.back();
    a.files.pop_back();
  }

  Session s(gpdrec_session_new());
  if (!s) return 3;
  auto set = [&](char const* key, std::string const& value) {
    if (gpdrec_set_option(s.get(), key, value.c_str()) != GPDREC_OK) {
      std::cerr << "error: " << gpdrec_last_error(s.get()) << "\n";
      std::exit(2);
    }
  };
  set("format", format);
  if (cap) set("cap", std::to_string(*cap));
  if (seed) set("seed", std::to_string(*seed));
  if (a.seeds) set("seeds", std::to_string(*a.seeds));
  if (!a.ring.empty()) set("ring", a.ring);
  if (!a.group.empty()) set("group", a.group);
  if (!a.engine.empty()) set("engine", a.engine);
  if (a.build_groupoid) set("build-groupoid", "1");
  if (a.verify_ck) set("verify-ck", "1");
  if (a.hypothesis) set("hypothesis", "1");

  for (auto const& f : a.files) {
    auto text = read_file(f);
    if (!text) {
      std::cerr << "error: cannot read " << f << "\n";
      return 2;
    }
    if (gpdrec_add_input(s.get(), text->c_str()) != GPDREC_OK) {
      std::cerr << "error: " << f << ": " << gpdrec_last_error(s.get()) << "\n";
      return 2;
    }
  }

  int code = gpdrec_run(s.get(), command.c_str());
  std::cout << gpdrec_report(s.get());

  auto emit = [&](std::string const& path, char const* name) {
    if (path.empty()) return;
    char const* text = gpdrec_artifact(s.get(), name);
    if (!text) return;
    if (!write_file(path, text)) {
      std::cerr << "error: cannot write " << path << "\n";
      code = 2;
      return;
    }
    std::cerr << "wrote " << name << " to " << path << "\n";
  };
  emit(a.out, "presentation");
  emit(a.emit, "groupoid");
  return code;
}

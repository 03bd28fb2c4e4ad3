#include <string>

#include "doctest.h"
#include "gpdrec/pipeline.hpp"
#include "support.hpp"

using namespace gpdrec;
using io::Json;

namespace {

Request request(std::string command, std::vector<std::string> const& files, Json options = Json::object()) {
  Request r;
  r.command = std::move(command);
  for (auto const& f : files) r.inputs.push_back(io::parse_text(testing::read_file(testing::corpus_path(f)), f));
  r.options = std::move(options);
  return r;
}

Report verify(Report const& rep) {
  Request v;
  v.command = "verify-witness";
  v.inputs.push_back(rep.to_json());
  return run_command(v);
}

}  // namespace

TEST_CASE("roundtrip") {
  auto rep = run_command(request("roundtrip", {"pair2.json"}, {{"ring", "mod2"}, {"seeds", 5}}));
  CHECK(rep.exit_code == ExitCode::ok);
  CHECK(rep.result["runs"].size() == 5);
  CHECK(rep.result["total"] == 5);
  CHECK(rep.result["passed"] == 5);
  auto bad = run_command(request("roundtrip", {"c2.json"}, {{"ring", "mod4"}}));
  CHECK(bad.exit_code == ExitCode::property_failed);
  REQUIRE(bad.witness);
  CHECK(verify(bad).exit_code == ExitCode::ok);
}

TEST_CASE("lbh") {
  auto ok = run_command(request("lbh", {"pair2.json"}, {{"ring", "mod4"}}));
  CHECK(ok.exit_code == ExitCode::ok);
  CHECK(ok.result["holds"] == true);
  CHECK(ok.result["agree"] == true);
  auto rep = run_command(request("lbh", {"c2.json"}, {{"ring", "mod4"}}));
  REQUIRE(rep.exit_code == ExitCode::property_failed);
  REQUIRE(rep.witness);
  CHECK((*rep.witness)["kind"] == "lbh");
  CHECK((*rep.witness)["text"] == "1 + 2g");
  auto v = verify(rep);
  CHECK(v.exit_code == ExitCode::ok);
  CHECK(v.result["confirmed"] == true);

  // Witness that is a bisection: not a counterexample.
  auto tampered = rep.to_json();
  tampered["witness"]["m"] = Json::array({1, 0});
  tampered["witness"]["m_prime"] = Json::array({1, 0});
  Request t;
  t.command = "verify-witness";
  t.inputs.push_back(tampered);
  CHECK(run_command(t).exit_code == ExitCode::property_failed);
  tampered["witness"]["m"] = Json::array({1});
  t.inputs[0] = tampered;
  CHECK(run_command(t).exit_code == ExitCode::invalid_input);
}

TEST_CASE("units") {
  Request r;
  r.command = "units";
  r.options = {{"ring", "mod4"}, {"group", "cyclic2"}};
  auto rep = run_command(r);
  CHECK(rep.exit_code == ExitCode::ok);
  CHECK(rep.result["units"] == 8);
  CHECK(rep.result["trivial_units"] == 4);
  CHECK(rep.result["nontrivial_units"] == 4);
  r.options["ring"] = "mod3";
  rep = run_command(r);
  CHECK(rep.result["units"] == 4);
  CHECK(rep.result["nontrivial_units"] == 0);
}

TEST_CASE("other commands") {
  auto info = run_command(request("groupoid-info", {"c2.json"}, {{"ring", "mod4"}}));
  CHECK(info.exit_code == ExitCode::ok);
  CHECK(info.result["diagonal_maximal_commutative"] == false);
  auto pinfo = run_command(request("groupoid-info", {"pair2.json"}, {{"ring", "mod4"}}));
  CHECK(pinfo.result["diagonal_maximal_commutative"] == true);

  auto bis = run_command(request("bisections", {"pair2.json"}));
  CHECK(bis.exit_code == ExitCode::ok);
  CHECK(bis.result["elements"] == 7);
  CHECK(bis.result["binary_meets"] == true);

  auto norm = run_command(request("normalizer", {"pair2.json"}, {{"ring", "mod2"}, {"engine", "both"}}));
  CHECK(norm.exit_code == ExitCode::ok);
  CHECK(norm.result["n_brute"] == 7);
  CHECK(norm.result["engines_agree"] == true);
  CHECK(norm.result["classes"] == 7);

  auto rec = run_command(request("reconstruct", {"pair2.json"}, {{"ring", "mod3"}}));
  CHECK(rec.exit_code == ExitCode::ok);
  CHECK(rec.result["isomorphic_to_input"] == true);
  CHECK(rec.artifacts.count("groupoid"));

  auto germ = run_command(request("germ", {"i2.json", "i2_action.json"}));
  CHECK(germ.exit_code == ExitCode::ok);
  CHECK(germ.artifacts.count("groupoid"));

  auto lv = run_command(request("leavitt", {"graph_a2.json"},
                                {{"ring", "mod2"}, {"build-groupoid", true}, {"verify-ck", true}, {"hypothesis", true}}));
  CHECK(lv.exit_code == ExitCode::ok);
  CHECK(lv.result["acyclic"] == true);

  auto cr = run_command(request("check-ring", {}, {{"ring", "mod12"}}));
  CHECK(cr.result["units"] == 4);
  CHECK(cr.result["idempotents"].size() == 4);
  CHECK(cr.result["nilpotents"].size() == 2);
  CHECK(cr.result["indecomposable"] == false);
}

TEST_CASE("scramble then reconstruct") {
  auto scr = run_command(request("scramble", {"pair2.json"}, {{"ring", "mod4"}, {"seed", 7}}));
  REQUIRE(scr.exit_code == ExitCode::ok);
  CHECK(scr.result["isomorphism_verified"] == true);
  REQUIRE(scr.artifacts.count("presentation"));
  Request rec;
  rec.command = "reconstruct";
  rec.inputs.push_back(io::parse_text(scr.artifacts["presentation"], "scrambled"));
  auto rep = run_command(rec);
  CHECK(rep.exit_code == ExitCode::ok);
  auto gg = testing::load_groupoid("pair2.json");
  auto back = io::parse_instance(io::parse_text(rep.artifacts["groupoid"], "g")).groupoid;
  REQUIRE(back);
  CHECK(graded_iso_search(back->groupoid, back->cocycle, gg.groupoid, gg.cocycle));
}

TEST_CASE("error exit codes") {
  CHECK(run_command(request("frobnicate", {"pair2.json"})).exit_code == ExitCode::invalid_input);
  CHECK(run_command(request("lbh", {"pair2.json"}, {{"ring", "mod4"}, {"colour", 1}})).exit_code ==
        ExitCode::invalid_input);
  CHECK(run_command(request("lbh", {"pair2.json"}, {{"ring", "mod1"}})).exit_code == ExitCode::invalid_input);
  CHECK(run_command(request("lbh", {})).exit_code == ExitCode::invalid_input);
  Request bad;
  bad.command = "lbh";
  bad.inputs.push_back(Json::parse(R"({"ring": {"mod": 2}, "groupoid": {"pair": 0}})"));
  auto rep = run_command(bad);
  CHECK(rep.exit_code == ExitCode::invalid_input);
  CHECK(rep.error->find("/groupoid") != std::string::npos);
  auto cap = run_command(request("normalizer", {"pair3.json"}, {{"ring", "mod4"}, {"engine", "brute"}}));
  CHECK(cap.exit_code == ExitCode::capacity);
  auto mod6 = run_command(request("roundtrip", {"c2_mod6.json"}));
  CHECK(mod6.exit_code == ExitCode::invalid_input);
}

TEST_CASE("reports are deterministic") {
  auto req = request("normalizer", {"pair2_union_c2.json"}, {{"ring", "mod3"}});
  auto a = run_command(req), b = run_command(req);
  CHECK(a.render(true) == b.render(true));
  CHECK(a.render(false) == b.render(false));
  auto machine = req;
  machine.options["format"] = "machine";
  CHECK(run_command(machine).digest == a.digest);
  auto other = req;
  other.options["ring"] = "mod2";
  CHECK(run_command(other).digest != a.digest);
  auto j = Json::parse(a.render(true));
  CHECK(j["command"] == "normalizer");
  CHECK(j["exit_code"] == 0);
  CHECK(j["digest"] == a.digest);
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("every failing report carries a confirmable witness") {
  int failures = 0;
  for (auto const& f : testing::groupoid_files()) {
    for (auto ring : {"mod2", "mod3", "mod4"}) {
      for (auto cmd : {"lbh", "roundtrip", "reconstruct"}) {
        auto rep = run_command(request(cmd, {f}, {{"ring", ring}, {"seeds", 2}}));
        if (rep.exit_code != ExitCode::property_failed) continue;
        ++failures;
        CAPTURE(f);
        CAPTURE(ring);
        CAPTURE(cmd);
        REQUIRE(rep.witness);
        CHECK(verify(rep).exit_code == ExitCode::ok);
      }
    }
  }
  CHECK(failures > 0);
}

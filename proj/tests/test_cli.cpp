#include <doctest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lcc/cli.hpp"
#include "lcc/generators.hpp"
#include "lcc/io.hpp"

using namespace lcc;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

// Scratch directory removed at the end of each test case.
struct Scratch {
  fs::path dir;
  Scratch() {
    static int counter = 0;
    dir = fs::temp_directory_path() / ("lcc_cli_test_" + std::to_string(++counter));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  [[nodiscard]] std::string file(const std::string& name) const { return (dir / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("generate and verify") {
  Scratch s;
  const std::string inst = s.file("h.lcc"), fam = s.file("h.fam");
  REQUIRE(run({"gen", "--kind", "hadamard", "--k", "4", "--out", inst, "--family-out", fam}).code == kExitOk);
  const Run v = run({"verify", inst});
  REQUIRE(v.code == kExitOk);
  const auto j = nlohmann::json::parse(v.out);
  CHECK(j["command"] == "verify");
  CHECK(j["format_version"] == 1);
  CHECK(j["verification"]["valid"] == true);
  CHECK(read_instance_file(inst).size() == 15);
  CHECK(read_family_file(fam).sets.size() == 35);

  // Generation without --out writes the instance to stdout.
  const Run g = run({"gen", "--kind", "low-dim", "--n", "30", "--d", "4", "--d-base", "3", "--delta", "0.2"});
  REQUIRE(g.code == kExitOk);
  std::istringstream in(g.out);
  CHECK(read_instance(in).size() == 30);
}

TEST_CASE("precondition failures exit with code 2") {
  Scratch s;
  const std::string h = s.file("h.lcc");
  REQUIRE(run({"gen", "--kind", "hadamard", "--k", "3", "--out", h}).code == kExitOk);
  CHECK(run({"frobnicate"}).code == kExitPrecondition);
  CHECK(run({"gen", "--kind", "nope"}).code == kExitPrecondition);
  CHECK(run({"gen", "--kind", "hadamard", "--k", "1"}).code == kExitPrecondition);
  CHECK(run({"verify", s.file("missing.lcc")}).code == kExitPrecondition);
  CHECK(run({"restrict", h}).code == kExitPrecondition);
  CHECK(run({"certify", h}).code == kExitPrecondition);
  CHECK(run({"cluster", h}).code == kExitPrecondition);
  CHECK(run({"gen", "--kind", "low-dim", "--family-out", s.file("f")}).code == kExitPrecondition);
  CHECK(run({"verify", h, "--format", "xml"}).code == kExitPrecondition);

  std::ofstream(s.file("bad.lcc")) << "LCCv1\nfield R\nn 2 d x\n";
  const Run bad = run({"verify", s.file("bad.lcc")});
  CHECK(bad.code == kExitPrecondition);
  CHECK(bad.err.find("line") != std::string::npos);

  const std::string r = s.file("r.lcc");
  REQUIRE(run({"gen", "--kind", "low-dim", "--n", "30", "--d", "3", "--out", r}).code == kExitOk);
  CHECK(run({"certify", r, "--lambda", "0.3"}).code == kExitPrecondition);
}

TEST_CASE("a failed recomputed check exits with code 3") {
  // Planted instance whose vectors are replaced by unrelated generic ones: the
  // triples no longer decode, so restriction edges fail certification. One
  // round keeps span(U) a proper subspace of R^8.
  Scratch s;
  Rng rng = make_rng(81);
  PlantedInstance p = gen_planted_clusters(200, 8, 4, 0.1, 0.05, rng);
  Eigen::MatrixXd rows(200, 8);
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    for (Eigen::Index j = 0; j < rows.cols(); ++j) rows(i, j) = normal01(rng);
    rows.row(i).normalize();
  }
  p.instance.vectors = VectorList::from_eigen(rows);
  write_instance_file(s.file("broken.lcc"), p.instance);
  write_family_file(s.file("broken.fam"), p.truth);
  const Run v = run({"verify", s.file("broken.lcc")});
  REQUIRE(v.code == kExitOk);
  CHECK(nlohmann::json::parse(v.out)["verification"]["valid"] == false);
  const Run r = run({"restrict", s.file("broken.lcc"), "--family", s.file("broken.fam"), "--rounds", "1",
                     "--restarts", "16"});
  CHECK(r.code == kExitConsistency);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("reports are byte-identical across runs") {
  Scratch s;
  const std::string p = s.file("p.lcc"), f = s.file("p.fam");
  REQUIRE(run({"gen", "--kind", "planted", "--n", "120", "--d", "6", "--m", "3", "--delta", "0.1", "--out", p,
               "--family-out", f})
              .code == kExitOk);
  const std::string first = slurp(p);
  REQUIRE(run({"gen", "--kind", "planted", "--n", "120", "--d", "6", "--m", "3", "--delta", "0.1", "--out", p})
              .code == kExitOk);
  CHECK(slurp(p) == first);

  const std::vector<std::vector<std::string>> commands = {
      {"verify", p},
      {"spread", p},
      {"barthe", p},
      {"reduce", p, "--mode", "both"},
      {"cluster", p, "--corr-cut", "0.5"},
      {"restrict", p, "--family", f, "--rounds", "8", "--restarts", "2"},
      {"verify", p, "--format", "text"},
  };
  for (const auto& c : commands) {
    const Run a = run(c), b = run(c);
    INFO(c[0], ": ", a.err);
    CHECK(a.code == kExitOk);
    CHECK(a.out == b.out);
    CHECK_FALSE(a.out.empty());
  }
  // A different seed changes randomized reports.
  const Run s1 = run({"cluster", p, "--corr-cut", "0.5", "--seed", "1"});
  const Run s2 = run({"cluster", p, "--corr-cut", "0.5", "--seed", "2"});
  CHECK(s1.out != s2.out);

  const std::string out = s.file("report.json");
  REQUIRE(run({"verify", p, "--out", out}).code == kExitOk);
  CHECK(slurp(out) == run({"verify", p}).out);
}

TEST_CASE("text rendering flattens nested keys") {
  Json j;
  j["a"] = 1;
  j["b"]["c"] = "x";
  j["b"]["d"] = Json::array({1, 2});
  const std::string t = render_text(j);
  CHECK(t.find("a: 1") != std::string::npos);
  CHECK(t.find("b.c: x") != std::string::npos);
}

TEST_CASE("certify reports the dimension bound") {
  Scratch s;
  const std::string r = s.file("r.lcc");
  REQUIRE(run({"gen", "--kind", "low-dim", "--n", "60", "--d", "3", "--d-base", "3", "--delta", "0.3", "--out", r})
              .code == kExitOk);
  const Run c = run({"certify", r, "--corr-cut", "0.5"});
  REQUIRE(c.code == kExitOk);
  const auto j = nlohmann::json::parse(c.out);
  CHECK(j["result"]["complete"] == true);
  CHECK(j["result"]["d_measured"] == 3);
  CHECK(j["result"]["d_measured"].get<int>() <= j["result"]["bound_sum"].get<int>());
}

#include "doctest.h"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

using json = nlohmann::json;
using doctest::Approx;

namespace {

struct Run {
  int code = -1;
  std::string out;

  json doc() const { return json::parse(out); }
};

std::string data(const std::string& name) { return std::string(NORMKIT_TEST_DATA) + "/" + name; }

Run run(const std::string& args) {
  const std::string command = std::string(NORMKIT_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buffer{};
  std::size_t got = 0;
  while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) r.out.append(buffer.data(), got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string write_temp(const std::string& name, const std::string& content) {
  const std::string path = std::string("normkit_cli_") + name;
  std::ofstream(path) << content;
  return path;
}

}  // namespace

TEST_CASE("norm of (3, 4)") {
  const Run r = run("norm --p 2 " + data("vec34.json"));
  REQUIRE(r.code == 0);
  const json d = r.doc();
  CHECK(d["value"].get<double>() == Approx(5.0));
  CHECK(d["exact"] == true);
  CHECK(d["status"] == "ok");

  CHECK(run("norm --p 1 " + data("vec34.json")).doc()["value"].get<double>() == Approx(7.0));
  CHECK(run("norm --p inf " + data("vec34.json")).doc()["value"].get<double>() == Approx(4.0));
}

TEST_CASE("dual norm of (1, 1) against l_inf") {
  const Run r = run("dualnorm --p inf " + data("func11.json"));
  REQUIRE(r.code == 0);
  CHECK(r.doc()["value"].get<double>() == Approx(2.0));
  CHECK(r.doc()["exact"] == true);
  // the functional's own norm when --p is absent
  CHECK(run("dualnorm " + data("func11.json")).doc()["value"].get<double>() == Approx(std::sqrt(2.0)));
}

TEST_CASE("complex documents switch the scalar field") {
  const Run r = run("norm --p 1 " + data("vec_complex.json"));
  REQUIRE(r.code == 0);
  CHECK(r.doc()["value"].get<double>() == Approx(2.0));
  CHECK(run("norm --mode real " + data("vec_complex.json")).code == 2);

  const Run psd = run("psd-check " + data("herm_complex_pd.json"));
  REQUIRE(psd.code == 0);
  CHECK(psd.doc()["is_psd"] == true);
  CHECK(psd.doc()["min_eigenvalue"].get<double>() == Approx(1.0));
}

TEST_CASE("norming functional output re-parses as a functional") {
  const Run r = run("normer --p 3 " + data("vec34.json"));
  REQUIRE(r.code == 0);
  const std::string path = write_temp("normer.json", r.doc()["functional"].dump());
  const Run back = run("dualnorm " + path);
  REQUIRE(back.code == 0);
  CHECK(back.doc()["value"].get<double>() == Approx(1.0).epsilon(1e-9));
  std::remove(path.c_str());
}

TEST_CASE("geometry commands") {
  Run r = run("project " + data("ball_l1.json") + " " + data("point22.json"));
  REQUIRE(r.code == 0);
  CHECK(r.doc()["point"]["entries"][0].get<double>() == Approx(0.5));
  CHECK(r.doc()["point"]["entries"][1].get<double>() == Approx(0.5));
  CHECK(r.doc()["distance"].get<double>() == Approx(1.5 * std::sqrt(2.0)));
  CHECK(r.doc()["exact"] == true);

  r = run("separate " + data("ball_l1.json") + " " + data("point22.json"));
  REQUIRE(r.code == 0);
  CHECK(r.doc()["hyperplane"]["offset"].get<double>() == Approx(1.0 / std::sqrt(2.0)));

  r = run("cone-separate " + data("orthant2.json") + " " + data("point_m12.json"));
  REQUIRE(r.code == 0);
  CHECK(r.doc()["normal"]["entries"][0].get<double>() == Approx(1.0));
  CHECK(r.doc()["projection"]["entries"][1].get<double>() == Approx(2.0));
  CHECK(r.doc()["distance"].get<double>() == Approx(1.0));

  r = run("dualcone " + data("orthant2.json") + " " + data("point22.json"));
  CHECK(r.doc()["member"] == true);
  r = run("dualcone " + data("orthant2.json") + " " + data("point_m12.json"));
  CHECK(r.doc()["member"] == false);
  r = run("dualcone " + data("psd_cone.json") + " " + data("herm_indef.json"));
  CHECK(r.doc()["member"] == false);
}

TEST_CASE("indefinite matrices come with a rank-one witness") {
  const Run r = run("psd-check " + data("herm_indef.json"));
  REQUIRE(r.code == 0);
  const json d = r.doc();
  CHECK(d["is_psd"] == false);
  CHECK(d["pairing_nonneg"] == false);
  CHECK(d["witness_pairing"].get<double>() < 0.0);
  CHECK(d["witness"]["hermitian"] == true);
}

TEST_CASE("operator and trace norms") {
  Run r = run("opnorm " + data("map_l1.json"));
  REQUIRE(r.code == 0);
  CHECK(r.doc()["value"].get<double>() == Approx(6.0));
  CHECK(r.doc()["exact"] == true);

  // --q overrides the codomain: row rule in l_inf gives max(|1| + |-2|, |3| + |4|)
  r = run("opnorm --p inf --q inf " + data("map_l1.json"));
  CHECK(r.doc()["value"].get<double>() == Approx(7.0));

  r = run("adjoint-check " + data("map_l1.json"));
  REQUIRE(r.code == 0);
  CHECK(r.doc()["consistent"] == true);
  CHECK(r.doc()["dual"]["value"].get<double>() == Approx(6.0));

  r = run("tracenorm " + data("diag34.json"));
  REQUIRE(r.code == 0);
  CHECK(r.doc()["value"].get<double>() == Approx(7.0));
  CHECK(r.doc()["exact"] == true);
  CHECK(r.doc()["decomposition"]["terms"].size() == 2);

  r = run("pairing-check " + data("diag34.json") + " " + data("diag34.json"));
  REQUIRE(r.code == 0);
  CHECK(r.doc()["lhs"].get<double>() == Approx(25.0));
  CHECK(r.doc()["rhs"].get<double>() == Approx(28.0));
  CHECK(r.doc()["holds"] == true);
}

TEST_CASE("quotient and extension") {
  for (const char* p : {"1", "2", "inf"}) {
    const Run r = run(std::string("quotient --p ") + p + " " + data("vec34.json") + " " + data("subspace_e1.json"));
    REQUIRE(r.code == 0);
    CHECK(r.doc()["value"].get<double>() == Approx(4.0));
    CHECK(r.doc()["exact"] == true);
  }
  const Run e = run("extend --p 1 " + data("subspace_11.json") + " " + data("values2.json"));
  REQUIRE(e.code == 0);
  const json d = e.doc();
  CHECK(d["dual_norm"].get<double>() == Approx(1.0));
  CHECK(d["norm_on_subspace"]["value"].get<double>() == Approx(1.0));
  CHECK(d["functional"]["weights"]["entries"][0].get<double>() == Approx(1.0));
  CHECK(d["functional"]["weights"]["entries"][1].get<double>() == Approx(1.0));
}

TEST_CASE("vector-valued functions") {
  CHECK(run("mixed-norm --p 1 " + data("field.json")).doc()["value"].get<double>() == Approx(10.0));
  CHECK(run("mixed-norm --p inf " + data("field.json")).doc()["value"].get<double>() == Approx(5.0));
  const Run r = run("lift-check --p 2 --dim 3 --trials 200 " + data("lift_matrix.json"));
  REQUIRE(r.code == 0);
  CHECK(r.doc()["holds"] == true);
  CHECK(r.doc()["embedded_ratio"].get<double>() == Approx(r.doc()["scalar_opnorm"]["value"].get<double>()));
}

TEST_CASE("exit codes") {
  CHECK(run("").code == 2);
  CHECK(run("nonsense").code == 2);
  CHECK(run("norm --p two " + data("vec34.json")).code == 2);
  CHECK(run("norm " + data("malformed.json")).code == 2);
  CHECK(run("norm " + data("missing.json")).code == 2);
  CHECK(run("norm --p 0.5 " + data("vec34.json")).code == 3);
  CHECK(run("psd-check " + data("herm_not_hermitian.json")).code == 3);
  CHECK(run("quotient " + data("vec34.json") + " " + data("subspace_11.json") + " --p 2").code == 0);

  const std::string set = write_temp(
      "lens.json",
      R"({"kind": "intersection", "parts": [{"kind": "pball", "p": 2, "radius": 1, "center": [0, 0]},
          {"kind": "pball", "p": 2, "radius": 1, "center": [1.5, 0]}]})");
  const std::string point = write_temp("far.json", "[0.75, 3]");
  const Run r = run("project --max-iter 2 " + set + " " + point);
  CHECK(r.code == 4);
  CHECK(r.doc()["status"] == "error");
  CHECK(r.doc()["lower"].get<double>() <= r.doc()["upper"].get<double>());
  const Run ok = run("project " + set + " " + point);
  CHECK(ok.code == 0);
  CHECK(ok.doc()["distance"].get<double>() == Approx(3.0 - std::sqrt(1.0 - 0.5625)).epsilon(1e-6));
  std::remove(set.c_str());
  std::remove(point.c_str());
}

TEST_CASE("--out writes the document to a file") {
  const std::string path = "normkit_cli_out.json";
  const Run r = run("norm --out " + path + " " + data("vec34.json"));
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  CHECK(json::parse(in)["value"].get<double>() == Approx(5.0));
  std::remove(path.c_str());
}

TEST_CASE("selftest is deterministic and passes") {
  const Run a = run("selftest --seed 7");
  const Run b = run("selftest --seed 7");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.doc()["failed"] == 0);
  CHECK(a.doc()["passed"].get<int>() > 0);
  CHECK(run("selftest --seed 8").out != a.out);
}

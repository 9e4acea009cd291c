// normkit: file-driven front end. Every command prints one JSON document.
//
// Exit codes: 0 ok, 1 self-test failure, 2 unparsable input,
// 3 precondition violated, 4 iteration cap reached.

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "io.hpp"

namespace {

using namespace normkit;
using io::json;

struct Options {
  std::vector<std::string> inputs;
  std::string p;
  std::string q;
  std::string norm_file;
  std::optional<double> tol;
  std::optional<int> max_iter;
  std::uint64_t seed = 0;
  std::optional<int> trials;
  std::string mode = "auto";
  std::string out;
  Eigen::Index dim = 2;
  bool euclidean = false;
  std::string level = "quick";
  int steps = 40;
};

Tolerances tolerances(const Options& o) {
  Tolerances tol;
  if (o.tol) {
    tol.eps_iter = *o.tol;
    tol.eps_exact = std::min(tol.eps_exact, *o.tol);
  }
  if (o.max_iter) tol.max_iter = *o.max_iter;
  tol.validate();
  return tol;
}

const std::string& input(const Options& o, std::size_t k, const char* what) {
  if (o.inputs.size() <= k) throw io::ParseError(std::string("missing input file: ") + what);
  return o.inputs[k];
}

/// --norm file, else --p, else the fallback.
template <class Scalar>
NormSpec<Scalar> chosen_norm(const Options& o, std::optional<NormSpec<Scalar>> fallback = std::nullopt) {
  if (!o.norm_file.empty()) return io::norm_from<Scalar>(io::read_file(o.norm_file));
  if (!o.p.empty()) return NormSpec<Scalar>::p(io::parse_exponent(o.p));
  if (fallback) return *fallback;
  return NormSpec<Scalar>::p(2.0);
}

Exponent chosen_exponent(const Options& o) { return o.p.empty() ? Exponent(2.0) : io::parse_exponent(o.p); }

template <class Scalar>
json cmd_norm(const Options& o) {
  const Vec<Scalar> v = io::vector_from<Scalar>(io::read_file(input(o, 0, "vector")));
  const NormSpec<Scalar> norm = chosen_norm<Scalar>(o);
  return {{"value", io::number(norm(v))}, {"exact", true}, {"norm", io::to_json(norm)}};
}

template <class Scalar>
json cmd_dualnorm(const Options& o) {
  Functional<Scalar> f = io::functional_from<Scalar>(io::read_file(input(o, 0, "functional")));
  f.space_norm = chosen_norm<Scalar>(o, f.space_norm);
  json out = io::to_json(dual_norm(f, tolerances(o), o.seed));
  out["norm"] = io::to_json(f.space_norm);
  return out;
}

template <class Scalar>
json cmd_normer(const Options& o) {
  const Vec<Scalar> v = io::vector_from<Scalar>(io::read_file(input(o, 0, "vector")));
  const NormSpec<Scalar> norm = chosen_norm<Scalar>(o);
  const Functional<Scalar> f = norming_functional(v, norm);
  return {{"functional", io::to_json(f)}, {"value", io::number(norm(v))}, {"exact", true}};
}

json cmd_project(const Options& o) {
  const ConvexSet set = io::set_from(io::read_file(input(o, 0, "set")));
  const Vector x = io::vector_from<double>(io::read_file(input(o, 1, "point")));
  const Projection q = project(set, x, tolerances(o));
  return {{"point", io::to_json<double>(q.point)},
          {"distance", io::number(q.distance)},
          {"iterations", q.iterations},
          {"exact", !set.is_iterative()}};
}

json cmd_separate(const Options& o) {
  const ConvexSet set = io::set_from(io::read_file(input(o, 0, "set")));
  const Vector x = io::vector_from<double>(io::read_file(input(o, 1, "point")));
  json out = {{"hyperplane", io::to_json(separate_point(set, x, tolerances(o)))}};
  out["exact"] = !set.is_iterative();
  return out;
}

json cmd_support(const Options& o) {
  const ConvexSet set = io::set_from(io::read_file(input(o, 0, "set")));
  const Vector p = io::vector_from<double>(io::read_file(input(o, 1, "boundary point")));
  const Vector d = io::vector_from<double>(io::read_file(input(o, 2, "exterior direction")));
  return {{"hyperplane", io::to_json(supporting_hyperplane(set, p, d, o.steps, tolerances(o)))},
          {"steps", o.steps},
          {"exact", false}};
}

json cmd_cone_separate(const Options& o) {
  const ConvexSet cone = io::set_from(io::read_file(input(o, 0, "cone")));
  const Vector z = io::vector_from<double>(io::read_file(input(o, 1, "point")));
  const ConeSeparation s = separate_cone(cone, z, tolerances(o));
  return {{"normal", io::to_json<double>(s.normal)},
          {"projection", io::to_json<double>(s.projection)},
          {"distance", io::number(s.distance)},
          {"exact", !cone.is_iterative()}};
}

template <class Scalar>
json cmd_dualcone(const Options& o) {
  const json spec = io::read_file(input(o, 0, "cone"));
  const json element = io::read_file(input(o, 1, "element"));
  if (spec.is_object() && spec.value("kind", "") == "psd") {
    const SelfAdjointMap<Scalar> t = io::hermitian_from<Scalar>(element);
    return {{"member", dual_cone_membership(PsdCone{t.dimension()}, t, tolerances(o))}, {"exact", false}};
  }
  const ConvexSet cone = io::set_from(spec);
  const Vector w = io::vector_from<double>(element);
  return {{"member", dual_cone_membership(cone, w, tolerances(o))}, {"exact", true}};
}

template <class Scalar>
json cmd_psd_check(const Options& o) {
  const SelfAdjointMap<Scalar> t = io::hermitian_from<Scalar>(io::read_file(input(o, 0, "hermitian matrix")));
  const Tolerances tol = tolerances(o);
  const PsdTest<Scalar> test = psd_test(t, tol);
  const PsdDuality<Scalar> dual = psd_duality_check(t, o.trials.value_or(100), o.seed, tol);
  json out = {{"is_psd", test.is_psd},
              {"min_eigenvalue", io::number(test.min_eigenvalue)},
              {"spectral_radius", io::number(test.spectral_radius)},
              {"threshold", io::number(test.threshold)},
              {"pairing_nonneg", dual.pairing_nonneg},
              {"min_pairing", io::number(dual.min_pairing)},
              {"exact", false}};
  if (dual.witness) {
    out["witness"] = {{"hermitian", true}, {"matrix", io::matrix_to_json<Scalar>(*dual.witness)["rows"]}};
    out["witness_pairing"] = io::number(dual.witness_pairing);
  }
  return out;
}

template <class Scalar>
LinearMap<Scalar> chosen_map(const Options& o, const std::string& path) {
  LinearMap<Scalar> t = io::map_from<Scalar>(io::read_file(path));
  if (!o.p.empty()) t.domain = NormSpec<Scalar>::p(io::parse_exponent(o.p));
  if (!o.q.empty()) t.codomain = NormSpec<Scalar>::p(io::parse_exponent(o.q));
  return t;
}

template <class Scalar>
json map_json(const LinearMap<Scalar>& t) {
  return {{"matrix", io::matrix_to_json<Scalar>(t.matrix)["rows"]},
          {"domain", io::to_json(t.domain)},
          {"codomain", io::to_json(t.codomain)}};
}

template <class Scalar>
json cmd_opnorm(const Options& o) {
  const LinearMap<Scalar> t = chosen_map<Scalar>(o, input(o, 0, "map"));
  return io::to_json(operator_norm(t, tolerances(o), o.seed));
}

template <class Scalar>
json cmd_adjoint_check(const Options& o) {
  const LinearMap<Scalar> t = chosen_map<Scalar>(o, input(o, 0, "map"));
  const AdjointCheck<Scalar> c = adjoint_norm_check(t, tolerances(o), o.seed);
  return {{"primal", io::to_json(c.primal)},
          {"dual", io::to_json(c.dual)},
          {"consistent", c.consistent},
          {"adjoint", map_json(adjoint(t))},
          {"exact", c.primal.exact && c.dual.exact}};
}

template <class Scalar>
json cmd_tracenorm(const Options& o) {
  const LinearMap<Scalar> t = chosen_map<Scalar>(o, input(o, 0, "map"));
  const TraceNorm<Scalar> tn = trace_norm(t, tolerances(o), o.seed);
  json out = io::to_json(tn.value);
  out["decomposition"] = io::to_json(tn.decomposition);
  if (tn.probe) out["probe"] = io::matrix_to_json<Scalar>(*tn.probe)["rows"];
  return out;
}

template <class Scalar>
json cmd_pairing_check(const Options& o) {
  const LinearMap<Scalar> a = io::map_from<Scalar>(io::read_file(input(o, 0, "map A")));
  const LinearMap<Scalar> t = io::map_from<Scalar>(io::read_file(input(o, 1, "map T")));
  const PairingBound r = pairing_bound_check(a, t, tolerances(o), o.seed);
  return {{"lhs", io::number(r.lhs)}, {"rhs", io::number(r.rhs)}, {"holds", r.holds}, {"exact", false}};
}

template <class Scalar>
std::optional<NormSpec<Scalar>> embedded_norm(const json& j) {
  if (j.is_object() && j.contains("norm")) return io::norm_from<Scalar>(j.at("norm"));
  return std::nullopt;
}

template <class Scalar>
json cmd_quotient(const Options& o) {
  const Vec<Scalar> x = io::vector_from<Scalar>(io::read_file(input(o, 0, "vector")));
  const json sub = io::read_file(input(o, 1, "subspace"));
  const NormSpec<Scalar> norm = chosen_norm<Scalar>(o, embedded_norm<Scalar>(sub));
  json out = io::to_json(quotient_norm(x, io::subspace_from<Scalar>(sub), norm, tolerances(o)));
  out["norm"] = io::to_json(norm);
  return out;
}

template <class Scalar>
json cmd_extend(const Options& o) {
  const json sub = io::read_file(input(o, 0, "subspace"));
  const Vec<Scalar> values = io::vector_from<Scalar>(io::read_file(input(o, 1, "values")));
  const NormSpec<Scalar> norm = chosen_norm<Scalar>(o, embedded_norm<Scalar>(sub));
  const Extension<Scalar> e = extend_functional(io::subspace_from<Scalar>(sub), values, norm, tolerances(o));
  return {{"functional", io::to_json(e.functional)},
          {"norm_on_subspace", io::to_json(e.norm_on_subspace)},
          {"dual_norm", io::number(e.dual_norm)},
          {"exact", e.exact}};
}

template <class Scalar>
json cmd_mixed_norm(const Options& o) {
  const VectorField<Scalar> f = io::field_from<Scalar>(io::read_file(input(o, 0, "field")));
  return {{"value", io::number(mixed_norm(f, chosen_exponent(o)))}, {"exact", true}};
}

template <class Scalar>
json cmd_lift_check(const Options& o) {
  const json doc = io::read_file(input(o, 0, "matrix"));
  const Mat<Scalar> t = io::map_from<Scalar>(doc).matrix;
  const LiftReport<Scalar> r =
      lifted_norm_check<Scalar>(t, chosen_exponent(o), o.dim, o.trials.value_or(1000), o.seed, o.euclidean,
                                tolerances(o));
  return {{"scalar_opnorm", io::to_json(r.scalar_opnorm)},
          {"max_ratio", io::number(r.max_ratio)},
          {"embedded_ratio", io::number(r.embedded_ratio)},
          {"holds", r.holds},
          {"exact", r.scalar_opnorm.exact}};
}

json cmd_selftest(const Options& o) {
  if (o.level != "quick" && o.level != "full") throw io::ParseError("--level must be quick or full");
  const SelftestReport r = selftest(o.seed, o.level == "full" ? SelftestLevel::Full : SelftestLevel::Quick);
  json checks = json::array();
  for (const auto& c : r.checks) {
    json entry = {{"name", c.name}, {"trials", c.trials}, {"failures", c.failures}};
    if (!c.witness.empty()) entry["witness"] = c.witness;
    checks.push_back(entry);
  }
  return {{"status", r.ok() ? "ok" : "error"},
          {"seed", r.seed},
          {"level", o.level},
          {"passed", r.passed()},
          {"failed", r.failed()},
          {"checks", checks},
          {"exact", true}};
}

/// Runs the real reading first; a complex entry anywhere switches to complex
/// unless --mode pins it.
json dispatch_mode(const Options& o, const std::function<json()>& real, const std::function<json()>& complex) {
  if (o.mode == "real") return real();
  if (o.mode == "complex") return complex();
  try {
    return real();
  } catch (const io::ComplexEntry&) {
    return complex();
  }
}

#define NORMKIT_BOTH(fn) [&] { return dispatch_mode(o, [&] { return fn<double>(o); }, [&] { return fn<Complex>(o); }); }

void emit(const Options& o, const json& doc) {
  const std::string text = doc.dump(2) + "\n";
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(o.out);
  if (!file) throw io::ParseError("cannot write " + o.out);
  file << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Norms, duality and convex geometry on finite-dimensional spaces"};
  app.require_subcommand(1);
  Options o;

  const std::map<std::string, std::function<json()>> commands = {
      {"norm", NORMKIT_BOTH(cmd_norm)},
      {"dualnorm", NORMKIT_BOTH(cmd_dualnorm)},
      {"normer", NORMKIT_BOTH(cmd_normer)},
      {"project", [&] { return cmd_project(o); }},
      {"separate", [&] { return cmd_separate(o); }},
      {"support", [&] { return cmd_support(o); }},
      {"cone-separate", [&] { return cmd_cone_separate(o); }},
      {"dualcone", NORMKIT_BOTH(cmd_dualcone)},
      {"psd-check", NORMKIT_BOTH(cmd_psd_check)},
      {"opnorm", NORMKIT_BOTH(cmd_opnorm)},
      {"adjoint-check", NORMKIT_BOTH(cmd_adjoint_check)},
      {"tracenorm", NORMKIT_BOTH(cmd_tracenorm)},
      {"pairing-check", NORMKIT_BOTH(cmd_pairing_check)},
      {"quotient", NORMKIT_BOTH(cmd_quotient)},
      {"extend", NORMKIT_BOTH(cmd_extend)},
      {"mixed-norm", NORMKIT_BOTH(cmd_mixed_norm)},
      {"lift-check", NORMKIT_BOTH(cmd_lift_check)},
      {"selftest", [&] { return cmd_selftest(o); }},
  };
  const std::map<std::string, std::string> help = {
      {"norm", "p-norm (or --norm file) of a vector"},
      {"dualnorm", "dual norm of a functional"},
      {"normer", "norming functional of a vector"},
      {"project", "Euclidean projection onto a convex set"},
      {"separate", "hyperplane separating a point from a convex set"},
      {"support", "supporting hyperplane at a boundary point"},
      {"cone-separate", "separate a point from a closed convex cone"},
      {"dualcone", "membership in the dual cone (kind psd for the PSD cone)"},
      {"psd-check", "eigenvalue and trace-pairing PSD tests"},
      {"opnorm", "operator norm of a linear map"},
      {"adjoint-check", "operator norm of a map and of its adjoint"},
      {"tracenorm", "trace norm of a linear map"},
      {"pairing-check", "|tr(A T)| <= |A|_op |T|_tr"},
      {"quotient", "quotient norm |x + W|"},
      {"extend", "norm-preserving extension of a functional from a subspace"},
      {"mixed-norm", "(p, V)-norm of a vector-valued function"},
      {"lift-check", "operator norm of a scalar map lifted to vector-valued functions"},
      {"selftest", "randomized invariant battery"},
  };

  for (const auto& [name, description] : help) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("inputs", o.inputs, "input JSON files");
    sub->add_option("--p", o.p, "exponent (a number >= 1 or inf); domain exponent for maps");
    sub->add_option("--q", o.q, "codomain exponent for maps");
    sub->add_option("--norm", o.norm_file, "norm JSON file, overrides --p");
    sub->add_option("--tol", o.tol, "iterative tolerance");
    sub->add_option("--max-iter", o.max_iter, "iteration cap");
    sub->add_option("--seed", o.seed, "random seed");
    sub->add_option("--trials", o.trials, "sample count");
    sub->add_option("--mode", o.mode, "scalar field")->check(CLI::IsMember({"auto", "real", "complex"}));
    sub->add_option("--out", o.out, "write the result here instead of standard output");
    if (name == "lift-check") {
      sub->add_option("--dim", o.dim, "dimension of the value space");
      sub->add_flag("--euclidean", o.euclidean, "Euclidean value norm instead of l_p");
    }
    if (name == "selftest") sub->add_option("--level", o.level, "quick or full");
    if (name == "support") sub->add_option("--steps", o.steps, "exterior points in the limit construction");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    json doc = commands.at(name)();
    if (!doc.contains("status")) doc["status"] = "ok";
    doc["command"] = name;
    emit(o, doc);
    return doc["status"] == "ok" ? 0 : 1;
  } catch (const ConvergenceError& e) {
    std::cerr << "normkit: " << e.what() << "\n";
    emit(o, {{"status", "error"},
             {"command", name},
             {"error", e.what()},
             {"lower", io::number(e.lower())},
             {"upper", io::number(e.upper())},
             {"exact", false}});
    return 4;
  } catch (const PreconditionError& e) {
    std::cerr << "normkit: " << e.what() << "\n";
    return 3;
  } catch (const io::ParseError& e) {
    std::cerr << "normkit: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "normkit: malformed input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "normkit: " << e.what() << "\n";
    return 1;
  }
}

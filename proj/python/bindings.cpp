// Python bindings. Words cross the boundary as strings such as "a1 b1^-1",
// rationals as "p/q" strings and big integers as decimal strings; the
// Python package converts them to Fraction and int.

#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "allostery/analysis.hpp"
#include "allostery/cli.hpp"
#include "allostery/covers.hpp"
#include "allostery/induction.hpp"

namespace py = pybind11;
using namespace allostery;

namespace {

std::vector<Word> parse_all(const Presentation& pres, const std::vector<std::string>& words) {
  std::vector<Word> out;
  out.reserve(words.size());
  for (const auto& w : words) {
    out.push_back(pres.parse(w));
  }
  return out;
}

py::tuple chain_report(const ChainReport& r) {
  return py::make_tuple(r.ok, r.level, r.what, r.detail);
}

}  // namespace

PYBIND11_MODULE(_allostery, m) {
  m.doc() = "Finite levels of allosteric actions of surface groups";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<ForeignGenerators>(m, "ForeignGenerators", base.ptr());
  py::register_exception<PresentationMismatch>(m, "PresentationMismatch", base.ptr());
  py::register_exception<ConstructionExhausted>(m, "ConstructionExhausted", base.ptr());
  py::register_exception<RelatorFailure>(m, "RelatorFailure", base.ptr());

  py::class_<Presentation>(m, "Presentation")
      .def_static("orientable", py::overload_cast<int, int>(&Presentation::orientable), py::arg("size_a"),
                  py::arg("size_b"))
      .def_static("nonorientable", &Presentation::nonorientable, py::arg("genus"))
      .def_property_readonly("is_orientable", py::overload_cast<>(&Presentation::orientable, py::const_))
      .def_property_readonly("genus", &Presentation::genus)
      .def_property_readonly("size_a", &Presentation::size_a)
      .def_property_readonly("size_b", &Presentation::size_b)
      .def_property_readonly("num_generators", &Presentation::num_generators)
      .def_property_readonly("generator_names",
                             [](const Presentation& p) {
                               std::vector<std::string> names;
                               for (int i = 0; i < p.num_generators(); ++i) {
                                 names.push_back(p.generator_name(i));
                               }
                               return names;
                             })
      .def_property_readonly("relator", [](const Presentation& p) { return p.format(p.relator()); })
      .def("normalize", [](const Presentation& p, const std::string& w) { return p.format(p.parse(w)); },
           "Freely reduced form of a word")
      .def("__eq__", [](const Presentation& p, const Presentation& q) { return p == q; })
      .def("__repr__", [](const Presentation& p) {
        std::ostringstream os;
        if (p.orientable()) {
          os << "Presentation.orientable(" << p.size_a() << ", " << p.size_b() << ")";
        } else {
          os << "Presentation.nonorientable(" << p.genus() << ")";
        }
        return os.str();
      });

  m.def(
      "dehn_reduce",
      [](const Presentation& pres, const std::string& w) {
        auto r = dehn_is_trivial(pres, pres.parse(w));
        return py::make_tuple(r.trivial, pres.format(r.witness));
      },
      py::arg("pres"), py::arg("word"), "Returns (trivial, reduced word)");

  py::class_<PointedAction>(m, "PointedAction")
      .def(py::init([](const Presentation& pres, std::vector<Permutation> perms, Point basepoint) {
             return PointedAction(pres, std::move(perms), basepoint);
           }),
           py::arg("pres"), py::arg("perms"), py::arg("basepoint") = 0)
      .def_property_readonly("presentation", &PointedAction::presentation)
      .def_property_readonly("degree", &PointedAction::degree)
      .def_property_readonly("basepoint", &PointedAction::basepoint)
      .def_property_readonly("perms", &PointedAction::perms)
      .def("act",
           [](const PointedAction& a, const std::string& w, Point x) {
             return act(a, a.presentation().parse(w), x);
           },
           py::arg("word"), py::arg("point"))
      .def("fix_set",
           [](const PointedAction& a, const std::string& w) {
             return fix_set(a, a.presentation().parse(w));
           })
      .def("count_fixed",
           [](const PointedAction& a, const std::vector<std::string>& words) {
             return count_fixed(a, parse_all(a.presentation(), words));
           })
      .def("verify",
           [](const PointedAction& a) {
             auto r = verify_action(a);
             return py::make_tuple(r.ok, r.axiom, r.detail);
           })
      .def("homology_dimension",
           [](const PointedAction& a, unsigned p) {
             return homology(a, p, std::span<const Word>{}).dimension();
           },
           py::arg("p"))
      .def("to_json", [](const PointedAction& a) { return action_to_json(a).dump(); });

  m.def("cyclic_cover", &cyclic_cover, py::arg("pres"), py::arg("d"));
  m.def("trivial_action", &trivial_action, py::arg("pres"));
  m.def("product_intersection", &product_intersection);
  m.def("load_action", &load_action, py::arg("path"));
  m.def(
      "save_action",
      [](const std::string& path, const PointedAction& a) { save_action(path, a); },
      py::arg("path"), py::arg("action"));

  m.def(
      "choose_rates",
      [](const std::string& t, const std::vector<unsigned>& primes, int depth) {
        std::vector<py::tuple> out;
        for (const auto& s : choose_rates(parse_rational(t), primes, depth)) {
          out.push_back(py::make_tuple(s.prime, s.exponent, to_string(s.rate), to_string(s.partial)));
        }
        return out;
      },
      py::arg("t"), py::arg("primes"), py::arg("depth"));

  m.def(
      "build_lambda",
      [](const Presentation& pres, unsigned p, const std::string& r, const std::string& gamma,
         const std::string& delta, std::uint64_t seed) {
        LambdaConfig c;
        c.seed = seed;
        LambdaResult res = [&] {
          py::gil_scoped_release release;
          return build_lambda(pres, p, parse_rational(r), pres.parse(gamma), pres.parse(delta), c);
        }();
        auto report = verify_certificate(res.certificate, res.action);
        return py::make_tuple(res.action, res.certificate.to_json().dump(), report.ok);
      },
      py::arg("pres"), py::arg("p"), py::arg("r"), py::arg("gamma"), py::arg("delta"),
      py::arg("seed") = 7, "Returns (action, certificate JSON, certificate verified)");

  py::class_<Chain>(m, "Chain")
      .def_property_readonly("presentation", [](const Chain& c) { return c.pres; })
      .def_property_readonly("depth", &Chain::depth)
      .def_property_readonly("t", [](const Chain& c) { return to_string(c.t); })
      .def_property_readonly("primes", [](const Chain& c) { return c.primes; })
      .def("degree", [](const Chain& c, int n) { return c.degree(n).str(); })
      .def("level",
           [](const Chain& c, int n) {
             if (n < 1 || n > c.depth()) {
               throw DomainError("level outside the chain");
             }
             const auto& l = c.levels[static_cast<std::size_t>(n - 1)];
             py::dict d;
             d["prime"] = l.prime;
             d["exponent"] = l.exponent;
             d["rate"] = to_string(l.rate);
             d["partial"] = to_string(l.partial);
             d["gamma"] = c.pres.format(l.gamma);
             d["delta"] = c.pres.format(l.delta);
             d["lambda_degree"] = l.lambda.degree();
             return d;
           })
      .def("component", [](const Chain& c, int n) { return c.levels.at(static_cast<std::size_t>(n - 1)).lambda; })
      .def("materialized",
           [](const Chain& c, int n) -> std::optional<PointedAction> {
             const auto* a = c.materialized(n);
             return a ? std::optional<PointedAction>(*a) : std::nullopt;
           })
      .def("moves_basepoint",
           [](const Chain& c, const std::string& w, int n) { return c.moves_basepoint(c.pres.parse(w), n); })
      .def("verify", [](const Chain& c) { return chain_report(verify_chain(c)); })
      .def("save", [](const Chain& c, const std::string& dir) { return save_chain(c, dir); },
           py::arg("dir"));

  m.def(
      "build_chain",
      [](const Presentation& pres, const std::string& t, const std::vector<unsigned>& primes, int depth,
         std::uint64_t seed, Point materialize_cap) {
        ChainConfig c;
        c.lambda.seed = seed;
        c.materialize_cap = materialize_cap;
        py::gil_scoped_release release;
        return build_chain(pres, parse_rational(t), primes, depth, c);
      },
      py::arg("pres"), py::arg("t"), py::arg("primes"), py::arg("depth"), py::arg("seed") = 7,
      py::arg("materialize_cap") = 1000000);
  m.def("load_chain", &load_chain, py::arg("manifest"));

  m.def(
      "fix_proportion",
      [](const Chain& c, const std::string& w, int level) {
        return to_string(fix_proportion(c, c.pres.parse(w), level));
      },
      py::arg("chain"), py::arg("word"), py::arg("level"));
  m.def(
      "cylinder_measure",
      [](const Chain& c, const std::vector<std::string>& fixed, const std::vector<std::string>& moved,
         int level) {
        return to_string(cylinder_measure(c, parse_all(c.pres, fixed), parse_all(c.pres, moved), level));
      },
      py::arg("chain"), py::arg("fixed"), py::arg("moved"), py::arg("level"));
  m.def(
      "gamma_a_words",
      [](const Presentation& pres) {
        std::vector<std::string> out;
        for (const auto& w : gamma_a_words(pres)) {
          out.push_back(pres.format(w));
        }
        return out;
      },
      py::arg("pres"));
  m.def(
      "urs_certificate",
      [](const Chain& c, int length, int max_level) {
        return urs_certificate(c, length, max_level).to_json(c.pres).dump();
      },
      py::arg("chain"), py::arg("length"), py::arg("max_level"));
  m.def(
      "compare_chains",
      [](const Chain& s, const Chain& t, int level) { return compare_chains(s, t, level).to_json().dump(); },
      py::arg("chain_s"), py::arg("chain_t"), py::arg("level"));
  m.def(
      "induced_gamma_a_measure",
      [](const Chain& c, int genus_prime, int level) {
        auto ed = orientation_double_cover(genus_prime);
        auto r = induced_gamma_a_measure(c, ed, level);
        return py::make_tuple(to_string(r.value), to_string(r.t_n), to_string(r.c_n),
                              r.direct ? py::object(py::str(to_string(*r.direct))) : py::object(py::none()));
      },
      py::arg("chain"), py::arg("genus_prime"), py::arg("level"));
  m.def(
      "verify_embedding",
      [](int genus_prime) {
        auto r = verify_embedding(orientation_double_cover(genus_prime));
        return py::make_tuple(r.ok, r.check, r.detail);
      },
      py::arg("genus_prime"));

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "allostery");
        std::ostringstream out;
        std::ostringstream err;
        int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs a command line; returns (exit code, stdout, stderr)");
}

// Python bindings for the completion library. Graphs travel as
// (n, [(id, u, v, "even"|"odd"), ...]) and weights as {id: value} dicts.
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sgc/classify.hpp"
#include "sgc/instance_io.hpp"
#include "sgc/oracle.hpp"

namespace py = pybind11;
using namespace sgc;

namespace {

using PyEdge = std::tuple<std::string, int, int, std::string>;

SignedGraph make_graph(int n, const std::vector<PyEdge>& edges) {
  std::vector<Edge> es;
  for (const auto& [id, u, v, sign] : edges) {
    if (sign != "even" && sign != "odd")
      throw std::invalid_argument("edge sign must be 'even' or 'odd'");
    es.push_back({id, u, v, sign == "odd" ? Parity::Odd : Parity::Even});
  }
  return SignedGraph(n, std::move(es));
}

std::vector<PyEdge> dump_edges(const SignedGraph& g) {
  std::vector<PyEdge> out;
  for (const auto& e : g.edges())
    out.emplace_back(e.id, e.u, e.v, e.parity == Parity::Odd ? "odd" : "even");
  return out;
}

py::dict dump_dual(const DualCertificate& d) {
  py::dict out;
  out["vertex"] = d.vertex_omega;
  out["edges"] = d.edge_omega;
  return out;
}

DualCertificate load_dual(const py::dict& d) {
  DualCertificate out;
  out.vertex_omega = d["vertex"].cast<std::vector<double>>();
  out.edge_omega = d["edges"].cast<std::map<EdgeId, double>>();
  return out;
}

const char* class_name(UniquenessVerdict::Class c) {
  switch (c) {
    case UniquenessVerdict::Class::UniqueRank1: return "UniqueRank1";
    case UniquenessVerdict::Class::UniqueRank2: return "UniqueRank2";
    case UniquenessVerdict::Class::UniqueRank3: return "UniqueRank3";
    case UniquenessVerdict::Class::NotUnique: return "NotUnique";
    default: return "Infeasible";
  }
}

py::dict dump_verdict(const UniquenessVerdict& v) {
  py::dict out;
  out["cls"] = class_name(v.cls);
  out["witness"] = v.witness ? py::cast(*v.witness) : py::none();
  return out;
}

}  // namespace

PYBIND11_MODULE(_sgc, m) {
  m.doc() = "signed PSD matrix completion on odd-K4 minor free signed graphs";

  m.def(
      "check_met",
      [](int n, const std::vector<PyEdge>& edges, const std::map<EdgeId, double>& x,
         double tol) {
        SignedGraph g = make_graph(n, edges);
        MembershipResult r = met_membership(g, x, tol);
        py::dict out;
        out["inside"] = r.inside;
        out["margin"] = r.margin;
        out["witness"] = r.witness;
        return out;
      },
      py::arg("n"), py::arg("edges"), py::arg("x"), py::arg("tol") = kTolX,
      "MET membership for normalized angle weights x = arccos(c)/pi");

  m.def(
      "lambda_value",
      [](int n, const std::vector<PyEdge>& edges, const std::map<EdgeId, double>& x, int u,
         int v, const std::string& parity, const std::string& mode) {
        SignedGraph g = make_graph(n, edges);
        PathMode pm = mode == "walk" ? PathMode::Walk
                                     : (mode == "path" ? PathMode::Path : PathMode::Auto);
        return lambda_value(g, x, u, v, parity == "odd" ? Parity::Odd : Parity::Even, pm);
      },
      py::arg("n"), py::arg("edges"), py::arg("x"), py::arg("u"), py::arg("v"),
      py::arg("parity"), py::arg("mode") = "auto");

  m.def(
      "solve",
      [](int n, const std::vector<PyEdge>& edges, const std::map<EdgeId, double>& c) {
        SignedGraph g = make_graph(n, edges);
        SolveResult r = solve(g, c);
        py::dict out;
        out["status"] = r.status == SolveResult::Status::Solved ? "solved" : "infeasible";
        out["witness"] = r.witness;
        if (r.status == SolveResult::Status::Solved) {
          out["P_low"] = r.low_rank.P;
          out["rank_low"] = r.low_rank.rank;
          out["P_max"] = r.max_rank.P;
          out["rank_max"] = r.max_rank.rank;
          out["dual"] = dump_dual(r.dual);
          out["strict_complementarity"] = r.strict_complementarity;
        }
        return out;
      },
      py::arg("n"), py::arg("edges"), py::arg("c"),
      "low rank and max rank completions with a dual certificate");

  m.def(
      "classify_unique",
      [](int n, const std::vector<PyEdge>& edges, const std::map<EdgeId, double>& c) {
        return dump_verdict(classify_unique(make_graph(n, edges), c));
      },
      py::arg("n"), py::arg("edges"), py::arg("c"));

  m.def(
      "classify_rigidity",
      [](int n, const std::vector<PyEdge>& edges, const Eigen::MatrixXd& p) {
        return dump_verdict(classify_rigidity({make_graph(n, edges), p}));
      },
      py::arg("n"), py::arg("edges"), py::arg("p"));

  m.def(
      "super_stable",
      [](int n, const std::vector<PyEdge>& edges, const Eigen::MatrixXd& p,
         const py::dict& dual) {
        SuperStableResult r = super_stable_check({make_graph(n, edges), p}, load_dual(dual));
        return py::make_tuple(r.super_stable, r.reason);
      },
      py::arg("n"), py::arg("edges"), py::arg("p"), py::arg("dual"));

  m.def(
      "has_minor",
      [](int n, const std::vector<PyEdge>& edges, const std::string& pattern) {
        if (pattern != "odd-k4" && pattern != "odd-k32")
          throw std::invalid_argument("pattern must be 'odd-k4' or 'odd-k32'");
        return has_minor(make_graph(n, edges),
                         pattern == "odd-k4" ? MinorPattern::OddK4 : MinorPattern::OddK32);
      },
      py::arg("n"), py::arg("edges"), py::arg("pattern"));

  m.def(
      "met_oracle",
      [](int n, const std::vector<PyEdge>& edges, const std::map<EdgeId, double>& x,
         double tol) { return met_oracle(make_graph(n, edges), x, tol); },
      py::arg("n"), py::arg("edges"), py::arg("x"), py::arg("tol") = kTolX,
      "brute force MET membership over all simple odd cycles");

  m.def(
      "feasibility_oracle",
      [](int n, const std::vector<PyEdge>& edges, const std::map<EdgeId, double>& c,
         std::uint64_t seed) {
        FeasibilityResult r = feasibility_oracle(make_graph(n, edges), c, -1, 64, 5000, seed);
        py::dict out;
        out["found"] = r.found;
        out["best_residual"] = r.best_residual;
        out["P"] = r.P;
        return out;
      },
      py::arg("n"), py::arg("edges"), py::arg("c"), py::arg("seed") = 0);

  m.def(
      "generate_instance",
      [](std::uint64_t seed, int size, const std::string& kind) {
        InstanceKind k = kind == "k32free"            ? InstanceKind::K32Free
                         : kind == "with-k32-leaves" ? InstanceKind::WithK32Leaves
                         : kind == "with-splits"     ? InstanceKind::WithSplits
                                                     : throw std::invalid_argument(
                                                           "unknown instance kind: " + kind);
        GeneratedInstance gi = generate_instance(seed, size, k);
        return py::make_tuple(gi.graph.vertex_count(), dump_edges(gi.graph), gi.c);
      },
      py::arg("seed"), py::arg("size"), py::arg("kind"));

  m.def(
      "parse_instance",
      [](const std::string& text) {
        InstanceFile f = parse_instance(text);
        py::dict out;
        out["n"] = f.graph.vertex_count();
        out["edges"] = dump_edges(f.graph);
        out["c"] = f.c;
        out["x"] = f.x;
        out["config"] = f.config ? py::cast(*f.config) : py::none();
        return out;
      },
      py::arg("text"));

  m.def("to_metric", [](const std::map<EdgeId, double>& c) { return to_metric(c); });
  m.def("to_cosines", [](const std::map<EdgeId, double>& x) { return to_cosines(x); });
}

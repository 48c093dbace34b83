#include "sgc/instance_io.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

namespace sgc {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error("instance: " + msg); }

double get_number(const json& j, const char* what) {
  if (!j.is_number()) fail(std::string(what) + " must be a number");
  return j.get<double>();
}

}  // namespace

InstanceFile parse_instance(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& ex) {
    fail(std::string("invalid JSON: ") + ex.what());
  }
  if (!j.is_object()) fail("top level must be an object");
  if (!j.contains("n") || !j["n"].is_number_integer()) fail("missing integer field n");
  const int n = j["n"].get<int>();
  if (n < 1) fail("n must be positive");
  if (!j.contains("edges") || !j["edges"].is_array()) fail("missing edges array");

  InstanceFile f;
  std::vector<Edge> edges;
  std::set<EdgeId> seen;
  int kind = -1;  // 0 = c, 1 = x
  for (const auto& je : j["edges"]) {
    if (!je.is_object()) fail("edge entries must be objects");
    for (const char* key : {"id", "u", "v", "sign"})
      if (!je.contains(key)) fail(std::string("edge missing field ") + key);
    Edge e;
    if (!je["id"].is_string()) fail("edge id must be a string");
    e.id = je["id"].get<std::string>();
    if (!seen.insert(e.id).second) fail("duplicate edge id " + e.id);
    if (!je["u"].is_number_integer() || !je["v"].is_number_integer())
      fail("edge endpoints must be integers");
    e.u = je["u"].get<int>();
    e.v = je["v"].get<int>();
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n) fail("edge endpoint out of range");
    if (e.u == e.v) fail("loops are not allowed");
    std::string sign = je["sign"].get<std::string>();
    if (sign == "even")
      e.parity = Parity::Even;
    else if (sign == "odd")
      e.parity = Parity::Odd;
    else
      fail("edge sign must be \"even\" or \"odd\"");

    bool has_c = je.contains("c"), has_x = je.contains("x");
    if (has_c == has_x) fail("each edge needs exactly one of c and x");
    int this_kind = has_x ? 1 : 0;
    if (kind == -1) kind = this_kind;
    if (kind != this_kind) fail("mixing c and x edges in one file");
    if (has_c) {
      double c = get_number(je["c"], "c");
      if (std::abs(c) > 1.0 + 1e-12) fail("c outside [-1, 1] on edge " + e.id);
      f.c[e.id] = c;
      f.x[e.id] = std::acos(std::clamp(c, -1.0, 1.0)) / M_PI;
    } else {
      double x = get_number(je["x"], "x");
      if (x < -1e-12 || x > 1.0 + 1e-12) fail("x outside [0, 1] on edge " + e.id);
      f.x[e.id] = x;
      f.c[e.id] = std::cos(M_PI * std::clamp(x, 0.0, 1.0));
    }
    edges.push_back(std::move(e));
  }
  f.given_as_x = kind == 1;
  f.graph = SignedGraph(n, std::move(edges));

  if (j.contains("config")) {
    const auto& jc = j["config"];
    if (!jc.is_object() || !jc.contains("p") || !jc["p"].is_array())
      fail("config must be an object with a p matrix");
    const auto& jp = jc["p"];
    int d = static_cast<int>(jp.size());
    if (d == 0) fail("config p must be nonempty");
    Eigen::MatrixXd p(d, n);
    for (int i = 0; i < d; ++i) {
      if (!jp[i].is_array() || static_cast<int>(jp[i].size()) != n)
        fail("config p rows must have n entries");
      for (int v = 0; v < n; ++v) p(i, v) = get_number(jp[i][v], "config entry");
    }
    for (int v = 0; v < n; ++v)
      if (std::abs(p.col(v).norm() - 1.0) > 1e-8) fail("config columns must be unit vectors");
    f.config = std::move(p);
  }
  return f;
}

InstanceFile load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("instance: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

std::string emit_instance(const InstanceFile& f) {
  json j;
  j["n"] = f.graph.vertex_count();
  j["edges"] = json::array();
  for (const auto& e : f.graph.edges()) {
    json je;
    je["id"] = e.id;
    je["u"] = e.u;
    je["v"] = e.v;
    je["sign"] = e.parity == Parity::Odd ? "odd" : "even";
    if (f.given_as_x)
      je["x"] = f.x.at(e.id);
    else
      je["c"] = f.c.at(e.id);
    j["edges"].push_back(std::move(je));
  }
  if (f.config) {
    json jp = json::array();
    for (int i = 0; i < f.config->rows(); ++i) {
      json row = json::array();
      for (int v = 0; v < f.config->cols(); ++v) row.push_back((*f.config)(i, v));
      jp.push_back(std::move(row));
    }
    j["config"] = {{"p", std::move(jp)}};
  }
  return j.dump(2) + "\n";
}

}  // namespace sgc

#include "flexnd/instance.hpp"

#include <fstream>
#include <sstream>

#include "flexnd/error.hpp"
#include "json.hpp"

namespace flexnd {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void parse_fail(const std::string& what) {
  throw Error(ErrorKind::kParseError, what);
}

const Json& field(const Json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) parse_fail(std::string("missing field '") + key + "'");
  return obj.at(key);
}

int as_int(const Json& v, const char* what) {
  if (!v.is_number_integer()) parse_fail(std::string(what) + " must be an integer");
  return v.get<int>();
}

std::vector<int> int_list(const Json& v, std::size_t len, const char* what) {
  if (!v.is_array() || v.size() != len) {
    parse_fail(std::string(what) + " must be a list of " + std::to_string(len) + " integers");
  }
  std::vector<int> out;
  for (const Json& x : v) out.push_back(as_int(x, what));
  return out;
}

Json problem_json(const Problem& problem) {
  Json p = Json::object();
  if (const auto* f = std::get_if<FlexProblem>(&problem)) {
    p["kind"] = "flex";
    Json pairs = Json::array();
    for (const auto& r : f->pairs) pairs.push_back({r.s, r.t, r.p, r.q});
    p["pairs"] = pairs;
  } else if (const auto* b = std::get_if<BulkProblem>(&problem)) {
    p["kind"] = "bulk";
    Json scenarios = Json::array();
    for (const auto& sc : b->scenarios) {
      Json s = Json::object();
      s["fail"] = sc.fail.ids();
      Json pairs = Json::array();
      for (auto [u, v] : sc.pairs) pairs.push_back({u, v});
      s["pairs"] = pairs;
      scenarios.push_back(s);
    }
    p["scenarios"] = scenarios;
  } else {
    const auto& r = std::get<RelativeProblem>(problem);
    p["kind"] = "rsndp";
    Json pairs = Json::array();
    for (const auto& q : r.pairs) pairs.push_back({q.s, q.t, q.r});
    p["pairs"] = pairs;
  }
  return p;
}

Problem parse_problem(const Json& p, const FaultGraph& g) {
  const Json& kind = field(p, "kind");
  if (!kind.is_string()) parse_fail("problem kind must be a string");
  const std::string k = kind.get<std::string>();
  if (k == "flex") {
    FlexProblem f;
    for (const Json& pr : field(p, "pairs")) {
      const auto v = int_list(pr, 4, "flex pair");
      f.pairs.push_back({v[0], v[1], v[2], v[3]});
    }
    validate(g, f.pairs);
    return f;
  }
  if (k == "bulk") {
    BulkProblem b;
    for (const Json& s : field(p, "scenarios")) {
      BulkScenario sc{g.empty_set(), {}};
      for (const Json& id : field(s, "fail")) {
        const int e = as_int(id, "failed edge id");
        if (e < 0 || e >= g.num_edges()) parse_fail("failed edge id out of range");
        sc.fail.insert(e);
      }
      for (const Json& pr : field(s, "pairs")) {
        const auto v = int_list(pr, 2, "scenario pair");
        sc.pairs.emplace_back(v[0], v[1]);
      }
      b.scenarios.push_back(std::move(sc));
    }
    validate(g, b.scenarios);
    return b;
  }
  if (k == "rsndp") {
    RelativeProblem r;
    for (const Json& pr : field(p, "pairs")) {
      const auto v = int_list(pr, 3, "rsndp pair");
      r.pairs.push_back({v[0], v[1], v[2]});
    }
    validate(g, r.pairs);
    return r;
  }
  parse_fail("unknown problem kind '" + k + "'");
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    parse_fail(e.what());
  }
}

}  // namespace

std::string serialize_instance(const Instance& inst) {
  Json doc = Json::object();
  doc["version"] = kInstanceFormatVersion;
  doc["name"] = inst.name;
  doc["vertices"] = inst.graph.num_vertices();
  Json edges = Json::array();
  for (const Edge& e : inst.graph.edges()) {
    edges.push_back({e.u, e.v, e.cost, e.safe() ? "safe" : "unsafe"});
  }
  doc["edges"] = edges;
  doc["problem"] = problem_json(inst.problem);
  return doc.dump(2) + "\n";
}

Instance parse_instance(std::string_view text) {
  const Json doc = parse_json(text);
  if (as_int(field(doc, "version"), "version") != kInstanceFormatVersion) {
    parse_fail("unsupported format version");
  }
  Instance inst;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) parse_fail("name must be a string");
    inst.name = doc["name"].get<std::string>();
  }
  const int n = as_int(field(doc, "vertices"), "vertices");
  std::vector<Edge> edges;
  for (const Json& e : field(doc, "edges")) {
    if (!e.is_array() || e.size() != 4 || !e[2].is_number() || !e[3].is_string()) {
      parse_fail("edge must be [u, v, cost, \"safe\"|\"unsafe\"]");
    }
    Edge edge;
    edge.id = static_cast<int>(edges.size());
    edge.u = as_int(e[0], "edge endpoint");
    edge.v = as_int(e[1], "edge endpoint");
    edge.cost = e[2].get<double>();
    const std::string label = e[3].get<std::string>();
    if (label != "safe" && label != "unsafe") parse_fail("edge label must be safe or unsafe");
    edge.safety = label == "safe" ? Safety::kSafe : Safety::kUnsafe;
    edges.push_back(edge);
  }
  try {
    inst.graph = FaultGraph(n, std::move(edges));
    inst.problem = parse_problem(field(doc, "problem"), inst.graph);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kParseError) throw;
    parse_fail(e.what());
  }
  return inst;
}

std::string load_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) parse_fail("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kInvalidArgument, "cannot write " + path);
  out << text;
}

Instance load_instance(const std::string& path) { return parse_instance(load_text(path)); }

std::string serialize_solution(const Solution& sol) {
  Json doc = Json::object();
  doc["version"] = kInstanceFormatVersion;
  doc["instance"] = sol.instance;
  doc["algorithm"] = sol.algorithm;
  doc["seed"] = sol.seed;
  doc["cost"] = sol.cost;
  doc["edges"] = sol.edges.ids();
  return doc.dump(2) + "\n";
}

Solution parse_solution(std::string_view text, const FaultGraph& g) {
  const Json doc = parse_json(text);
  Solution sol;
  sol.edges = g.empty_set();
  for (const Json& id : field(doc, "edges")) {
    const int e = as_int(id, "edge id");
    if (e < 0 || e >= g.num_edges()) parse_fail("solution edge id out of range");
    sol.edges.insert(e);
  }
  if (doc.contains("instance") && doc["instance"].is_string()) sol.instance = doc["instance"];
  if (doc.contains("algorithm") && doc["algorithm"].is_string()) sol.algorithm = doc["algorithm"];
  if (doc.contains("seed") && doc["seed"].is_number_unsigned()) sol.seed = doc["seed"];
  sol.cost = g.cost(sol.edges);
  return sol;
}

bool operator==(const Instance& a, const Instance& b) {
  return serialize_instance(a) == serialize_instance(b);
}

}  // namespace flexnd

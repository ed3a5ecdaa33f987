#include "relpress/system_file.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

namespace relpress {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
  throw std::runtime_error(origin + ": " + what);
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> known,
                         const std::string& origin, const std::string& section) {
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* k : known)
      if (key == k) ok = true;
    if (!ok) fail(origin, "unknown key '" + key + "' in " + section);
  }
}

Word parse_point_word(const Sft& presentation, const json& j, const std::string& origin,
                      const std::string& field) {
  if (!j.is_string()) fail(origin, "point." + field + " must be a string");
  std::string s = j.get<std::string>();
  if (s.empty()) return Word{};
  try {
    return presentation.parse_word(s);
  } catch (const std::exception& e) {
    fail(origin, "point." + field + ": " + e.what());
  }
}

}  // namespace

SystemSpec parse_system_text(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(origin, std::string("JSON parse error: ") + e.what());
  }
  if (!root.is_object()) fail(origin, "top level must be an object");
  reject_unknown_keys(root, {"alphabet_x", "edges_x", "code", "potential", "point", "markov"},
                      origin, "the top level");
  for (const char* req : {"alphabet_x", "edges_x", "code"})
    if (!root.contains(req)) fail(origin, std::string("missing required key '") + req + "'");

  if (!root["alphabet_x"].is_array()) fail(origin, "alphabet_x must be a list of strings");
  std::vector<std::string> alphabet;
  for (const auto& a : root["alphabet_x"]) {
    if (!a.is_string()) fail(origin, "alphabet_x entries must be strings");
    alphabet.push_back(a.get<std::string>());
  }
  if (!root["edges_x"].is_array()) fail(origin, "edges_x must be a list of pairs");
  std::vector<std::pair<std::string, std::string>> edges;
  for (const auto& e : root["edges_x"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
      fail(origin, "edges_x entries must be [from, to] string pairs");
    edges.push_back({e[0].get<std::string>(), e[1].get<std::string>()});
  }
  Sft X;
  try {
    X = Sft::make(alphabet, edges);
  } catch (const std::exception& e) {
    fail(origin, std::string("alphabet_x/edges_x: ") + e.what());
  }

  if (!root["code"].is_object()) fail(origin, "code must be a symbol-to-symbol map");
  std::map<std::string, std::string> symbol_map;
  for (const auto& [k, v] : root["code"].items()) {
    if (!v.is_string()) fail(origin, "code values must be strings");
    symbol_map[k] = v.get<std::string>();
  }
  std::optional<FactorCode> code;
  try {
    code.emplace(X, symbol_map);
  } catch (const std::exception& e) {
    fail(origin, std::string("code: ") + e.what());
  }

  LocallyConstantPotential f = LocallyConstantPotential::zero(code->domain());
  bool has_potential = false;
  if (root.contains("potential")) {
    const json& p = root["potential"];
    if (!p.is_object()) fail(origin, "potential must be an object");
    reject_unknown_keys(p, {"window_radius", "table", "normalize"}, origin, "potential");
    for (const char* req : {"window_radius", "table", "normalize"})
      if (!p.contains(req)) fail(origin, std::string("potential missing '") + req + "'");
    if (!p["window_radius"].is_number_integer())
      fail(origin, "potential.window_radius must be an integer");
    if (!p["table"].is_object()) fail(origin, "potential.table must be a word-to-value map");
    if (!p["normalize"].is_boolean()) fail(origin, "potential.normalize must be a boolean");
    std::map<std::string, double> table;
    for (const auto& [k, v] : p["table"].items()) {
      if (!v.is_number()) fail(origin, "potential.table values must be numbers");
      table[k] = v.get<double>();
    }
    try {
      f = LocallyConstantPotential::make(code->domain(), p["window_radius"].get<int>(), table,
                                         p["normalize"].get<bool>());
    } catch (const std::exception& e) {
      fail(origin, std::string("potential: ") + e.what());
    }
    has_potential = true;
  }

  std::optional<EventuallyPeriodicPoint> point;
  if (root.contains("point")) {
    const json& pt = root["point"];
    if (!pt.is_object()) fail(origin, "point must be an object");
    reject_unknown_keys(pt, {"left_tail", "center", "right_tail"}, origin, "point");
    for (const char* req : {"left_tail", "center", "right_tail"})
      if (!pt.contains(req)) fail(origin, std::string("point missing '") + req + "'");
    const Sft& Y = code->image();
    Word left = parse_point_word(Y, pt["left_tail"], origin, "left_tail");
    Word center = parse_point_word(Y, pt["center"], origin, "center");
    Word right = parse_point_word(Y, pt["right_tail"], origin, "right_tail");
    try {
      point.emplace(Y, left, center, right, 0);
    } catch (const std::exception& e) {
      fail(origin, std::string("point: ") + e.what());
    }
  }

  std::optional<MarkovSampler> markov;
  if (root.contains("markov")) {
    const json& mk = root["markov"];
    if (!mk.is_object()) fail(origin, "markov must be an object");
    reject_unknown_keys(mk, {"matrix", "seed"}, origin, "markov");
    for (const char* req : {"matrix", "seed"})
      if (!mk.contains(req)) fail(origin, std::string("markov missing '") + req + "'");
    if (!mk["matrix"].is_array()) fail(origin, "markov.matrix must be a list of rows");
    if (!mk["seed"].is_number_unsigned() && !mk["seed"].is_number_integer())
      fail(origin, "markov.seed must be an integer");
    std::vector<std::vector<double>> P;
    for (const auto& row : mk["matrix"]) {
      if (!row.is_array()) fail(origin, "markov.matrix rows must be lists");
      std::vector<double> r;
      for (const auto& x : row) {
        if (!x.is_number()) fail(origin, "markov.matrix entries must be numbers");
        r.push_back(x.get<double>());
      }
      P.push_back(std::move(r));
    }
    try {
      markov.emplace(code->domain(), std::move(P), mk["seed"].get<std::uint64_t>());
    } catch (const std::exception& e) {
      fail(origin, std::string("markov: ") + e.what());
    }
  }

  return SystemSpec{*code, f, has_potential, std::move(point), std::move(markov)};
}

SystemSpec load_system_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_system_text(ss.str(), path);
}

}  // namespace relpress

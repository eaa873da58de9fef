#include "probint/instance_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "probint/predparse.hpp"

namespace probint::io {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) { throw InputError(what); }

model::Atom atom_from_json(const json& v, const std::string& where) {
  if (v.is_number_integer()) return model::Atom(v.get<long long>());
  if (v.is_string()) return model::Atom(v.get<std::string>());
  fail(where + ": atom values must be integers or strings");
}

nlohmann::ordered_json atom_to_json(const model::Atom& a) {
  if (std::holds_alternative<long long>(a))
    return nlohmann::ordered_json(std::get<long long>(a));
  return nlohmann::ordered_json(std::get<std::string>(a));
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> keys,
                         const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known = known || it.key() == k;
    if (!known) fail(where + ": unknown key '" + it.key() + "'");
  }
}

model::CoordinateSpace parse_coordinate(const json& c, std::size_t pos) {
  const std::string where = "coordinates[" + std::to_string(pos) + "]";
  if (!c.is_object()) fail(where + " must be an object");
  reject_unknown_keys(c, {"name", "values", "probs"}, where);
  if (!c.contains("name") || !c["name"].is_string())
    fail(where + " needs a string 'name'");
  if (!c.contains("values") || !c["values"].is_array() || c["values"].empty())
    fail(where + " needs a non-empty 'values' array");

  model::CoordinateSpace coord;
  coord.name = c["name"].get<std::string>();
  for (const json& v : c["values"])
    coord.atoms.push_back(atom_from_json(v, where));

  if (!c.contains("probs")) fail(where + " needs 'probs'");
  const json& probs = c["probs"];
  if (probs.is_string() && probs.get<std::string>() == "uniform") {
    Rational p(1, static_cast<long>(coord.atoms.size()));
    p.canonicalize();
    coord.probs.assign(coord.atoms.size(), p);
  } else if (probs.is_array()) {
    if (probs.size() != coord.atoms.size())
      fail(where + ": 'probs' must match 'values' in length");
    for (const json& p : probs) {
      if (!p.is_string())
        fail(where + ": probabilities must be fraction strings like \"1/3\"");
      coord.probs.push_back(parse_rational(p.get<std::string>()));
    }
  } else {
    fail(where + ": 'probs' must be \"uniform\" or an array of fraction strings");
  }
  return coord;
}

model::Event parse_tuple_event(const model::ProductSpace& space, const json& e,
                               const std::string& name,
                               const std::string& where) {
  std::vector<int> vars;
  if (e.contains("vars")) {
    if (!e["vars"].is_array()) fail(where + ": 'vars' must be an array");
    for (const json& v : e["vars"]) {
      if (!v.is_number_integer())
        fail(where + ": 'vars' entries must be 1-based coordinate indices");
      vars.push_back(v.get<int>());
    }
  } else {
    vars.resize(space.dim());
    for (std::size_t j = 0; j < space.dim(); ++j)
      vars[j] = static_cast<int>(j) + 1;
  }
  if (vars.empty()) fail(where + ": 'vars' must not be empty");
  for (int v : vars)
    if (v < 1 || v > static_cast<int>(space.dim()))
      fail(where + ": coordinate index " + std::to_string(v) +
           " is out of range");
  {
    std::vector<int> sorted_vars = vars;
    std::sort(sorted_vars.begin(), sorted_vars.end());
    if (std::adjacent_find(sorted_vars.begin(), sorted_vars.end()) !=
        sorted_vars.end())
      fail(where + ": 'vars' entries must be distinct");
  }

  model::Event raw;
  raw.name = name;
  for (int v : vars) raw.support.push_back(v - 1);
  std::sort(raw.support.begin(), raw.support.end());

  std::vector<std::size_t> strides(raw.support.size());
  std::size_t cells = 1;
  for (std::size_t k = raw.support.size(); k-- > 0;) {
    strides[k] = cells;
    cells *= space.atom_count(raw.support[k]);
  }
  raw.table.assign(cells, 0);

  if (!e.contains("tuples") || !e["tuples"].is_array())
    fail(where + " needs a 'tuples' array");
  for (const json& tup : e["tuples"]) {
    if (!tup.is_array() || tup.size() != vars.size())
      fail(where + ": each tuple must list one value per entry of 'vars'");
    std::size_t index = 0;
    for (std::size_t c = 0; c < vars.size(); ++c) {
      const int coord = vars[c] - 1;
      const model::Atom a = atom_from_json(tup[c], where);
      const int digit = space.coords[coord].find_atom(a);
      if (digit < 0)
        fail(where + ": tuple value " + model::atom_to_string(a) +
             " is not an atom of coordinate '" + space.coords[coord].name + "'");
      const std::size_t pos =
          std::lower_bound(raw.support.begin(), raw.support.end(), coord) -
          raw.support.begin();
      index += static_cast<std::size_t>(digit) * strides[pos];
    }
    raw.table[index] = 1;
  }
  return model::normalize_support(space, raw);
}

}  // namespace

model::Instance parse_instance_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(std::string("instance JSON is malformed: ") + e.what());
  }
  if (!j.is_object()) fail("instance JSON must be an object");
  reject_unknown_keys(j, {"coordinates", "events"}, "instance");
  if (!j.contains("coordinates") || !j["coordinates"].is_array())
    fail("instance needs a 'coordinates' array");
  if (!j.contains("events") || !j["events"].is_array())
    fail("instance needs an 'events' array");

  model::Instance inst;
  for (std::size_t pos = 0; pos < j["coordinates"].size(); ++pos)
    inst.space.coords.push_back(parse_coordinate(j["coordinates"][pos], pos));
  for (std::size_t a = 0; a < inst.space.coords.size(); ++a)
    for (std::size_t b = a + 1; b < inst.space.coords.size(); ++b)
      if (inst.space.coords[a].name == inst.space.coords[b].name)
        fail("duplicate coordinate name '" + inst.space.coords[a].name + "'");
  inst.space.validate();

  for (std::size_t pos = 0; pos < j["events"].size(); ++pos) {
    const json& e = j["events"][pos];
    const std::string where = "events[" + std::to_string(pos) + "]";
    if (!e.is_object()) fail(where + " must be an object");
    reject_unknown_keys(e, {"name", "predicate", "tuples", "vars"}, where);
    if (!e.contains("name") || !e["name"].is_string())
      fail(where + " needs a string 'name'");
    const std::string name = e["name"].get<std::string>();
    const bool has_pred = e.contains("predicate");
    const bool has_tuples = e.contains("tuples");
    if (has_pred == has_tuples)
      fail(where + " needs exactly one of 'predicate' or 'tuples'");
    if (has_pred) {
      if (e.contains("vars"))
        fail(where + ": 'vars' only accompanies 'tuples'");
      if (!e["predicate"].is_string())
        fail(where + ": 'predicate' must be a string");
      const auto ast = predparse::parse_predicate(e["predicate"].get<std::string>());
      inst.events.push_back(predparse::compile_predicate(inst.space, *ast, name));
    } else {
      inst.events.push_back(parse_tuple_event(inst.space, e, name, where));
    }
  }
  for (std::size_t a = 0; a < inst.events.size(); ++a)
    for (std::size_t b = a + 1; b < inst.events.size(); ++b)
      if (inst.events[a].name == inst.events[b].name)
        fail("duplicate event name '" + inst.events[a].name + "'");
  for (const model::Event& e : inst.events) e.validate(inst.space);
  return inst;
}

model::Instance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open instance file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_instance_json(buf.str());
  } catch (const InputError& e) {
    fail(path + ": " + e.what());
  }
}

std::string instance_to_json_string(const model::Instance& instance) {
  nlohmann::ordered_json j;
  j["coordinates"] = nlohmann::ordered_json::array();
  for (const model::CoordinateSpace& coord : instance.space.coords) {
    nlohmann::ordered_json c;
    c["name"] = coord.name;
    c["values"] = nlohmann::ordered_json::array();
    for (const model::Atom& a : coord.atoms) c["values"].push_back(atom_to_json(a));
    c["probs"] = nlohmann::ordered_json::array();
    for (const Rational& p : coord.probs) c["probs"].push_back(to_fraction_string(p));
    j["coordinates"].push_back(std::move(c));
  }
  j["events"] = nlohmann::ordered_json::array();
  for (const model::Event& e : instance.events) {
    nlohmann::ordered_json ev;
    ev["name"] = e.name;
    ev["vars"] = nlohmann::ordered_json::array();
    for (int s : e.support) ev["vars"].push_back(s + 1);
    ev["tuples"] = nlohmann::ordered_json::array();
    std::vector<std::size_t> digit(e.support.size(), 0);
    for (std::size_t idx = 0; idx < e.table.size(); ++idx) {
      if (e.table[idx]) {
        nlohmann::ordered_json tup = nlohmann::ordered_json::array();
        for (std::size_t k = 0; k < e.support.size(); ++k)
          tup.push_back(
              atom_to_json(instance.space.coords[e.support[k]].atoms[digit[k]]));
        ev["tuples"].push_back(std::move(tup));
      }
      for (std::size_t d = e.support.size(); d-- > 0;) {
        if (++digit[d] < instance.space.atom_count(e.support[d])) break;
        digit[d] = 0;
      }
    }
    j["events"].push_back(std::move(ev));
  }
  return j.dump(2) + "\n";
}

model::ProductSpace uniform_cube(int m, long long c) {
  if (m < 1) throw InputError("uniform_cube: need at least one coordinate");
  if (c < 0) throw InputError("uniform_cube: side must be non-negative");
  model::ProductSpace space;
  Rational p(1, static_cast<long>(c) + 1);
  p.canonicalize();
  for (int j = 0; j < m; ++j) {
    model::CoordinateSpace coord;
    coord.name = "x" + std::to_string(j + 1);
    for (long long v = 0; v <= c; ++v) {
      coord.atoms.emplace_back(v);
      coord.probs.push_back(p);
    }
    space.coords.push_back(std::move(coord));
  }
  space.validate();
  return space;
}

std::vector<model::Event> parse_constraint_lines(
    const std::string& text, const model::ProductSpace& cube) {
  std::vector<model::Event> out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string body = line.substr(first, last - first + 1);
    try {
      const predparse::AstPtr kept = predparse::parse_predicate(body);
      // The event of interest is the violation: the constraint's negation.
      const auto violated = std::make_shared<predparse::Ast>(
          predparse::Ast{predparse::Not{kept}, kept->offset});
      out.push_back(predparse::compile_predicate(
          cube, *violated, "V" + std::to_string(out.size() + 1)));
    } catch (const InputError& e) {
      fail("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace probint::io
